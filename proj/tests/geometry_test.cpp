#include "lattri/brute_force.hpp"
#include "lattri/geometry.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace lattri;

namespace {

BigCount binom(int n, int k) {
  BigCount r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(DoubledArea, Examples) {
  EXPECT_EQ(doubled_area({0, 0}, {1, 0}, {0, 1}), 1);
  EXPECT_EQ(doubled_area({0, 0}, {2, 0}, {0, 2}), 4);
  EXPECT_EQ(doubled_area({0, 0}, {1, 1}, {2, 2}), 0);
}

TEST(DoubledArea, AntisymmetricUnderSwap) {
  const LatticePoint pts[] = {{0, 0}, {3, -2}, {5, 7}, {-4, 1}, {2, 2}};
  for (auto p : pts)
    for (auto q : pts)
      for (auto r : pts) {
        EXPECT_EQ(doubled_area(p, q, r), -doubled_area(q, p, r));
        EXPECT_EQ(doubled_area(p, q, r), -doubled_area(p, r, q));
        EXPECT_EQ(doubled_area(p, q, r), doubled_area(q, r, p));
      }
}

TEST(Polygon, RejectsClockwiseAndDegenerate) {
  EXPECT_THROW(LatticePolygon({{0, 0}, {0, 1}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(LatticePolygon({{0, 0}, {1, 1}, {2, 2}}), std::invalid_argument);
  EXPECT_EQ(LatticePolygon::rectangle(3, 2).doubled_area(), 12);
  EXPECT_EQ(LatticePolygon::rectangle(3, 2).primitive_edges().size(), 10u);
}

TEST(Polyline, CanonicalPointsAndValues) {
  const Polyline p({{0, 0}, {4, 2}, {5, 2}});
  ASSERT_EQ(p.points().size(), 4u);  // (0,0) (2,1) (4,2) (5,2)
  EXPECT_EQ(p.points()[1], (LatticePoint{2, 1}));
  EXPECT_EQ(p.value_at(1), (Ratio{1, 2}));
  EXPECT_EQ(p.value_at(5), (Ratio{2, 1}));
  EXPECT_EQ(p.doubled_integral(), 4 * 2 + 4);
}

TEST(Shape, RejectsCeilingBelowFloor) {
  EXPECT_THROW(ShapeProfile(Polyline({{0, 0}, {2, 1}}), Polyline({{0, 1}, {2, 0}})), std::invalid_argument);
  // touching only at the ends is fine
  EXPECT_NO_THROW(ShapeProfile(Polyline({{0, 0}, {3, 1}}), Polyline({{0, 0}, {1, 1}, {3, 1}})));
}

TEST(MaximalTiles, UnitSquare) {
  const auto tiles = enumerate_maximal_tiles(ShapeProfile::rectangle(1, 1));
  ASSERT_EQ(tiles.size(), 2u);
  std::set<std::set<LatticePoint>> got;
  for (const auto& t : tiles) {
    EXPECT_EQ(t.kind, TileKind::triangle_vertical_on_strip_boundary);
    ASSERT_EQ(t.triangles.size(), 1u);
    got.insert({t.triangles[0].v.begin(), t.triangles[0].v.end()});
  }
  const std::set<std::set<LatticePoint>> want{{{0, 0}, {0, 1}, {1, 1}}, {{1, 0}, {0, 1}, {1, 1}}};
  EXPECT_EQ(got, want);
}

TEST(MaximalTiles, FlatShapeHasNone) {
  EXPECT_TRUE(enumerate_maximal_tiles(ShapeProfile::rectangle(4, 0)).empty());
}

TEST(MaximalTiles, TwoByOneRectangle) {
  // left corner, right corner, and the two-triangle tile under the peak-free top
  const auto tiles = enumerate_maximal_tiles(ShapeProfile::rectangle(2, 1));
  int k2 = 0, k3 = 0;
  for (const auto& t : tiles) {
    if (t.kind == TileKind::triangle_vertical_on_strip_boundary) ++k2;
    if (t.kind == TileKind::two_triangles_sharing_vertical_side) ++k3;
  }
  EXPECT_EQ(k2, 2);
  EXPECT_EQ(k3, 1);
  EXPECT_EQ(tiles.size(), 3u);
}

// Every enumerated tile is primitive, lies inside the shape, and hangs from its ceiling.
TEST(MaximalTiles, PropertiesOnRandomishShapes) {
  const std::vector<ShapeProfile> shapes{
      ShapeProfile::rectangle(3, 2),
      ShapeProfile(Polyline::horizontal(4, 0), Polyline({{0, 2}, {1, 3}, {3, 1}, {4, 3}})),
      ShapeProfile(Polyline({{0, 0}, {3, 1}}), Polyline({{0, 3}, {3, 4}})),
      ShapeProfile(Polyline::horizontal(5, 0), Polyline({{0, 1}, {5, 3}})),
      ShapeProfile(Polyline::horizontal(3, 0), Polyline({{0, 2}, {1, 1}, {2, 2}, {3, 1}})),
  };
  for (const auto& s : shapes) {
    const auto tiles = enumerate_maximal_tiles(s);
    EXPECT_FALSE(tiles.empty());
    for (const auto& t : tiles) {
      for (const auto& tri : t.triangles) EXPECT_TRUE(tri.primitive());
      if (t.kind == TileKind::triangle_vertical_on_strip_boundary) {
        const auto& v = t.triangles[0].v;
        int on_wall = 0;
        for (auto p : v) on_wall += (p.x == 0 || p.x == s.width());
        EXPECT_EQ(on_wall, 2);
      }
      // the new ceiling is still a shape over the same floor
      EXPECT_NO_THROW(ShapeProfile(s.floor(), remove_tiles(s.ceiling(), {&t})));
      const ShapeProfile rest(s.floor(), remove_tiles(s.ceiling(), {&t}));
      EXPECT_EQ(rest.doubled_area() + t.doubled_area(), s.doubled_area());
    }
  }
}

TEST(BruteForce, SmallRectangles) {
  EXPECT_EQ(brute_force_count(LatticePolygon::rectangle(1, 1)), 2);
  EXPECT_EQ(brute_force_count(LatticePolygon::rectangle(2, 1)), 6);
  EXPECT_EQ(brute_force_count(LatticePolygon::rectangle(2, 2)), 64);
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(brute_force_count(LatticePolygon::rectangle(1, n)), binom(2 * n, n)) << n;
}

TEST(BruteForce, Trapezoids) {
  EXPECT_EQ(brute_force_count(trapezoid_T2(2, 2)), 12);
  BigCount sum = 0;
  // T3(a,d) with a = d+1 (mod 3) is excluded from the width-3 series
  for (int a = 0; a <= 3; ++a)
    if ((a - (3 - a) - 1) % 3 != 0) sum += brute_force_count(trapezoid_T3(a, 3 - a));
  EXPECT_EQ(sum, 19);
}

TEST(BruteForce, RefusesLargePolygons) {
  EXPECT_THROW(brute_force_count(LatticePolygon::rectangle(3, 3)), AreaCapExceeded);
  BruteForceOptions big;
  big.doubled_area_cap = 18;
  EXPECT_NO_THROW(brute_force_count(LatticePolygon::rectangle(3, 3), big));
}

TEST(BruteForce, InvariantUnderReflection) {
  const LatticePolygon p({{0, 0}, {3, 0}, {2, 2}, {0, 1}});
  const LatticePolygon mirrored({{0, 0}, {0, 1}, {-2, 2}, {-3, 0}});
  EXPECT_EQ(brute_force_count(p), brute_force_count(mirrored));
  EXPECT_EQ(brute_force_count(LatticePolygon::rectangle(2, 3)), brute_force_count(LatticePolygon::rectangle(3, 2)));
}

TEST(BruteForce, FilteredCountOfTwoByOne) {
  // no interior edge may join x = 0 to x = 2
  BruteForceOptions o;
  o.forbid_interior_edge = [](LatticePoint a, LatticePoint b) {
    return std::min(a.x, b.x) == 0 && std::max(a.x, b.x) == 2;
  };
  EXPECT_EQ(brute_force_count(LatticePolygon::rectangle(2, 1), o), 4);
}
