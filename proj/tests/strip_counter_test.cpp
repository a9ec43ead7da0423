#include "lattri/brute_force.hpp"
#include "lattri/strip_counter.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace lattri;

namespace {

BigCount binom(int n, int k) {
  BigCount r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Lemma-style recursion straight off subshape_expansion, memoised on the ceiling.
BigCount reference_count(const ShapeProfile& s, std::map<std::vector<LatticePoint>, BigCount>& memo) {
  if (s.doubled_area() == 0) return 1;
  if (auto it = memo.find(s.ceiling().points()); it != memo.end()) return it->second;
  BigCount total = 0;
  for (const auto& [sign, sub] : subshape_expansion(s)) total += sign * reference_count(sub, memo);
  memo.emplace(s.ceiling().points(), total);
  return total;
}

BigCount reference_count(const ShapeProfile& s) {
  std::map<std::vector<LatticePoint>, BigCount> memo;
  return reference_count(s, memo);
}

LatticePolygon polygon_of(const ShapeProfile& s) {
  std::vector<LatticePoint> v;
  for (const auto& p : s.floor().points()) v.push_back(p);
  const auto& c = s.ceiling().points();
  for (auto it = c.rbegin(); it != c.rend(); ++it) v.push_back(*it);
  // keep only true corners
  std::vector<LatticePoint> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[(i + v.size() - 1) % v.size()];
    const auto& b = v[i];
    const auto& c2 = v[(i + 1) % v.size()];
    if (b == a) continue;
    if (doubled_area(a, b, c2) != 0) out.push_back(b);
  }
  return LatticePolygon(out);
}

}  // namespace

TEST(StripCounter, EmptyRectangleIsOne) {
  EXPECT_EQ(count_rectangle(3, 0), 1);
  EXPECT_EQ(count_rectangle(1, 0), 1);
  EXPECT_THROW(count_rectangle(0, 2), std::invalid_argument);
}

TEST(StripCounter, CentralBinomials) {
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(count_rectangle(1, n), binom(2 * n, n)) << n;
  EXPECT_EQ(count_rectangle(1, 4), 70);
}

TEST(StripCounter, MatchesBruteForceOnSmallRectangles) {
  for (int m = 1; m <= 8; ++m)
    for (int n = 1; m * n <= 8; ++n) {
      CountOptions o;
      o.orientation = Orientation::as_given;
      EXPECT_EQ(count_rectangle(m, n, {}, o), brute_force_count(LatticePolygon::rectangle(m, n))) << m << 'x' << n;
    }
}

TEST(StripCounter, MatchesBruteForceOnSlantedShapes) {
  const std::vector<ShapeProfile> shapes{
      ShapeProfile(Polyline({{0, 0}, {3, 1}}), Polyline({{0, 2}, {3, 3}})),
      ShapeProfile(Polyline::horizontal(4, 0), Polyline({{0, 2}, {1, 3}, {3, 1}, {4, 2}})),
      ShapeProfile(Polyline({{0, 0}, {2, 1}}), Polyline({{0, 3}, {1, 2}, {2, 4}})),
      ShapeProfile(Polyline::horizontal(5, 0), Polyline({{0, 1}, {5, 2}})),
      ShapeProfile(Polyline({{0, 0}, {1, -1}, {3, 0}}), Polyline({{0, 1}, {3, 2}})),
  };
  for (const auto& s : shapes) {
    const auto bf = brute_force_count(polygon_of(s));
    EXPECT_EQ(count_shape(s), bf);
    EXPECT_EQ(reference_count(s), bf);
  }
}

TEST(StripCounter, FastEngineMatchesExpansionRecursion) {
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 3; ++n) {
      const auto s = ShapeProfile::rectangle(m, n);
      CountOptions o;
      o.orientation = Orientation::as_given;
      EXPECT_EQ(count_rectangle(m, n, {}, o), reference_count(s)) << m << 'x' << n;
    }
}

TEST(StripCounter, GoldenSmall) {
  EXPECT_EQ(count_rectangle(5, 1), 252);
  EXPECT_EQ(count_rectangle(5, 2), 182132);
  EXPECT_EQ(count_rectangle(6, 2), 2801708);
  EXPECT_EQ(count_rectangle(5, 3), 182881520);
}

TEST(StripCounter, SymmetricInOrientation) {
  CountOptions o;
  o.orientation = Orientation::as_given;
  for (int m = 1; m <= 4; ++m)
    for (int n = m + 1; n <= 4; ++n) EXPECT_EQ(count_rectangle(m, n, {}, o), count_rectangle(n, m, {}, o));
}

TEST(StripCounter, ModularMatchesBigint) {
  for (auto [m, n] : {std::pair{2, 3}, {3, 3}, {5, 2}, {4, 4}}) {
    const auto exact = count_rectangle(m, n);
    EXPECT_EQ(count_rectangle(m, n, CountMode::modular()), exact);
    EXPECT_EQ(count_rectangle(m, n, CountMode::modular(modular::default_primes(5))), exact);
  }
}

TEST(StripCounter, ModulusTooSmallIsRefused) {
  EXPECT_THROW(count_rectangle(4, 4, CountMode::modular({97, 101, 103})), ModulusTooSmall);
}

TEST(StripCounter, ResiduesAreReductions) {
  const auto rv = count_shape_residues(ShapeProfile::rectangle(2, 5), {97, 101, 1000003});
  const auto exact = count_rectangle(2, 5);
  for (std::size_t i = 0; i < rv.primes.size(); ++i) EXPECT_EQ(rv.residues[i], exact % rv.primes[i]);
}

TEST(StripCounter, MemoryBudgetNamesLayer) {
  CountOptions o;
  o.memory_budget_bytes = 4096;
  try {
    count_rectangle(3, 4, {}, o);
    FAIL() << "expected a budget failure";
  } catch (const MemoryBudgetExceeded& e) {
    EXPECT_GE(e.layer(), 0);
    EXPECT_NE(std::string(e.what()).find("layer"), std::string::npos);
  }
}

TEST(StripCounter, DeterministicAcrossThreadCounts) {
  CountOptions one, four;
  four.threads = 4;
  EXPECT_EQ(count_rectangle(4, 4, {}, one), count_rectangle(4, 4, {}, four));
  EXPECT_EQ(count_rectangle(3, 5, CountMode::modular(), one), count_rectangle(3, 5, CountMode::modular(), four));
}

TEST(CountTable, AllEntriesPositive) {
  const CountTable t(ShapeProfile::rectangle(3, 2));
  ASSERT_EQ(t.layer(0).size(), 1u);
  EXPECT_EQ(t.layer(0)[0].count, 1);
  std::size_t shapes = 0;
  for (std::size_t a = 0; a < t.layer_count(); ++a)
    for (const auto& e : t.layer(a)) {
      EXPECT_GE(e.count, 1);
      ++shapes;
    }
  EXPECT_GT(shapes, 10u);
  EXPECT_EQ(t.at(Polyline::horizontal(3, 2)), count_rectangle(3, 2));
}

TEST(SubshapeExpansion, UnitSquare) {
  const auto terms = subshape_expansion(ShapeProfile::rectangle(1, 1));
  ASSERT_EQ(terms.size(), 2u);
  for (const auto& [sign, sub] : terms) {
    EXPECT_EQ(sign, 1);
    EXPECT_EQ(sub.doubled_area(), 1);
    EXPECT_EQ(reference_count(sub), 1);
  }
}

TEST(SubshapeExpansion, FlatShape) { EXPECT_TRUE(subshape_expansion(ShapeProfile::rectangle(2, 0)).empty()); }

TEST(SubshapeExpansion, TwoByOne) {
  // three single-tile terms and one pair of corners with a minus sign
  const auto terms = subshape_expansion(ShapeProfile::rectangle(2, 1));
  int plus = 0, minus = 0;
  BigCount total = 0;
  for (const auto& [sign, sub] : terms) {
    (sign > 0 ? plus : minus)++;
    total += sign * reference_count(sub);
  }
  EXPECT_EQ(plus, 3);
  EXPECT_EQ(minus, 1);
  EXPECT_EQ(total, 6);
}

TEST(Capacity, Values) {
  EXPECT_DOUBLE_EQ(capacity(1, 1).capacity, 1.0);
  // published capacities are truncated, not rounded, to four places
  auto trunc4 = [](double c) { return std::floor(c * 1e4) / 1e4; };
  EXPECT_NEAR(trunc4(capacity(5, 2).capacity), 1.7474, 1e-9);
  EXPECT_NEAR(trunc4(capacity(7, 2).capacity), 1.8134, 1e-9);
  EXPECT_THROW(capacity(2, 0), std::invalid_argument);
}

TEST(Convexity, CentralBinomialsAndWidthFive) {
  const auto c1 = convexity_check(1, 10);
  ASSERT_EQ(c1.size(), 9u);
  for (bool b : c1) EXPECT_TRUE(b);
  const auto col = count_rectangle_column(5, 3);
  EXPECT_EQ(col[2], 182132);
  EXPECT_EQ(col[3], 182881520);
  for (bool b : convexity_check(col)) EXPECT_TRUE(b);
}

TEST(Convexity, StrictGrowthAndAnclinBound) {
  for (int m = 1; m <= 4; ++m) {
    const auto col = count_rectangle_column(m, 5);
    for (int n = 1; n < 5; ++n) EXPECT_LT(col[n], col[n + 1]);
    for (int n = 1; n <= 5; ++n) EXPECT_LT(log2_big(col[n]), 3.0 * m * n);
  }
}

TEST(Extrapolate, Values) {
  EXPECT_NEAR(capacity_extrapolate(5, 2), 1.9943, 2e-4);
  // width 1 tends to 2 from below
  const double e = capacity_extrapolate(1, 40);
  EXPECT_LT(e, 2.0);
  EXPECT_GT(e, 1.97);
}
