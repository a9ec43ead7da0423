#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lattri {

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend constexpr auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
  friend std::ostream& operator<<(std::ostream& os, const LatticePoint& p) {
    return os << '(' << p.x << ',' << p.y << ')';
  }
};

/// Twice the signed area of the triangle pqr (positive when counterclockwise).
constexpr std::int64_t doubled_area(LatticePoint p, LatticePoint q, LatticePoint r) {
  return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
}

inline std::int64_t gcd_abs(std::int64_t a, std::int64_t b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

/// Exact rational number with positive denominator; only used for comparisons.
struct Ratio {
  std::int64_t num;
  std::int64_t den;

  friend constexpr std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    return (static_cast<__int128>(a.num) * b.den) <=> (static_cast<__int128>(b.num) * a.den);
  }
  friend constexpr bool operator==(const Ratio& a, const Ratio& b) { return (a <=> b) == 0; }
};

/// Value at integer abscissa `x` of the line through p and q (p.x < q.x).
constexpr Ratio line_value(LatticePoint p, LatticePoint q, std::int64_t x) {
  const std::int64_t den = q.x - p.x;
  return Ratio{p.y * den + (q.y - p.y) * (x - p.x), den};
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

struct Triangle {
  std::array<LatticePoint, 3> v;

  std::int64_t doubled_area() const { return lattri::doubled_area(v[0], v[1], v[2]); }
  bool primitive() const {
    const auto a = doubled_area();
    return a == 1 || a == -1;
  }
};

/// Simple lattice polygon, vertices in counterclockwise order.
class LatticePolygon {
 public:
  LatticePolygon() = default;
  explicit LatticePolygon(std::vector<LatticePoint> vertices) : vertices_(std::move(vertices)) {
    // collapse repeated vertices (degenerate trapezoids collapse to triangles)
    std::vector<LatticePoint> clean;
    for (const auto& p : vertices_)
      if (clean.empty() || clean.back() != p) clean.push_back(p);
    while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
    vertices_ = std::move(clean);
    validate();
  }

  const std::vector<LatticePoint>& vertices() const { return vertices_; }

  std::int64_t doubled_area() const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const auto& p = vertices_[i];
      const auto& q = vertices_[(i + 1) % vertices_.size()];
      s += p.x * q.y - q.x * p.y;
    }
    return s;
  }

  /// Boundary split into primitive segments, counterclockwise.
  std::vector<std::pair<LatticePoint, LatticePoint>> primitive_edges() const {
    std::vector<std::pair<LatticePoint, LatticePoint>> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const auto& p = vertices_[i];
      const auto& q = vertices_[(i + 1) % vertices_.size()];
      const auto g = gcd_abs(q.x - p.x, q.y - p.y);
      const LatticePoint step{(q.x - p.x) / g, (q.y - p.y) / g};
      LatticePoint a = p;
      for (std::int64_t k = 0; k < g; ++k) {
        LatticePoint b{a.x + step.x, a.y + step.y};
        out.emplace_back(a, b);
        a = b;
      }
    }
    return out;
  }

  static LatticePolygon rectangle(std::int64_t m, std::int64_t n) {
    return LatticePolygon({{0, 0}, {m, 0}, {m, n}, {0, n}});
  }

 private:
  void validate() const {
    if (vertices_.size() < 3) throw std::invalid_argument("polygon needs at least three distinct vertices");
    if (doubled_area() <= 0) throw std::invalid_argument("polygon must be counterclockwise with positive area");
    const auto n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (vertices_[i] == vertices_[j]) throw std::invalid_argument("polygon is not simple");
      }
    }
  }

  std::vector<LatticePoint> vertices_;
};

/// Trapezoid spanned by (0,0), (a,0), (1+c,2), (1,2).
inline LatticePolygon trapezoid_T2(std::int64_t a, std::int64_t c) {
  return LatticePolygon({{0, 0}, {a, 0}, {1 + c, 2}, {1, 2}});
}

/// Trapezoid spanned by (0,0), (a,0), (1+d,3), (1,3).
inline LatticePolygon trapezoid_T3(std::int64_t a, std::int64_t d) {
  return LatticePolygon({{0, 0}, {a, 0}, {1 + d, 3}, {1, 3}});
}

/// Graph of a piecewise linear function on [0, m] whose breakpoints are lattice points.
///
/// Stored canonically as every lattice point on the graph, so consecutive points
/// always span a primitive segment.
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(const std::vector<LatticePoint>& breakpoints) {
    if (breakpoints.size() < 2) throw std::invalid_argument("polyline needs at least two breakpoints");
    if (breakpoints.front().x != 0) throw std::invalid_argument("polyline must start at x = 0");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
      const auto p = breakpoints[i];
      const auto q = breakpoints[i + 1];
      if (q.x <= p.x) throw std::invalid_argument("breakpoint abscissae must increase strictly");
      if (points_.empty()) points_.push_back(p);
      const auto g = gcd_abs(q.x - p.x, q.y - p.y);
      for (std::int64_t k = 1; k <= g; ++k)
        points_.push_back({p.x + (q.x - p.x) / g * k, p.y + (q.y - p.y) / g * k});
    }
  }

  static Polyline from_canonical(std::vector<LatticePoint> pts) {
    Polyline p;
    p.points_ = std::move(pts);
    return p;
  }

  static Polyline horizontal(std::int64_t m, std::int64_t y) { return Polyline({{0, y}, {m, y}}); }

  const std::vector<LatticePoint>& points() const { return points_; }
  std::int64_t width() const { return points_.back().x; }
  std::size_t segment_count() const { return points_.size() - 1; }

  Ratio value_at(std::int64_t x) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), x,
                               [](const LatticePoint& p, std::int64_t v) { return p.x < v; });
    if (it != points_.end() && it->x == x) return Ratio{it->y, 1};
    if (it == points_.begin() || it == points_.end()) throw std::out_of_range("abscissa outside the polyline");
    return line_value(*(it - 1), *it, x);
  }

  /// 2 * integral over [0, m].
  std::int64_t doubled_integral() const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i + 1 < points_.size(); ++i)
      s += (points_[i + 1].x - points_[i].x) * (points_[i].y + points_[i + 1].y);
    return s;
  }

  friend bool operator==(const Polyline&, const Polyline&) = default;

 private:
  std::vector<LatticePoint> points_;
};

/// phi_0-admissible shape: the region between a fixed floor and a ceiling in 0 <= x <= m.
class ShapeProfile {
 public:
  ShapeProfile(Polyline floor, Polyline ceiling) : floor_(std::move(floor)), ceiling_(std::move(ceiling)) {
    if (floor_.width() != ceiling_.width()) throw std::invalid_argument("floor and ceiling widths differ");
    if (floor_.width() < 1) throw std::invalid_argument("strip width must be positive");
    for (std::int64_t x = 0; x <= width(); ++x) {
      if (ceiling_.value_at(x) < floor_.value_at(x)) throw std::invalid_argument("ceiling dips below the floor");
    }
  }

  static ShapeProfile rectangle(std::int64_t m, std::int64_t n) {
    return ShapeProfile(Polyline::horizontal(m, 0), Polyline::horizontal(m, n));
  }

  std::int64_t width() const { return ceiling_.width(); }
  const Polyline& floor() const { return floor_; }
  const Polyline& ceiling() const { return ceiling_; }
  std::int64_t doubled_area() const { return ceiling_.doubled_integral() - floor_.doubled_integral(); }

  friend bool operator==(const ShapeProfile&, const ShapeProfile&) = default;

 private:
  Polyline floor_;
  Polyline ceiling_;
};

enum class TileKind {
  triangle_no_vertical_side,
  triangle_vertical_on_strip_boundary,
  two_triangles_sharing_vertical_side,
};

/// A primitive lattice tile hanging from the ceiling of a shape.
///
/// `first_segment`/`segment_count` locate its upper boundary among the primitive
/// segments of the ceiling; `lower_chain` is the piece of the new ceiling that
/// replaces ceiling points [first_segment, first_segment + segment_count].
struct PrimitiveTile {
  TileKind kind;
  std::vector<Triangle> triangles;
  std::size_t first_segment = 0;
  std::size_t segment_count = 0;
  std::vector<LatticePoint> lower_chain;

  std::int64_t doubled_area() const {
    std::int64_t s = 0;
    for (const auto& t : triangles) s += std::abs(t.doubled_area());
    return s;
  }
};

namespace detail {

/// True when the polyline through `chain` (lattice points, increasing x) stays
/// weakly above `floor` on its x-range.
inline bool chain_above_floor(const std::vector<LatticePoint>& chain, const Polyline& floor) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const auto p = chain[i];
    const auto q = chain[i + 1];
    for (std::int64_t x = p.x; x <= q.x; ++x) {
      if (line_value(p, q, x) < floor.value_at(x)) return false;
    }
  }
  return true;
}

}  // namespace detail

namespace detail {

/// Fixed-capacity description of one maximal tile candidate.
struct TileCandidate {
  TileKind kind;
  std::size_t first_segment;
  std::size_t segment_count;
  std::array<Triangle, 2> triangles;
  int triangle_count;
  std::array<LatticePoint, 3> lower;
  int lower_count;
};

/// Visits every maximal tile hanging from the ceiling `pts` (canonical lattice
/// points of a strip of width m). `floor_ok(chain, len)` decides whether the
/// replacement chain stays inside the shape.
///
/// A maximal tile's upper boundary is one primitive ceiling segment or two
/// adjacent ones, and for each there are finitely many apexes of doubled area one.
template <class FloorOk, class Visit>
void visit_maximal_tiles(const LatticePoint* pts, std::size_t npts, std::int64_t m, FloorOk&& floor_ok,
                         Visit&& visit) {
  const std::size_t segs = npts - 1;
  auto emit = [&](const TileCandidate& c) {
    if (floor_ok(c.lower.data(), c.lower_count)) visit(c);
  };
  for (std::size_t i = 0; i < segs; ++i) {
    const auto p = pts[i];
    const auto q = pts[i + 1];
    const auto dx = q.x - p.x;
    const auto dy = q.y - p.y;
    if (dx == 1) {
      if (p.x == 0) {
        const LatticePoint r{p.x, p.y - 1};
        emit({TileKind::triangle_vertical_on_strip_boundary, i, 1, {Triangle{{p, r, q}}, Triangle{}}, 1, {r, q, q}, 2});
      }
      if (q.x == m) {
        const LatticePoint r{q.x, q.y - 1};
        emit({TileKind::triangle_vertical_on_strip_boundary, i, 1, {Triangle{{p, r, q}}, Triangle{}}, 1, {p, r, r}, 2});
      }
    } else {
      // apex strictly between p.x and q.x: dy * k == 1 (mod dx)
      std::int64_t k = 1;
      while (((dy * k - 1) % dx + dx) % dx != 0) ++k;
      const LatticePoint r{p.x + k, p.y + (dy * k - 1) / dx};
      emit({TileKind::triangle_no_vertical_side, i, 1, {Triangle{{p, r, q}}, Triangle{}}, 1, {p, r, q}, 3});
    }
  }
  for (std::size_t i = 0; i + 1 < segs; ++i) {
    const auto p = pts[i];
    const auto r = pts[i + 1];
    const auto q = pts[i + 2];
    if (doubled_area(p, q, r) == 1) {
      emit({TileKind::triangle_no_vertical_side, i, 2, {Triangle{{p, q, r}}, Triangle{}}, 1, {p, q, q}, 2});
    }
    if (r.x - p.x == 1 && q.x - r.x == 1) {
      const LatticePoint v{r.x, r.y - 1};
      emit({TileKind::two_triangles_sharing_vertical_side, i, 2, {Triangle{{p, v, r}}, Triangle{{v, q, r}}}, 2,
            {p, v, q}, 3});
    }
  }
}

}  // namespace detail

/// All primitive lattice tiles contained in `shape` whose upper boundary lies on
/// the shape's upper boundary.
inline std::vector<PrimitiveTile> enumerate_maximal_tiles(const ShapeProfile& shape) {
  std::vector<PrimitiveTile> tiles;
  if (shape.doubled_area() == 0) return tiles;
  const auto& pts = shape.ceiling().points();
  const auto& floor = shape.floor();
  auto floor_ok = [&](const LatticePoint* chain, int len) {
    return detail::chain_above_floor(std::vector<LatticePoint>(chain, chain + len), floor);
  };
  detail::visit_maximal_tiles(pts.data(), pts.size(), shape.width(), floor_ok, [&](const detail::TileCandidate& c) {
    tiles.push_back(PrimitiveTile{c.kind,
                                  std::vector<Triangle>(c.triangles.begin(), c.triangles.begin() + c.triangle_count),
                                  c.first_segment, c.segment_count,
                                  std::vector<LatticePoint>(c.lower.begin(), c.lower.begin() + c.lower_count)});
  });
  return tiles;
}

/// Ceiling obtained by removing a set of pairwise disjoint maximal tiles.
inline Polyline remove_tiles(const Polyline& ceiling, const std::vector<const PrimitiveTile*>& chosen) {
  const auto& pts = ceiling.points();
  std::vector<const PrimitiveTile*> order(chosen);
  std::sort(order.begin(), order.end(),
            [](const PrimitiveTile* a, const PrimitiveTile* b) { return a->first_segment < b->first_segment; });
  std::vector<LatticePoint> out;
  std::size_t i = 0;
  std::size_t covered_to = 0;
  auto append = [&](LatticePoint p) {
    if (out.empty() || out.back() != p) out.push_back(p);
  };
  for (const auto* t : order) {
    if (!out.empty() && t->first_segment < covered_to) throw std::invalid_argument("tiles overlap");
    for (; i < t->first_segment; ++i) append(pts[i]);
    for (const auto& p : t->lower_chain) append(p);
    covered_to = t->first_segment + t->segment_count;
    i = covered_to + 1;
  }
  for (; i < pts.size(); ++i) append(pts[i]);
  return Polyline::from_canonical(std::move(out));
}

}  // namespace lattri
