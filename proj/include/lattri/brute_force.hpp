#pragma once

#include "lattri/bigcount.hpp"
#include "lattri/geometry.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lattri {

class AreaCapExceeded : public std::runtime_error {
 public:
  AreaCapExceeded(std::int64_t area, std::int64_t cap)
      : std::runtime_error("polygon doubled area " + std::to_string(area) + " exceeds brute-force cap " +
                           std::to_string(cap)) {}
};

struct BruteForceOptions {
  std::int64_t doubled_area_cap = 16;
  /// Interior edges for which this returns true are forbidden.
  std::function<bool(LatticePoint, LatticePoint)> forbid_interior_edge;
};

namespace detail {

using Edge = std::pair<LatticePoint, LatticePoint>;

inline int sign(std::int64_t v) { return (v > 0) - (v < 0); }

// Open segments cross at a single interior point of both.
inline bool segments_cross(LatticePoint p1, LatticePoint p2, LatticePoint q1, LatticePoint q2) {
  const int o1 = sign(doubled_area(p1, p2, q1));
  const int o2 = sign(doubled_area(p1, p2, q2));
  const int o3 = sign(doubled_area(q1, q2, p1));
  const int o4 = sign(doubled_area(q1, q2, p2));
  return o1 * o2 < 0 && o3 * o4 < 0;
}

// Winding number of the boundary around 3*c, with coordinates scaled by 3.
inline int winding_triple(const std::vector<Edge>& edges, LatticePoint c3) {
  int w = 0;
  for (const auto& [a0, b0] : edges) {
    const LatticePoint a{3 * a0.x, 3 * a0.y};
    const LatticePoint b{3 * b0.x, 3 * b0.y};
    if (a.y <= c3.y) {
      if (b.y > c3.y && doubled_area(a, b, c3) > 0) ++w;
    } else {
      if (b.y <= c3.y && doubled_area(a, b, c3) < 0) --w;
    }
  }
  return w;
}

class FrontCounter {
 public:
  FrontCounter(const LatticePolygon& poly, const BruteForceOptions& opts) : opts_(opts) {
    lo_ = hi_ = poly.vertices().front();
    for (const auto& v : poly.vertices()) {
      lo_.x = std::min(lo_.x, v.x);
      lo_.y = std::min(lo_.y, v.y);
      hi_.x = std::max(hi_.x, v.x);
      hi_.y = std::max(hi_.y, v.y);
    }
    for (const auto& e : poly.primitive_edges()) {
      boundary_.insert(e);
      boundary_.insert({e.second, e.first});
    }
  }

  BigCount count(std::vector<Edge> front) {
    std::sort(front.begin(), front.end());
    return count_sorted(front);
  }

 private:
  BigCount count_sorted(const std::vector<Edge>& front) {
    if (front.empty()) return 1;
    if (auto it = memo_.find(front); it != memo_.end()) return it->second;

    const auto [a, b] = front.front();
    const LatticePoint d{b.x - a.x, b.y - a.y};
    BigCount total = 0;
    for (const auto& r : apexes(a, d)) {
      if (!fits(front, a, b, r)) continue;
      std::vector<Edge> next(front.begin() + 1, front.end());
      bool forbidden = false;
      for (const Edge side : {Edge{b, r}, Edge{r, a}}) {
        auto it = std::lower_bound(next.begin(), next.end(), side);
        if (it != next.end() && *it == side) {
          next.erase(it);
        } else {
          const Edge rev{side.second, side.first};
          if (opts_.forbid_interior_edge && !boundary_.count(rev) && opts_.forbid_interior_edge(rev.first, rev.second))
            forbidden = true;
          next.insert(std::lower_bound(next.begin(), next.end(), rev), rev);
        }
      }
      if (forbidden) continue;
      total += count_sorted(next);
    }
    memo_.emplace(front, total);
    return total;
  }

  // Lattice points r in the bounding box with doubled_area(a, a + d, r) == 1.
  std::vector<LatticePoint> apexes(LatticePoint a, LatticePoint d) const {
    // solve d.x * y - d.y * x == 1 for the offset (x, y) = r - a
    std::int64_t old_r = d.x, r = -d.y, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
      const auto q = old_r / r;
      std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
      std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
      std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
    }
    // old_s * d.x + old_t * (-d.y) == old_r == +-1
    LatticePoint base{a.x + old_t * old_r, a.y + old_s * old_r};
    std::vector<LatticePoint> out;
    const std::int64_t span = (hi_.x - lo_.x) + (hi_.y - lo_.y) + 2;
    for (std::int64_t k = -span; k <= span; ++k) {
      const LatticePoint c{base.x + k * d.x, base.y + k * d.y};
      if (c.x < lo_.x || c.x > hi_.x || c.y < lo_.y || c.y > hi_.y) continue;
      out.push_back(c);
    }
    return out;
  }

  bool fits(const std::vector<Edge>& front, LatticePoint a, LatticePoint b, LatticePoint r) const {
    for (const auto& [p, q] : front) {
      if (segments_cross(b, r, p, q) || segments_cross(r, a, p, q)) return false;
    }
    const LatticePoint c3{a.x + b.x + r.x, a.y + b.y + r.y};
    return winding_triple(front, c3) != 0;
  }

  const BruteForceOptions& opts_;
  LatticePoint lo_{0, 0}, hi_{0, 0};
  std::set<Edge> boundary_;
  std::map<std::vector<Edge>, BigCount> memo_;
};

}  // namespace detail

/// Number of primitive lattice triangulations of `polygon`, by exhaustive
/// advancing-front search. Every triangulation has exactly one triangle on the
/// smallest open front edge, so branching on that triangle partitions them.
inline BigCount brute_force_count(const LatticePolygon& polygon, const BruteForceOptions& opts = {}) {
  const auto area = polygon.doubled_area();
  if (area > opts.doubled_area_cap) throw AreaCapExceeded(area, opts.doubled_area_cap);
  detail::FrontCounter counter(polygon, opts);
  return counter.count(polygon.primitive_edges());
}

}  // namespace lattri
