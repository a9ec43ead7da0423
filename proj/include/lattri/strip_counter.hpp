#pragma once

#include "lattri/bigcount.hpp"
#include "lattri/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace lattri {

enum class Orientation {
  narrow_strip,  // the shorter side is the strip width
  as_given,      // width m, height n
};

struct CountOptions {
  unsigned threads = 1;
  std::size_t memory_budget_bytes = std::size_t{6} << 30;
  Orientation orientation = Orientation::narrow_strip;
};

struct CountMode {
  enum class Kind { bigint, modular };
  Kind kind = Kind::bigint;
  /// Empty in modular mode means "enough default primes".
  std::vector<std::uint64_t> primes;

  static CountMode bigint() { return {}; }
  static CountMode modular(std::vector<std::uint64_t> primes = {}) { return {Kind::modular, std::move(primes)}; }
};

class MemoryBudgetExceeded : public std::runtime_error {
 public:
  MemoryBudgetExceeded(std::int64_t layer, std::size_t needed, std::size_t budget)
      : std::runtime_error("memory budget of " + std::to_string(budget) + " bytes exceeded (" +
                           std::to_string(needed) + " needed) at doubled-area layer " + std::to_string(layer)),
        layer_(layer) {}
  std::int64_t layer() const { return layer_; }

 private:
  std::int64_t layer_;
};

class ModulusTooSmall : public std::runtime_error {
 public:
  explicit ModulusTooSmall(std::int64_t bits)
      : std::runtime_error("product of primes must exceed 2^" + std::to_string(bits) + "; supply more primes") {}
};

/// Bits of the a priori upper bound 2^(3 * area) on the number of triangulations.
inline std::int64_t count_bound_bits(const ShapeProfile& shape) { return (3 * shape.doubled_area() + 1) / 2; }

/// Enough default primes for a count of at most 2^bits (and never fewer than three).
inline std::vector<std::uint64_t> primes_for_bits(std::int64_t bits) {
  std::size_t k = 3;
  while (static_cast<std::int64_t>(61 * k) <= bits) ++k;
  return modular::default_primes(k);
}

namespace detail {

/// Every ceiling between the floor and the top ceiling, bucketed by doubled area.
///
/// A ceiling is keyed by its canonical lattice points: digit x (base `radix`) is
/// 0 when no lattice point of the ceiling has abscissa x, else y - ylow(x) + 1.
class ShapeSpace {
 public:
  ShapeSpace(const ShapeProfile& top, std::size_t budget) : m_(top.width()), budget_(budget) {
    fl_.resize(m_ + 1);
    tp_.resize(m_ + 1);
    ylow_.resize(m_ + 1);
    ytop_.resize(m_ + 1);
    std::int64_t span = 0;
    for (std::int64_t x = 0; x <= m_; ++x) {
      fl_[x] = top.floor().value_at(x);
      tp_[x] = top.ceiling().value_at(x);
      ylow_[x] = ceil_div(fl_[x].num, fl_[x].den);
      ytop_[x] = floor_div(tp_[x].num, tp_[x].den);
      span = std::max(span, ytop_[x] - ylow_[x] + 1);
    }
    radix_ = static_cast<std::uint64_t>(span) + 1;
    unsigned __int128 p = 1;
    pow_.resize(m_ + 1);
    for (std::int64_t x = 0; x <= m_; ++x) {
      pow_[x] = static_cast<std::uint64_t>(p);
      p *= radix_;
      if (p >> 64) throw std::length_error("shape too large for a 64-bit profile key");
    }
    floor_integral_ = top.floor().doubled_integral();
    top_area_ = top.doubled_area();
    layers_.resize(static_cast<std::size_t>(top_area_) + 1);
    for (std::int64_t y = ylow_[0]; y <= ytop_[0]; ++y) extend({0, y}, code_at(0, y), 0);
    for (auto& l : layers_) std::sort(l.begin(), l.end());
    top_key_ = encode(top.ceiling().points());
  }

  std::int64_t width() const { return m_; }
  std::int64_t top_area() const { return top_area_; }
  std::uint64_t top_key() const { return top_key_; }
  const std::vector<std::uint64_t>& layer(std::int64_t a) const { return layers_[static_cast<std::size_t>(a)]; }
  std::size_t shape_count() const { return total_; }

  std::uint64_t code_at(std::int64_t x, std::int64_t y) const {
    return pow_[x] * static_cast<std::uint64_t>(y - ylow_[x] + 1);
  }

  std::uint64_t encode(const std::vector<LatticePoint>& pts) const {
    std::uint64_t k = 0;
    for (const auto& p : pts) k += code_at(p.x, p.y);
    return k;
  }

  /// Writes the ceiling points into `out`, returns their number.
  std::size_t decode(std::uint64_t key, LatticePoint* out) const {
    std::size_t n = 0;
    for (std::int64_t x = 0; x <= m_; ++x) {
      const auto d = key % radix_;
      key /= radix_;
      if (d) out[n++] = {x, ylow_[x] + static_cast<std::int64_t>(d) - 1};
    }
    return n;
  }

  bool floor_ok(const LatticePoint* chain, int len) const {
    for (int i = 0; i + 1 < len; ++i) {
      const auto p = chain[i];
      const auto q = chain[i + 1];
      for (std::int64_t x = p.x; x <= q.x; ++x)
        if (line_value(p, q, x) < fl_[x]) return false;
    }
    return true;
  }

  std::int64_t index_of(std::int64_t area, std::uint64_t key) const {
    const auto& l = layers_[static_cast<std::size_t>(area)];
    auto it = std::lower_bound(l.begin(), l.end(), key);
    if (it == l.end() || *it != key) return -1;
    return it - l.begin();
  }

 private:
  void extend(LatticePoint p, std::uint64_t key, std::int64_t integral) {
    if (p.x == m_) {
      layers_[static_cast<std::size_t>(integral - floor_integral_)].push_back(key);
      if (++total_ * sizeof(std::uint64_t) > budget_) throw MemoryBudgetExceeded(0, total_ * 8, budget_);
      return;
    }
    for (std::int64_t x2 = p.x + 1; x2 <= m_; ++x2) {
      for (std::int64_t y2 = ylow_[x2]; y2 <= ytop_[x2]; ++y2) {
        const LatticePoint q{x2, y2};
        if (gcd_abs(x2 - p.x, y2 - p.y) != 1) continue;
        bool inside = true;
        for (std::int64_t x = p.x + 1; x < x2 && inside; ++x) {
          const auto v = line_value(p, q, x);
          inside = !(v < fl_[x]) && !(tp_[x] < v);
        }
        if (inside) extend(q, key + code_at(x2, y2), integral + (x2 - p.x) * (p.y + y2));
      }
    }
  }

  std::int64_t m_;
  std::size_t budget_;
  std::vector<Ratio> fl_, tp_;
  std::vector<std::int64_t> ylow_, ytop_;
  std::vector<std::uint64_t> pow_;
  std::uint64_t radix_ = 0;
  std::int64_t floor_integral_ = 0;
  std::int64_t top_area_ = 0;
  std::uint64_t top_key_ = 0;
  std::size_t total_ = 0;
  std::vector<std::vector<std::uint64_t>> layers_;
};

struct BigRing {
  using value_type = BigCount;
  static constexpr std::size_t value_bytes = sizeof(BigCount) + 16;
  void add(BigCount& acc, const BigCount& v) const { acc += v; }
  void sub(BigCount& acc, const BigCount& v) const { acc -= v; }
};

struct ModRing {
  using value_type = std::uint64_t;
  static constexpr std::size_t value_bytes = sizeof(std::uint64_t);
  std::uint64_t p;
  void add(std::uint64_t& acc, std::uint64_t v) const {
    acc += v;
    if (acc >= p) acc -= p;
  }
  void sub(std::uint64_t& acc, std::uint64_t v) const { acc = acc >= v ? acc - v : acc + p - v; }
};

struct TileStep {
  std::size_t first;
  std::size_t count;
  std::uint64_t delta;  // added to the key (mod 2^64)
  std::int64_t area;
};

/// One full inclusion-exclusion pass over all shapes, smallest area first.
/// With `keep_all`, every layer stays alive and is returned.
template <class Ring>
std::vector<std::vector<typename Ring::value_type>> run_pass(const ShapeSpace& sp, const Ring& ring, unsigned threads,
                                                             std::size_t budget, bool keep_all = false) {
  using V = typename Ring::value_type;
  const auto m = sp.width();
  const auto top = sp.top_area();
  std::vector<std::vector<V>> values(static_cast<std::size_t>(top) + 1);
  const std::size_t key_bytes = sp.shape_count() * sizeof(std::uint64_t);
  std::size_t live = 0;

  auto shape_value = [&](std::int64_t a, std::uint64_t key, std::vector<LatticePoint>& pts,
                         std::vector<TileStep>& tiles, std::vector<std::size_t>& start) -> V {
    if (a == 0) return V(1);
    const auto npts = sp.decode(key, pts.data());
    const auto segs = npts - 1;
    tiles.clear();
    visit_maximal_tiles(
        pts.data(), npts, m, [&](const LatticePoint* c, int len) { return sp.floor_ok(c, len); },
        [&](const TileCandidate& c) {
          std::uint64_t d = 0;
          for (std::size_t i = c.first_segment; i <= c.first_segment + c.segment_count; ++i)
            d -= sp.code_at(pts[i].x, pts[i].y);
          for (int i = 0; i < c.lower_count; ++i) d += sp.code_at(c.lower[i].x, c.lower[i].y);
          std::int64_t ar = 0;
          for (int i = 0; i < c.triangle_count; ++i) ar += std::abs(c.triangles[i].doubled_area());
          tiles.push_back({c.first_segment, c.segment_count, d, ar});
        });
    std::stable_sort(tiles.begin(), tiles.end(), [](const TileStep& x, const TileStep& y) { return x.first < y.first; });
    start.assign(segs + 2, tiles.size());
    for (std::size_t i = tiles.size(); i-- > 0;) start[tiles[i].first] = i;
    for (std::size_t i = segs; i-- > 0;) start[i] = std::min(start[i], start[i + 1]);

    V acc(0);
    // sweep segments left to right, choosing at each one either no tile or a tile starting there
    auto dfs = [&](auto& self, std::size_t i, std::uint64_t k, std::int64_t drop, int chosen) -> void {
      if (i >= segs) {
        if (chosen == 0) return;
        const auto idx = sp.index_of(a - drop, k);
        if (idx < 0) throw std::logic_error("subshape missing from the shape space");
        const auto& v = values[static_cast<std::size_t>(a - drop)][static_cast<std::size_t>(idx)];
        if (chosen % 2) ring.add(acc, v);
        else ring.sub(acc, v);
        return;
      }
      self(self, i + 1, k, drop, chosen);
      for (std::size_t t = start[i]; t < tiles.size() && tiles[t].first == i; ++t)
        self(self, i + tiles[t].count, k + tiles[t].delta, drop + tiles[t].area, chosen + 1);
    };
    dfs(dfs, 0, key, 0, 0);
    return acc;
  };

  for (std::int64_t a = 0; a <= top; ++a) {
    const auto& keys = sp.layer(a);
    if (!keep_all && a - m - 1 >= 0) {
      auto& old = values[static_cast<std::size_t>(a - m - 1)];
      live -= old.size() * Ring::value_bytes;
      std::vector<V>().swap(old);
    }
    live += keys.size() * Ring::value_bytes;
    if (key_bytes + live > budget) throw MemoryBudgetExceeded(a, key_bytes + live, budget);
    auto& out = values[static_cast<std::size_t>(a)];
    out.resize(keys.size());

    auto work = [&](std::size_t lo, std::size_t hi) {
      std::vector<LatticePoint> pts(static_cast<std::size_t>(m) + 1);
      std::vector<TileStep> tiles;
      std::vector<std::size_t> start;
      for (std::size_t i = lo; i < hi; ++i) out[i] = shape_value(a, keys[i], pts, tiles, start);
    };
    const std::size_t n = keys.size();
    const unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n / 64 + 1)));
    if (t == 1) {
      work(0, n);
    } else {
      std::vector<std::thread> pool;
      for (unsigned j = 0; j < t; ++j) pool.emplace_back(work, n * j / t, n * (j + 1) / t);
      for (auto& th : pool) th.join();
    }
  }
  return values;
}

template <class Ring>
typename Ring::value_type top_value(const ShapeSpace& sp, const Ring& ring, unsigned threads, std::size_t budget) {
  auto values = run_pass(sp, ring, threads, budget);
  const auto idx = sp.index_of(sp.top_area(), sp.top_key());
  return std::move(values[static_cast<std::size_t>(sp.top_area())][static_cast<std::size_t>(idx)]);
}

inline ShapeProfile rectangle_profile(std::int64_t m, std::int64_t n, Orientation o) {
  if (o == Orientation::narrow_strip && n < m) std::swap(m, n);
  return ShapeProfile::rectangle(m, n);
}

}  // namespace detail

/// f*(shape) modulo each prime, one independent pass per prime.
inline ResidueVector count_shape_residues(const ShapeProfile& shape, std::vector<std::uint64_t> primes,
                                          const CountOptions& opts = {}) {
  if (primes.empty()) throw std::invalid_argument("no primes given");
  for (auto p : primes)
    if (p < 2 || p >= (std::uint64_t{1} << 62)) throw std::invalid_argument("primes must lie in [2, 2^62)");
  ResidueVector rv{primes, std::vector<std::uint64_t>(primes.size())};
  if (shape.doubled_area() == 0) {
    for (std::size_t i = 0; i < primes.size(); ++i) rv.residues[i] = 1 % primes[i];
    return rv;
  }
  const detail::ShapeSpace sp(shape, opts.memory_budget_bytes);
  const unsigned t = std::max(1u, opts.threads);
  if (t > 1 && primes.size() > 1) {
    // passes are independent; spread them over the threads
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < std::min<std::size_t>(t, primes.size()); ++j) {
      pool.emplace_back([&, j] {
        for (std::size_t i = j; i < primes.size(); i += t)
          rv.residues[i] = detail::top_value(sp, detail::ModRing{primes[i]}, 1, opts.memory_budget_bytes);
      });
    }
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t i = 0; i < primes.size(); ++i)
      rv.residues[i] = detail::top_value(sp, detail::ModRing{primes[i]}, t, opts.memory_budget_bytes);
  }
  return rv;
}

/// Number of primitive triangulations of the shape (f* in the inclusion-exclusion sense).
inline BigCount count_shape(const ShapeProfile& shape, const CountMode& mode = {}, const CountOptions& opts = {}) {
  if (mode.kind == CountMode::Kind::modular) {
    const auto bits = count_bound_bits(shape);
    auto primes = mode.primes.empty() ? primes_for_bits(bits) : mode.primes;
    ResidueVector probe{primes, {}};
    if (probe.modulus() <= (BigCount(1) << bits)) throw ModulusTooSmall(bits);
    return crt_reconstruct(count_shape_residues(shape, std::move(primes), opts));
  }
  if (shape.doubled_area() == 0) return 1;
  const detail::ShapeSpace sp(shape, opts.memory_budget_bytes);
  return detail::top_value(sp, detail::BigRing{}, std::max(1u, opts.threads), opts.memory_budget_bytes);
}

/// f(m, n), the number of primitive triangulations of the m x n rectangle.
inline BigCount count_rectangle(std::int64_t m, std::int64_t n, const CountMode& mode = {},
                                const CountOptions& opts = {}) {
  if (m < 1 || n < 0) throw std::invalid_argument("need m >= 1 and n >= 0");
  if (n == 0) return 1;
  return count_shape(detail::rectangle_profile(m, n, opts.orientation), mode, opts);
}

/// f(m, 0), ..., f(m, n_max) from a single pass in the strip of width m.
inline std::vector<BigCount> count_rectangle_column(std::int64_t m, std::int64_t n_max, const CountOptions& opts = {}) {
  if (m < 1 || n_max < 0) throw std::invalid_argument("need m >= 1 and n_max >= 0");
  std::vector<BigCount> out{BigCount(1)};
  if (n_max == 0) return out;
  const detail::ShapeSpace sp(ShapeProfile::rectangle(m, n_max), opts.memory_budget_bytes);
  const auto values = detail::run_pass(sp, detail::BigRing{}, std::max(1u, opts.threads), opts.memory_budget_bytes,
                                       /*keep_all=*/true);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const auto a = 2 * m * n;
    const auto idx = sp.index_of(a, sp.encode(Polyline::horizontal(m, n).points()));
    out.push_back(values[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx)]);
  }
  return out;
}

/// f* of every ceiling between the floor and `top`, grouped by doubled area.
class CountTable {
 public:
  struct Entry {
    Polyline ceiling;
    BigCount count;
  };

  explicit CountTable(const ShapeProfile& top, const CountOptions& opts = {}) {
    const detail::ShapeSpace sp(top, opts.memory_budget_bytes);
    auto values = detail::run_pass(sp, detail::BigRing{}, std::max(1u, opts.threads), opts.memory_budget_bytes, true);
    std::vector<LatticePoint> pts(static_cast<std::size_t>(top.width()) + 1);
    layers_.resize(values.size());
    for (std::int64_t a = 0; a <= sp.top_area(); ++a) {
      const auto& keys = sp.layer(a);
      for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto n = sp.decode(keys[i], pts.data());
        layers_[static_cast<std::size_t>(a)].push_back(
            {Polyline::from_canonical({pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(n)}),
             std::move(values[static_cast<std::size_t>(a)][i])});
      }
    }
  }

  std::size_t layer_count() const { return layers_.size(); }
  const std::vector<Entry>& layer(std::size_t doubled_area) const { return layers_.at(doubled_area); }

  const BigCount& at(const Polyline& ceiling) const {
    for (const auto& l : layers_)
      for (const auto& e : l)
        if (e.ceiling == ceiling) return e.count;
    throw std::out_of_range("ceiling not in table");
  }

 private:
  std::vector<std::vector<Entry>> layers_;
};

/// Terms of the inclusion-exclusion expansion of f*(shape): one per nonempty
/// set of pairwise disjoint maximal tiles, with sign (-1)^(k-1).
inline std::vector<std::pair<int, ShapeProfile>> subshape_expansion(const ShapeProfile& shape) {
  auto tiles = enumerate_maximal_tiles(shape);
  // the disjointness sweep visits tiles in order of their first segment
  std::stable_sort(tiles.begin(), tiles.end(), [](const PrimitiveTile& a, const PrimitiveTile& b) {
    return a.first_segment < b.first_segment;
  });
  std::vector<std::pair<int, ShapeProfile>> out;
  std::vector<const PrimitiveTile*> chosen;
  auto rec = [&](auto& self, std::size_t t, std::size_t next_free) -> void {
    if (t == tiles.size()) {
      if (chosen.empty()) return;
      const int sign = chosen.size() % 2 ? 1 : -1;
      out.emplace_back(sign, ShapeProfile(shape.floor(), remove_tiles(shape.ceiling(), chosen)));
      return;
    }
    self(self, t + 1, next_free);
    if (tiles[t].first_segment >= next_free) {
      chosen.push_back(&tiles[t]);
      self(self, t + 1, tiles[t].first_segment + tiles[t].segment_count);
      chosen.pop_back();
    }
  };
  rec(rec, 0, 0);
  return out;
}

struct CapacityRecord {
  std::int64_t m = 0;
  std::int64_t n = 0;
  BigCount count;
  double capacity = 0;
};

inline double capacity_of(const BigCount& count, std::int64_t m, std::int64_t n) {
  return log2_big(count) / static_cast<double>(m * n);
}

inline CapacityRecord capacity(std::int64_t m, std::int64_t n, const CountMode& mode = {},
                               const CountOptions& opts = {}) {
  if (m < 1 || n < 1) throw std::invalid_argument("capacity needs m, n >= 1");
  CapacityRecord r{m, n, count_rectangle(m, n, mode, opts), 0};
  r.capacity = capacity_of(r.count, m, n);
  return r;
}

/// f(n-1) f(n+1) >= f(n)^2 for each interior n of a column f(0..N).
inline std::vector<bool> convexity_check(const std::vector<BigCount>& column) {
  std::vector<bool> out;
  for (std::size_t n = 1; n + 1 < column.size(); ++n) out.push_back(column[n - 1] * column[n + 1] >= column[n] * column[n]);
  return out;
}

inline std::vector<bool> convexity_check(std::int64_t m, std::int64_t n_max, const CountOptions& opts = {}) {
  return convexity_check(count_rectangle_column(m, n_max, opts));
}

/// (n+1) c(m, n+1) - n c(m, n), a lower bound for the width-m growth constant.
inline double capacity_extrapolate(const BigCount& f_n, const BigCount& f_n1, std::int64_t m, std::int64_t n) {
  const double c1 = capacity_of(f_n1, m, n + 1);
  const double c0 = n == 0 ? 0.0 : capacity_of(f_n, m, n);
  return static_cast<double>(n + 1) * c1 - static_cast<double>(n) * c0;
}

inline double capacity_extrapolate(std::int64_t m, std::int64_t n, const CountOptions& opts = {}) {
  const auto col = count_rectangle_column(m, n + 1, opts);
  return capacity_extrapolate(col[static_cast<std::size_t>(n)], col[static_cast<std::size_t>(n + 1)], m, n);
}

}  // namespace lattri
