#pragma once

#include "lattri/bigcount.hpp"
#include "lattri/geometry.hpp"
#include "lattri/strip_counter.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lattri {

/// Truncated power series with exact integer coefficients; c[k] multiplies x^k.
struct PowerSeries {
  std::vector<BigCount> c;

  PowerSeries() = default;
  explicit PowerSeries(std::vector<BigCount> coeffs) : c(std::move(coeffs)) {}
  PowerSeries(std::initializer_list<long long> coeffs) {
    for (auto v : coeffs) c.emplace_back(v);
  }

  std::size_t order() const { return c.empty() ? 0 : c.size() - 1; }
  const BigCount& operator[](std::size_t k) const { return c[k]; }
  friend bool operator==(const PowerSeries&, const PowerSeries&) = default;

  template <class Real>
  Real eval(const Real& x) const {
    Real s = 0;
    for (std::size_t k = c.size(); k-- > 0;) s = s * x + Real(c[k].str());
    return s;
  }
};

/// 1 / (1 - H) truncated at the order of H.
inline PowerSeries Hstar_from_H(const PowerSeries& h) {
  if (h.c.empty()) return PowerSeries({BigCount(1)});
  if (h.c[0] != 0) throw std::invalid_argument("H must vanish at 0");
  const auto n = h.c.size();
  std::vector<BigCount> s(n);
  s[0] = 1;
  // S = 1 + H S
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t j = 1; j <= k; ++j) s[k] += h.c[j] * s[k - j];
  return PowerSeries(std::move(s));
}

/// The inverse relation H = 1 - 1/H*.
inline PowerSeries H_from_Hstar(const PowerSeries& hs) {
  if (hs.c.empty() || hs.c[0] != 1) throw std::invalid_argument("H* must start with 1");
  const auto n = hs.c.size();
  std::vector<BigCount> h(n);
  // H_k = H*_k - sum_{j<k} H_j H*_{k-j}
  for (std::size_t k = 1; k < n; ++k) {
    h[k] = hs.c[k];
    for (std::size_t j = 1; j < k; ++j) h[k] -= h[j] * hs.c[k - j];
  }
  return PowerSeries(std::move(h));
}

/// Coefficients f_{a,b,c} of 1/(1 - x - y - z + xz), tabulated up to given bounds.
class TriGFTable {
 public:
  TriGFTable(int amax, int bmax, int cmax) : A_(amax + 1), B_(bmax + 1), C_(cmax + 1), v_(A_ * B_ * C_) {
    for (int a = 0; a < A_; ++a)
      for (int b = 0; b < B_; ++b)
        for (int c = 0; c < C_; ++c) {
          if (a == 0 && b == 0 && c == 0) {
            at(0, 0, 0) = 1;
            continue;
          }
          at(a, b, c) = get(a - 1, b, c) + get(a, b - 1, c) + get(a, b, c - 1) - get(a - 1, b, c - 1);
        }
  }

  BigCount get(int a, int b, int c) const {
    if (a < 0 || b < 0 || c < 0) return 0;
    if (a >= A_ || b >= B_ || c >= C_) throw std::out_of_range("index outside the table");
    return v_[idx(a, b, c)];
  }

 private:
  std::size_t idx(int a, int b, int c) const { return (static_cast<std::size_t>(a) * B_ + b) * C_ + c; }
  BigCount& at(int a, int b, int c) { return v_[idx(a, b, c)]; }

  int A_, B_, C_;
  std::vector<BigCount> v_;
};

inline BigCount f_abc(int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0) return 0;
  return TriGFTable(a, b, c).get(a, b, c);
}

/// G(x,x) = (1/2)(sum_j binom(4j,2j) x^(2j) - 1), through x^order.
inline PowerSeries G_series(std::size_t order) {
  std::vector<BigCount> c(order + 1);
  BigCount b = 1;  // binom(4j, 2j)
  for (std::size_t j = 1; 2 * j <= order; ++j) {
    const auto n = 4 * j;
    b = b * (n - 3) * (n - 2) * (n - 1) * n / ((2 * j - 1) * (2 * j) * (2 * j - 1) * (2 * j));
    c[2 * j] = b / 2;
  }
  return PowerSeries(std::move(c));
}

template <class Real>
Real G_closed(const Real& x) {
  using std::abs;
  using std::sqrt;
  if (!(abs(x) < Real(1) / 4)) throw std::domain_error("G(x,x) closed form needs |x| < 1/4");
  return Real(1) / (4 * sqrt(1 - 4 * x)) + Real(1) / (4 * sqrt(1 + 4 * x)) - Real(1) / 2;
}

/// g*_0 .. g*_order, where g*_n is the coefficient of x^(2n) in 1/(1 - G(x,x)).
inline PowerSeries gstar_coeffs(std::size_t order) {
  const auto g = G_series(2 * order);
  std::vector<BigCount> h(order + 1);
  for (std::size_t k = 1; k <= order; ++k) h[k] = g.c[2 * k];
  return Hstar_from_H(PowerSeries(std::move(h)));
}

template <class Real>
struct AlphaC2 {
  Real alpha;  // (611 + sqrt 73) / 36
  Real c2;     // log2(alpha) / 2
  Real pole;   // 1 / sqrt(alpha), the smallest positive root of 5184 x^4 - 611 x^2 + 18
};

template <class Real = boost::multiprecision::mpfr_float>
AlphaC2<Real> alpha_c2() {
  using std::log;
  using std::sqrt;
  const Real alpha = (Real(611) + sqrt(Real(73))) / 36;
  const Real c2 = log(alpha) / log(Real(2)) / 2;
  return {alpha, c2, 1 / sqrt(alpha)};
}

/// Strip shape of T(a,c) with the roles of x and y exchanged, so the two
/// horizontal sides become vertical walls of a width-2 strip.
inline ShapeProfile trapezoid_T2_shape(std::int64_t a, std::int64_t c) {
  return ShapeProfile(Polyline({{0, 0}, {2, 1}}), Polyline({{0, a}, {2, 1 + c}}));
}

inline ShapeProfile trapezoid_T3_shape(std::int64_t a, std::int64_t d) {
  return ShapeProfile(Polyline({{0, 0}, {3, 1}}), Polyline({{0, a}, {3, 1 + d}}));
}

/// g*_{a,c}: triangulations of T(a,c); zero unless a = c (mod 2).
inline BigCount gstar_ac(std::int64_t a, std::int64_t c, const CountOptions& opts = {}) {
  if ((a - c) % 2 != 0) return 0;
  return count_shape(trapezoid_T2_shape(a, c), {}, opts);
}

inline bool hstar_admissible(std::int64_t a, std::int64_t d) { return ((a - d - 1) % 3 + 3) % 3 != 0; }

/// h*_{a,d}: triangulations of T3(a,d); zero when a = d + 1 (mod 3).
inline BigCount hstar_ad(std::int64_t a, std::int64_t d, const CountOptions& opts = {}) {
  if (!hstar_admissible(a, d)) return 0;
  return count_shape(trapezoid_T3_shape(a, d), {}, opts);
}

/// g*_n as sums of trapezoid counts (independent of the generating function).
inline PowerSeries gstar_from_trapezoids(std::size_t order, const CountOptions& opts = {}) {
  std::vector<BigCount> out(order + 1);
  for (std::size_t n = 0; n <= order; ++n)
    for (std::int64_t a = 0; a <= static_cast<std::int64_t>(2 * n); ++a) out[n] += gstar_ac(a, 2 * n - a, opts);
  return PowerSeries(std::move(out));
}

inline PowerSeries hstar_from_trapezoids(std::size_t order, const CountOptions& opts = {}) {
  std::vector<BigCount> out(order + 1);
  for (std::size_t n = 0; n <= order; ++n)
    for (std::int64_t a = 0; a <= static_cast<std::int64_t>(n); ++a)
      out[n] += hstar_ad(a, static_cast<std::int64_t>(n) - a, opts);
  return PowerSeries(std::move(out));
}

/// Binary entropy in bits.
inline double binary_entropy(double x) {
  if (x <= 0 || x >= 1) return 0;
  return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

struct NpBound {
  double bound;
  double argmax;
};

/// max over x in [0,1] of min(3 h(x) + c, h(x) + x log2 30).
///
/// Both branches are concave, so the maximum of the min is either an interior
/// maximum of one branch or a point where the branches cross. The difference
/// 2h + c - x log2 30 is concave too, so it has at most one crossing on each
/// side of its own maximum.
inline NpBound np_upper_bound(double c) {
  if (!(c >= 0)) throw std::domain_error("c must be nonnegative");
  const double l30 = std::log2(30.0);
  auto lo_branch = [&](double x) { return 3 * binary_entropy(x) + c; };
  auto hi_branch = [&](double x) { return binary_entropy(x) + x * l30; };
  auto value = [&](double x) { return std::min(lo_branch(x), hi_branch(x)); };
  auto diff = [&](double x) { return lo_branch(x) - hi_branch(x); };

  std::vector<double> cand{0.0, 1.0, 0.5, 30.0 / 31.0};
  const double split = 1 / (1 + std::sqrt(30.0));
  auto bisect = [&](double a, double b) {
    double fa = diff(a);
    if ((fa > 0) == (diff(b) > 0)) return;
    for (int i = 0; i < 200 && b - a > 1e-16; ++i) {
      const double mid = (a + b) / 2;
      const double fm = diff(mid);
      if ((fm > 0) == (fa > 0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    cand.push_back((a + b) / 2);
  };
  bisect(0.0, split);
  bisect(split, 1.0);

  NpBound best{-1, 0};
  for (double x : cand)
    if (value(x) > best.bound) best = {value(x), x};
  return best;
}

}  // namespace lattri
