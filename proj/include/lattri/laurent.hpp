#pragma once

#include "lattri/bigcount.hpp"
#include "lattri/complex.hpp"

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lattri {

/// Finite Laurent polynomial in t with integer coefficients.
using LaurentPoly = std::map<int, BigCount>;

/// Truncated series in x whose coefficients are Laurent polynomials in t.
struct LaurentSeries {
  std::vector<LaurentPoly> coeffs;  // coeffs[k] multiplies x^k

  std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  const LaurentPoly& operator[](std::size_t k) const { return coeffs.at(k); }

  template <class Real>
  Cplx<Real> eval(const Real& x, const Cplx<Real>& t) const {
    const Cplx<Real> tinv = Cplx<Real>(1) / t;
    Cplx<Real> s(0);
    Real xp = 1;
    for (const auto& c : coeffs) {
      for (const auto& [e, v] : c) {
        if (v == 0) continue;
        Cplx<Real> term(Real(v.str()));
        const auto& base = e >= 0 ? t : tinv;
        for (int i = 0; i < (e >= 0 ? e : -e); ++i) term *= base;
        s += term * xp;
      }
      xp *= x;
    }
    return s;
  }
};

namespace detail {

using BiPoly = std::map<std::pair<int, int>, BigCount>;  // (u exponent, t exponent)

inline void add_product(BiPoly& acc, const BiPoly& a, const BiPoly& b, int sign) {
  for (const auto& [ea, va] : a)
    for (const auto& [eb, vb] : b) {
      auto& slot = acc[{ea.first + eb.first, ea.second + eb.second}];
      if (sign > 0) slot += va * vb;
      else slot -= va * vb;
    }
}

inline void prune(BiPoly& p) {
  for (auto it = p.begin(); it != p.end();) it = it->second == 0 ? p.erase(it) : std::next(it);
}

}  // namespace detail

/// Phi(x,t) = coefficient of u^(-1) in u^3 / P(x,t,u), expanded in x through x^order.
///
/// With P = u^2 t^2 (1 + x q1 + x^2 q2 + x^3 q3), the expansion of 1/P is
/// r_0 = u^-2 t^-2, r_N = -(q1 r_{N-1} + q2 r_{N-2} + q3 r_{N-3}).
inline LaurentSeries Phi_series(std::size_t order) {
  using detail::BiPoly;
  // q1 = -(u + t)/(u t), q2 = (1 - t^3 - u^3)/(u t), q3 = (t^4 + u^4)/(u^2 t^2)
  const BiPoly q1{{{0, -1}, -1}, {{-1, 0}, -1}};
  const BiPoly q2{{{-1, -1}, 1}, {{-1, 2}, -1}, {{2, -1}, -1}};
  const BiPoly q3{{{-2, 2}, 1}, {{2, -2}, 1}};
  std::vector<BiPoly> r;
  r.push_back(BiPoly{{{-2, -2}, 1}});
  LaurentSeries out;
  for (std::size_t n = 0; n <= order; ++n) {
    if (n > 0) {
      BiPoly next;
      detail::add_product(next, q1, r[n - 1], -1);
      if (n >= 2) detail::add_product(next, q2, r[n - 2], -1);
      if (n >= 3) detail::add_product(next, q3, r[n - 3], -1);
      detail::prune(next);
      r.push_back(std::move(next));
    }
    LaurentPoly c;
    for (const auto& [e, v] : r[n])
      if (e.first == -4) c[e.second] = v;
    out.coeffs.push_back(std::move(c));
  }
  return out;
}

/// Psi = 1 - x^2 (t - x) Phi through x^order.
inline LaurentSeries Psi_series(std::size_t order) {
  const auto phi = Phi_series(order);
  LaurentSeries out;
  out.coeffs.resize(order + 1);
  out.coeffs[0][0] = 1;
  for (std::size_t k = 2; k <= order; ++k) {
    for (const auto& [e, v] : phi[k - 2]) out.coeffs[k][e + 1] -= v;
    if (k >= 3)
      for (const auto& [e, v] : phi[k - 3]) out.coeffs[k][e] += v;
  }
  for (auto& c : out.coeffs)
    for (auto it = c.begin(); it != c.end();) it = it->second == 0 ? c.erase(it) : std::next(it);
  return out;
}

struct PositivityReport {
  std::size_t coefficients = 0;
  std::size_t negative = 0;
  std::size_t first_negative_order = 0;  // 0 when none
};

/// Sign census of the coefficients of a series from x^1 on (a diagnostic only).
inline PositivityReport positivity_report(const LaurentSeries& s) {
  PositivityReport r;
  for (std::size_t k = 1; k <= s.order(); ++k)
    for (const auto& [e, v] : s[k]) {
      ++r.coefficients;
      if (v < 0) {
        ++r.negative;
        if (r.first_negative_order == 0) r.first_negative_order = k;
      }
    }
  return r;
}

/// 1 - Psi, for the positivity diagnostic.
inline LaurentSeries one_minus(const LaurentSeries& s) {
  LaurentSeries out = s;
  for (auto& c : out.coeffs)
    for (auto& [e, v] : c) v = -v;
  if (!out.coeffs.empty()) out.coeffs[0][0] += 1;
  return out;
}

}  // namespace lattri
