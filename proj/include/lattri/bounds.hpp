#pragma once

#include "lattri/complex.hpp"
#include "lattri/dense_lu.hpp"
#include "lattri/fredholm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lattri {

/// Error of the n-point rectangle rule for the constant Laurent coefficient
/// of a function holomorphic on R1 < |z| < R2 (q1 = R1/r, q2 = r/R2).
inline double quadrature_error_bound(double M1, double M2, double q1, double q2, int n) {
  if (!(q1 > 0 && q1 < 1 && q2 > 0 && q2 < 1)) throw std::domain_error("ratios must lie in (0, 1)");
  if (n < 1) throw std::domain_error("n must be positive");
  const double a = std::pow(q1, n), b = std::pow(q2, n);
  return M1 * a / (1 - a) + M2 * b / (1 - b);
}

struct GridCertificate {
  std::vector<double> lo, hi;  // the box
  double h = 0;
  double grid_min = 0;
  double M = 0;  // bound on all second partials over the box
  int d = 0;
  double bound = 0;  // grid_min - M d^2 h^2 / 8

  std::string to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "dimension = " << d << '\n';
    for (std::size_t i = 0; i < lo.size() && i < hi.size(); ++i) os << "box[" << i << "] = " << lo[i] << ' ' << hi[i] << '\n';
    os << "step = " << h << '\n'
       << "grid_min = " << grid_min << '\n'
       << "second_derivative_bound = " << M << '\n'
       << "certified_min = " << bound << '\n';
    return os.str();
  }
};

/// Lower bound for the minimum over a box from values on a grid of step h.
inline GridCertificate grid_min_certify(const std::vector<double>& values, double h, int d, double M) {
  if (values.empty()) throw std::invalid_argument("empty grid");
  if (h <= 0 || d < 1 || M < 0) throw std::invalid_argument("bad grid parameters");
  GridCertificate c;
  c.h = h;
  c.d = d;
  c.M = M;
  c.grid_min = *std::min_element(values.begin(), values.end());
  c.bound = c.grid_min - M * d * d * h * h / 8;
  return c;
}

// ---------------------------------------------------------------------------
// Nystrom error budget

struct ErrorBudget {
  double a = 0;                 // strip half-width for K in its first argument and for f
  std::optional<double> a1;     // narrower strip; when set, the estimate uses M'_1 and r_1
  double C = 0;                 // L1 norm of the solution (upper bound)
  double M = 0;                 // max |K| on D x R
  double Mp = 0;                // M', max |K| on R x D
  std::optional<double> Mp1;    // M'_1, max |K| on R x D_1 (defaults to M')
  double Mf = 0;                // max |f| on D
  double Bnorm1_over_n = 0;     // entrywise 1-norm of (I - K^[n])^-1, divided by n
  int n = 0;

  void validate() const {
    if (!(a > 0)) throw std::domain_error("a must be positive");
    if (a1 && !(*a1 > 0 && *a1 < a)) throw std::domain_error("need 0 < a1 < a");
    if (C < 0 || M < 0 || Mp < 0 || Mf < 0 || Bnorm1_over_n < 0 || (Mp1 && *Mp1 < 0))
      throw std::domain_error("bounds must be nonnegative");
    if (n < 1) throw std::domain_error("n must be positive");
  }

  double r() const { return std::exp(-2 * M_PI * a); }
  /// a_1 defaults to a - 1/(2 pi n), the choice that turns the general bound into the simpler one.
  double a1_or_default() const { return a1 ? *a1 : a - 1 / (2 * M_PI * n); }
  double r1() const { return std::exp(-2 * M_PI * a1_or_default()); }
  double Mp1_or_default() const { return Mp1 ? *Mp1 : Mp; }

  /// Constants for the width-3 equation, valid near its root.
  static ErrorBudget width3_near_root(int n) {
    ErrorBudget b;
    b.a = 0.04176;
    b.C = 1;
    b.M = 3910;
    b.Mp = 94.6;
    b.Mf = 258;
    b.Bnorm1_over_n = 3.05;
    b.n = n;
    return b;
  }
};

/// Upper bound for |int phi - mean(phi_hat)|.
inline double nystrom_error_estimate(const ErrorBudget& b) {
  b.validate();
  const double n = b.n;
  if (b.a1) {
    const double r1n = std::pow(b.r1(), n);
    return 2 * b.a * (b.C * b.M + b.Mf) * r1n / ((b.a - *b.a1) * (1 - r1n)) *
           (1 + b.Bnorm1_over_n * b.Mp1_or_default());
  }
  const double rn = std::pow(b.r(), n);
  if (M_E * rn >= 1) throw std::domain_error("e r^n >= 1: estimate undefined");
  return 4 * M_PI * M_E * (b.C * b.M + b.Mf) * (1 + b.Bnorm1_over_n * b.Mp) * n * b.a * rn / (1 - M_E * rn);
}

struct AlphaReport {
  double alpha_n = 0;
  /// n > alpha_n, the condition as printed in the source.
  bool n_exceeds_alpha = false;
  /// n > M alpha_n, the condition the derivation actually needs.
  bool applicable = false;
  /// (||phi_hat||_1 + alpha_n M_f) / (n - M alpha_n), present when applicable.
  std::optional<double> C_bound;
};

/// alpha_n and the resulting bound on C = int |phi|.
///
/// The derivation gives n C <= ||phi_hat||_1 + (C M + M_f) alpha_n, hence the
/// denominator n - M alpha_n.
inline AlphaReport alpha_n_and_C_bound(const ErrorBudget& b, double phi_hat_norm1) {
  b.validate();
  const double a1 = b.a1_or_default();
  const double r1n = std::pow(b.r1(), b.n);
  const double Bnorm1 = b.Bnorm1_over_n * b.n;
  AlphaReport r;
  r.alpha_n = 2 * b.Mp1_or_default() * b.a * Bnorm1 * r1n / ((b.a - a1) * (1 - r1n)) + 1 / (4 * b.a);
  r.n_exceeds_alpha = b.n > r.alpha_n;
  const double denom = b.n - b.M * r.alpha_n;
  r.applicable = denom > 0;
  if (r.applicable) r.C_bound = (phi_hat_norm1 + r.alpha_n * b.Mf) / denom;
  return r;
}

/// Entrywise 1-norm of (I - K^[n])^-1 divided by n, from the explicit inverse.
inline double measure_B_norm1_over_n(const NystromSystem<double>& s) {
  const auto N = static_cast<std::size_t>(s.n);
  DenseLU<double> lu(N);
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t k = 0; k < N; ++k) lu.at(j, k) = (j == k ? Cplx<double>(1) : Cplx<double>(0)) - s.kernel[j * N + k];
  lu.factor();
  double total = 0;
  std::vector<Cplx<double>> e(N);
  for (std::size_t k = 0; k < N; ++k) {
    std::fill(e.begin(), e.end(), Cplx<double>(0));
    e[k] = Cplx<double>(1);
    for (const auto& v : lu.solve(e)) total += v.abs();
  }
  return total / static_cast<double>(N);
}

/// A priori bound for ||B||_1 / n when ||K^[n]||_2 = M2 < 1.
inline double B_norm1_over_n_bound(double M2) {
  if (!(M2 >= 0 && M2 < 1)) throw std::domain_error("need 0 <= ||K||_2 < 1");
  return 1 / (1 - M2);
}

inline double frobenius_norm(const NystromSystem<double>& s) {
  double sum = 0;
  for (const auto& k : s.kernel) sum += k.norm();
  return std::sqrt(sum);
}

struct UniquenessReport {
  bool certified = false;
  std::string route;        // "hilbert-schmidt", "alpha-criterion" or "none"
  double kernel_norm2 = 0;  // ||K^[n]||_2, i.e. sqrt of the rectangle-rule N2
  double N2 = 0;
  double N2_refined = 0;    // the same on a grid twice as fine
  bool invertible = false;
  std::optional<AlphaReport> alpha;
  std::string diagnostics;
};

/// 1 is not an eigenvalue of the integral operator at x: either the
/// Hilbert-Schmidt norm is below one, or I - K^[n] is invertible and the
/// alpha criterion holds for the supplied budget.
inline UniquenessReport uniqueness_certify(double x, int n, std::optional<ErrorBudget> budget = std::nullopt) {
  UniquenessReport r;
  const auto s = nystrom_assemble(x, n);
  r.kernel_norm2 = frobenius_norm(s);
  r.N2 = r.kernel_norm2 * r.kernel_norm2;
  r.N2_refined = N2(x, 2 * n);
  const double n2_err = std::abs(r.N2_refined - r.N2);
  if (std::max(r.N2, r.N2_refined) + n2_err < 1) {
    r.certified = true;
    r.route = "hilbert-schmidt";
    r.invertible = true;
  }
  std::ostringstream diag;
  diag << "N2 = " << r.N2 << " (refined " << r.N2_refined << ")";
  if (budget) {
    try {
      const auto sys = nystrom_solve(x, n);
      r.invertible = true;
      auto b = *budget;
      b.n = n;
      b.Bnorm1_over_n = measure_B_norm1_over_n(sys);
      double phi1 = 0;
      for (const auto& v : sys.phi) phi1 += v.abs();
      r.alpha = alpha_n_and_C_bound(b, phi1);
      diag << "; alpha_n = " << r.alpha->alpha_n << ", M alpha_n = " << b.M * r.alpha->alpha_n << " vs n = " << n;
      if (!r.certified && r.alpha->applicable) {
        r.certified = true;
        r.route = "alpha-criterion";
      }
    } catch (const SingularMatrix& e) {
      diag << "; " << e.what();
    }
  }
  if (!r.certified) r.route = "none";
  r.diagnostics = diag.str();
  return r;
}

/// An interval around the computed root of H(x^3) = 1 that must contain the
/// exact root when |H - H_n| <= E near it.
struct RootEnclosure {
  bool certified = false;
  HighReal lo, hi;
  double c3_error = 0;  // max |c3(end) - c3(x)| over the two ends, c3 = -2 log2 x
  int evaluations = 0;
};

/// H_n(lo) + E < 1 < H_n(hi) - E gives a sign change of the exact H - 1 in
/// (lo, hi). The half-width starts at 2E / H_n' and doubles on failure.
inline RootEnclosure enclose_root(const HighReal& x, int n, double E, unsigned threads = 1) {
  RootEnclosure r;
  const HighReal h = x * HighReal("1e-6");
  const HighReal slope = (H_eval(HighReal(x + h), n, threads) - H_eval(HighReal(x - h), n, threads)) / (2 * h);
  r.evaluations = 2;
  if (!(slope > 0)) return r;
  HighReal delta = 2 * HighReal(E) / slope;
  const HighReal one(1);
  for (int attempt = 0; attempt < 6 && delta < x / 100; ++attempt, delta *= 2) {
    const HighReal lo(x - delta), hi(x + delta);
    r.evaluations += 2;
    if (H_eval(lo, n, threads) + E < one && H_eval(hi, n, threads) - E > one) {
      r.certified = true;
      r.lo = lo;
      r.hi = hi;
      const HighReal c = -2 * log(x) / log(HighReal(2));
      const HighReal clo = -2 * log(lo) / log(HighReal(2)), chi = -2 * log(hi) / log(HighReal(2));
      r.c3_error = static_cast<double>(max(abs(clo - c), abs(chi - c)));
      return r;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Adaptive grid certification

namespace detail {

template <int D>
struct Zone {
  std::array<double, D> lo, hi;
  int depth = 0;
};

}  // namespace detail

template <int D>
using SecondBounds = std::array<std::array<double, D>, D>;

template <int D>
struct AdaptiveCertificate {
  std::array<double, D> lo{}, hi{};
  double certified_min = std::numeric_limits<double>::infinity();
  double grid_min = std::numeric_limits<double>::infinity();
  std::array<double, D> argmin{};
  std::size_t zones = 0;
  std::size_t evaluations = 0;
  double finest_step = 0;
  double coarsest_step = 0;
  bool target_reached = true;
  std::vector<GridCertificate> leaves;  // one per accepted zone

  std::string to_text(const std::string& name) const {
    std::ostringstream os;
    os.precision(17);
    os << "certificate = " << name << '\n' << "dimension = " << D << '\n';
    for (int i = 0; i < D; ++i) os << "box[" << i << "] = " << lo[i] << ' ' << hi[i] << '\n';
    os << "zones = " << zones << '\n'
       << "evaluations = " << evaluations << '\n'
       << "coarsest_step = " << coarsest_step << '\n'
       << "finest_step = " << finest_step << '\n'
       << "grid_min = " << grid_min << '\n';
    for (int i = 0; i < D; ++i) os << "argmin[" << i << "] = " << argmin[i] << '\n';
    os << "certified_min = " << certified_min << '\n' << "target_reached = " << (target_reached ? "yes" : "no") << '\n';
    return os.str();
  }
};

/// Lower bound for min f over the box [lo, hi].
///
/// Each zone is sampled on a grid with `steps[i]` steps along axis i. With
/// per-axis steps h_i and |d_i d_j f| <= M_ij on the zone, a Taylor expansion
/// about the nearest grid point gives min f >= grid min - sum M_ij h_i h_j / 8
/// (the grid lemma, which is the case of equal steps and equal M_ij). Zones
/// whose bound misses `target` are halved along every axis up to `max_depth`
/// times.
template <int D, class F, class Second>
AdaptiveCertificate<D> adaptive_min_certify(F&& f, Second&& second_bound, const std::array<double, D>& lo,
                                            const std::array<double, D>& hi, const std::array<int, D>& steps,
                                            double target, int max_depth) {
  AdaptiveCertificate<D> cert;
  cert.lo = lo;
  cert.hi = hi;
  std::vector<detail::Zone<D>> stack;
  {
    detail::Zone<D> z;
    z.lo = lo;
    z.hi = hi;
    stack.push_back(z);
  }
  double hsum0 = 0;
  for (int i = 0; i < D; ++i) hsum0 += (hi[i] - lo[i]) / steps[i];
  cert.coarsest_step = hsum0 / D;
  cert.finest_step = cert.coarsest_step;
  std::size_t total = 1;
  for (int i = 0; i < D; ++i) total *= static_cast<std::size_t>(steps[i] + 1);

  while (!stack.empty()) {
    const auto z = stack.back();
    stack.pop_back();
    std::array<double, D> h;
    double hsum = 0;
    for (int i = 0; i < D; ++i) {
      h[i] = (z.hi[i] - z.lo[i]) / steps[i];
      hsum += h[i];
    }
    double gmin = std::numeric_limits<double>::infinity();
    std::array<double, D> at{};
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::array<double, D> p;
      std::size_t rest = idx;
      for (int i = 0; i < D; ++i) {
        const auto k = static_cast<int>(rest % static_cast<std::size_t>(steps[i] + 1));
        rest /= static_cast<std::size_t>(steps[i] + 1);
        p[i] = k == steps[i] ? z.hi[i] : z.lo[i] + k * h[i];
      }
      const double v = f(p);
      if (v < gmin) {
        gmin = v;
        at = p;
      }
    }
    cert.evaluations += total;
    const SecondBounds<D> M = second_bound(z.lo, z.hi);
    double slack = 0, Mmax = 0;
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) {
        slack += M[i][j] * h[i] * h[j];
        Mmax = std::max(Mmax, M[i][j]);
      }
    const double bound = gmin - slack / 8;
    if (bound < target && z.depth < max_depth) {
      for (int mask = 0; mask < (1 << D); ++mask) {
        detail::Zone<D> c;
        c.depth = z.depth + 1;
        for (int i = 0; i < D; ++i) {
          const double mid = (z.lo[i] + z.hi[i]) / 2;
          c.lo[i] = (mask >> i) & 1 ? mid : z.lo[i];
          c.hi[i] = (mask >> i) & 1 ? z.hi[i] : mid;
        }
        stack.push_back(c);
      }
      continue;
    }
    if (bound < target) cert.target_reached = false;
    ++cert.zones;
    cert.finest_step = std::min(cert.finest_step, hsum / D);
    if (gmin < cert.grid_min) {
      cert.grid_min = gmin;
      cert.argmin = at;
    }
    cert.certified_min = std::min(cert.certified_min, bound);
    GridCertificate g;
    g.lo.assign(z.lo.begin(), z.lo.end());
    g.hi.assign(z.hi.begin(), z.hi.end());
    g.h = hsum / D;
    g.grid_min = gmin;
    g.M = Mmax;
    g.d = D;
    g.bound = bound;
    cert.leaves.push_back(std::move(g));
  }
  return cert;
}

// ---------------------------------------------------------------------------
// |P| on the torus

namespace detail {

/// P(x,t,u) = sum c x^a t^b u^e over these monomials.
struct PMonomial {
  double c;
  int a, b, e;
};

inline const std::array<PMonomial, 8>& P_monomials() {
  static const std::array<PMonomial, 8> m{{
      {1, 0, 2, 2},
      {-1, 1, 1, 2},
      {-1, 1, 2, 1},
      {1, 2, 1, 1},
      {-1, 2, 4, 1},
      {-1, 2, 1, 4},
      {1, 3, 4, 0},
      {1, 3, 0, 4},
  }};
  return m;
}

inline double falling(int a, int i) {
  double r = 1;
  for (int k = 0; k < i; ++k) r *= a - k;
  return r;
}

/// Orders (i, j, k) of differentiation in (x', tau, theta).
using Order = std::array<int, 3>;

/// d^(i,j,k) of P(s x', e^{2 pi i tau}, e^{2 pi i theta}).
inline Cplx<double> P_derivative(double s, const std::array<double, 3>& p, const Order& o) {
  Cplx<double> out(0);
  const double x = s * p[0];
  for (const auto& m : P_monomials()) {
    if (o[0] > m.a) continue;
    const double mag = m.c * falling(m.a, o[0]) * std::pow(s, o[0]) * std::pow(x, m.a - o[0]) *
                       std::pow(2 * M_PI * m.b, o[1]) * std::pow(2 * M_PI * m.e, o[2]);
    // each tau or theta derivative contributes a factor i
    const double ang = 2 * M_PI * (m.b * p[1] + m.e * p[2]) + (o[1] + o[2]) * M_PI / 2;
    out += Cplx<double>(mag * std::cos(ang), mag * std::sin(ang));
  }
  return out;
}

/// Sum of monomial bounds for |d^o P| over 0 <= x' <= xp_max.
inline double P_derivative_bound(double s, double xp_max, const Order& o) {
  double b = 0;
  for (const auto& m : P_monomials()) {
    if (o[0] > m.a) continue;
    b += std::abs(m.c) * falling(m.a, o[0]) * std::pow(s, o[0]) * std::pow(s * xp_max, m.a - o[0]) *
         std::pow(2 * M_PI * m.b, o[1]) * std::pow(2 * M_PI * m.e, o[2]);
  }
  return b;
}

inline Order add(Order a, int axis) {
  ++a[static_cast<std::size_t>(axis)];
  return a;
}

/// Upper bounds for |P|, |dP| and |d^2 P| over a box: value at the centre
/// plus the next-order monomial bound times the half-widths.
struct PLocalBounds {
  double P = 0;
  std::array<double, 3> D1{};
  std::array<std::array<double, 3>, 3> D2{};
};

/// Monomial bounds for every order up to 3, for one x' range.
struct PBoundTable {
  std::array<std::array<std::array<double, 4>, 4>, 4> v{};
  PBoundTable(double s, double xp_max) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; i + j < 4; ++j)
        for (int k = 0; i + j + k < 4; ++k) v[i][j][k] = P_derivative_bound(s, xp_max, {i, j, k});
  }
  double operator()(const Order& o) const { return v[o[0]][o[1]][o[2]]; }
};

inline PLocalBounds P_local_bounds(double s, const std::array<double, 3>& lo, const std::array<double, 3>& hi,
                                   const PBoundTable& bt) {
  std::array<double, 3> c, hw;
  for (int i = 0; i < 3; ++i) {
    c[i] = (lo[i] + hi[i]) / 2;
    hw[i] = (hi[i] - lo[i]) / 2;
  }
  auto local = [&](const Order& o) {
    double v = P_derivative(s, c, o).abs();
    for (int k = 0; k < 3; ++k) v += bt(add(o, k)) * hw[k];
    return v;
  };
  PLocalBounds b;
  b.P = local({0, 0, 0});
  for (int i = 0; i < 3; ++i) {
    b.D1[i] = local(add({0, 0, 0}, i));
    for (int j = i; j < 3; ++j) b.D2[i][j] = b.D2[j][i] = local(add(add({0, 0, 0}, i), j));
  }
  return b;
}

inline PLocalBounds P_local_bounds(double s, const std::array<double, 3>& lo, const std::array<double, 3>& hi) {
  return P_local_bounds(s, lo, hi, PBoundTable(s, hi[0]));
}

}  // namespace detail

struct PCertificate {
  AdaptiveCertificate<3> cert;  // of |P|^2 over (x', tau, theta) with x = s x'
  double scale = 0.25;
  double x_max = 0;

  // lower bounds for |P| on a bin lattice, filled from the leaves
  int nx = 0, nt = 0, nu = 0;
  std::vector<float> table;

  double min_abs_P() const { return cert.certified_min > 0 ? std::sqrt(cert.certified_min) : 0.0; }

  /// Lower bound for |P| over x in [xa, xb], tau in [ta, tb] and theta in bin `ub`.
  double min_abs_P(double xa, double xb, double ta, double tb, int ub) const {
    const double xp_max = x_max / scale;
    const int x0 = bin(xa / scale, xp_max, nx), x1 = bin(xb / scale, xp_max, nx);
    const int t0 = bin(ta, 1, nt), t1 = bin(tb, 1, nt);
    float m = std::numeric_limits<float>::infinity();
    for (int i = x0; i <= x1; ++i)
      for (int j = t0; j <= t1; ++j) m = std::min(m, table[(static_cast<std::size_t>(i) * nt + j) * nu + ub]);
    return m;
  }

  void build_table(int bx, int bt, int bu) {
    nx = bx;
    nt = bt;
    nu = bu;
    table.assign(static_cast<std::size_t>(nx) * nt * nu, std::numeric_limits<float>::infinity());
    const std::array<int, 3> n{nx, nt, nu};
    for (const auto& leaf : cert.leaves) {
      // rounded down so the float never exceeds the certified value
      const float v = leaf.bound > 0 ? std::nextafter(static_cast<float>(std::sqrt(leaf.bound)), 0.0f) : 0.0f;
      std::array<int, 3> a, b;
      for (std::size_t i = 0; i < 3; ++i) {
        a[i] = bin(leaf.lo[i] - cert.lo[i], cert.hi[i] - cert.lo[i], n[i]);
        b[i] = bin(leaf.hi[i] - cert.lo[i], cert.hi[i] - cert.lo[i], n[i]);
      }
      for (int i = a[0]; i <= b[0]; ++i)
        for (int j = a[1]; j <= b[1]; ++j)
          for (int k = a[2]; k <= b[2]; ++k) {
            auto& slot = table[(static_cast<std::size_t>(i) * nt + j) * nu + k];
            slot = std::min(slot, v);
          }
    }
  }

  std::string to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << cert.to_text("abs_P_squared") << "x_scale = " << scale << '\n'
       << "certified_min_abs_P = " << min_abs_P() << '\n';
    return os.str();
  }

 private:
  // bins are closed on both sides: a point on a bin edge belongs to both
  static int bin(double v, double width, int n) {
    return std::clamp(static_cast<int>(std::floor(v / width * n)), 0, n - 1);
  }
};

/// Certifies min |P(x, t, u)| over 0 <= x <= x_max and |t| = |u| = 1 by
/// bounding |P(s x', e^{2 pi i tau}, e^{2 pi i theta})|^2 zone by zone, with
/// s = 1/4 to bring the partial derivatives to comparable size. Zones are
/// refined until |P| >= target_fraction times the sampled minimum.
inline PCertificate certify_P_on_torus(double x_max = 17.0 / 35, double target_fraction = 0.97, int max_depth = 10) {
  const double s = 0.25;
  const double xp_max = x_max / s;
  auto F = [&](const std::array<double, 3>& p) { return detail::P_derivative(s, p, {0, 0, 0}).norm(); };
  // d_i d_j |P|^2 = 2 Re(conj(P_i) P_j + conj(P) P_ij)
  auto second = [&](const std::array<double, 3>& lo, const std::array<double, 3>& hi) {
    const auto b = detail::P_local_bounds(s, lo, hi);
    SecondBounds<3> M;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M[i][j] = 2 * (b.D1[i] * b.D1[j] + b.P * b.D2[i][j]);
    return M;
  };

  double est = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j < 40; ++j)
      for (int k = 0; k < 40; ++k) est = std::min(est, F({xp_max * i / 40, j / 40.0, k / 40.0}));

  PCertificate pc;
  pc.scale = s;
  pc.x_max = x_max;
  pc.cert = adaptive_min_certify<3>(F, second, {0.0, 0.0, 0.0}, {xp_max, 1.0, 1.0}, {4, 4, 4},
                                    target_fraction * target_fraction * est, max_depth);
  pc.build_table(32, 256, 256);
  return pc;
}

// ---------------------------------------------------------------------------
// Psi on the cylinder

struct PsiCertificate {
  AdaptiveCertificate<2> cert;  // of Re Psi over (x, tau)
  double x_max = 0;

  /// Re Psi >= certified_min implies the same bound for |Psi|.
  double min_abs_Psi() const { return cert.certified_min; }

  std::string to_text() const { return cert.to_text("re_Psi"); }
};

/// Certifies a lower bound for Re Psi(x, e^{2 pi i tau}), hence for |Psi|, over
/// 0 <= x <= x_max. With u = e^{2 pi i theta}, Phi = int_0^1 u^4 / P dtheta,
/// so derivatives of Phi are bounded by integrating bounds for derivatives
/// of 1/P over theta-bins, using the P certificate on each bin. Psi at
/// conj(t) is the conjugate of Psi at t, so tau in [0, 1/2] suffices.
inline PsiCertificate certify_Re_Psi(const PCertificate& pc, double target_fraction = 0.99, int max_depth = 12) {
  const double x_max = pc.x_max;
  auto F = [](const std::array<double, 2>& p) { return eval_Psi(p[0], circle_point(p[1])).re; };

  auto second = [&](const std::array<double, 2>& lo, const std::array<double, 2>& hi) {
    SecondBounds<2> M{};
    // bounds for |Phi|, |Phi_i|, |Phi_ij| with i, j in {x, tau}
    double phi = 0;
    std::array<double, 2> phi1{};
    std::array<std::array<double, 2>, 2> phi2{};
    const double w = 1.0 / pc.nu;
    const detail::PBoundTable bt(1.0, hi[0]);
    for (int ub = 0; ub < pc.nu; ++ub) {
      const double p = pc.min_abs_P(lo[0], hi[0], lo[1], hi[1], ub);
      if (!(p > 0)) {
        for (auto& r : M) r.fill(std::numeric_limits<double>::infinity());
        return M;
      }
      // x unscaled here: s = 1
      const auto b = detail::P_local_bounds(1.0, {lo[0], lo[1], ub * w}, {hi[0], hi[1], (ub + 1) * w}, bt);
      const double p2 = p * p, p3 = p2 * p;
      phi += w / p;
      for (int i = 0; i < 2; ++i) {
        phi1[i] += w * b.D1[i] / p2;
        for (int j = 0; j < 2; ++j) phi2[i][j] += w * (2 * b.D1[i] * b.D1[j] / p3 + b.D2[i][j] / p2);
      }
    }
    // g = x^2 (t - x), t = e^{2 pi i tau}
    const double x = hi[0];
    const double g = x * x * (1 + x);
    const std::array<double, 2> g1{2 * x + 3 * x * x, 2 * M_PI * x * x};
    const std::array<std::array<double, 2>, 2> g2{{{2 + 6 * x, 4 * M_PI * x}, {4 * M_PI * x, 4 * M_PI * M_PI * x * x}}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) M[i][j] = g2[i][j] * phi + g1[i] * phi1[j] + g1[j] * phi1[i] + g * phi2[i][j];
    return M;
  };

  double est = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 60; ++i)
    for (int j = 0; j <= 30; ++j) est = std::min(est, F({x_max * i / 60, j / 60.0}));

  PsiCertificate out;
  out.x_max = x_max;
  out.cert = adaptive_min_certify<2>(F, second, {0.0, 0.0}, {x_max, 0.5}, {4, 2}, target_fraction * est, max_depth);
  return out;
}

}  // namespace lattri
