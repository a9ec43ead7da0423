#pragma once

#include "lattri/complex.hpp"
#include "lattri/dense_lu.hpp"
#include "lattri/quartic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lattri {

class RootCountError : public std::runtime_error {
 public:
  explicit RootCountError(int count)
      : std::runtime_error("expected two roots of P inside the unit disk, found " + std::to_string(count)) {}
};

class NoSignChange : public std::runtime_error {
 public:
  NoSignChange() : std::runtime_error("H(x^3) - 1 does not change sign on the bracket") {}
};

/// Coefficients of P(x,t,u) as a polynomial in u:
///   P = u^2 t^2 - (u + t) u t x + (1 - t^3 - u^3) u t x^2 + (t^4 + u^4) x^3.
template <class Real>
std::array<Cplx<Real>, 5> P_coeffs_in_u(const Real& x, const Cplx<Real>& t) {
  const Real x2 = x * x;
  const Real x3 = x2 * x;
  const auto t2 = t * t;
  const auto t4 = t2 * t2;
  return {t4 * x3,                    // u^0
          t * x2 - t2 * x - t4 * x2,  // u^1
          t2 - t * x,                 // u^2
          Cplx<Real>(0),              // u^3
          Cplx<Real>(x3) - t * x2};   // u^4
}

template <class Real>
Cplx<Real> eval_P(const Real& x, const Cplx<Real>& t, const Cplx<Real>& u) {
  return horner(P_coeffs_in_u(x, t), u);
}

/// The two roots of u -> P(x,t,u) with |u| < 1.
template <class Real>
std::array<Cplx<Real>, 2> unit_disk_roots(const Real& x, const Cplx<Real>& t) {
  using std::abs;
  using std::sqrt;
  if (!(x > 0)) throw std::domain_error("unit_disk_roots needs x > 0");
  const auto c = P_coeffs_in_u(x, t);
  const auto roots = quartic_roots(c);
  // guard band around the circle: half the working digits
  const Real guard = sqrt(working_epsilon<Real>());
  std::array<Cplx<Real>, 2> inside;
  int count = 0;
  for (const auto& u : roots) {
    const Real r = u.abs();
    if (abs(r - 1) < guard) throw RootCountError(-1);
    if (r < 1) {
      if (count == 2) throw RootCountError(3);
      inside[static_cast<std::size_t>(count++)] = u;
    }
  }
  if (count != 2) throw RootCountError(count);
  return inside;
}

/// Phi(x,t): the sum of residues of u^3 / P(x,t,u) inside the unit disk.
template <class Real>
Cplx<Real> eval_Phi(const Real& x, const Cplx<Real>& t) {
  if (x == 0) return Cplx<Real>(0);
  const auto c = P_coeffs_in_u(x, t);
  Cplx<Real> s(0);
  for (const auto& u : unit_disk_roots(x, t)) s += u * u * u / horner_derivative(c, u);
  return s;
}

template <class Real>
Cplx<Real> Psi_from_Phi(const Real& x, const Cplx<Real>& t, const Cplx<Real>& phi) {
  return Cplx<Real>(1) - (t - Cplx<Real>(x)) * phi * (x * x);
}

template <class Real>
Cplx<Real> eval_Psi(const Real& x, const Cplx<Real>& t) {
  return Psi_from_Phi(x, t, eval_Phi(x, t));
}

template <class Real>
struct KernelValue {
  Cplx<Real> K;
  Cplx<Real> f;
};

/// Kernel K(x, tau, theta) and right-hand side f(x, tau) of the integral equation
///   phi(tau) = f(tau) + int_0^1 K(tau, theta) phi(theta) dtheta.
template <class Real>
KernelValue<Real> kernel_and_rhs(const Real& x, const Real& tau, const Real& theta) {
  using std::abs;
  const auto t = circle_point(tau);
  const auto u = circle_point(theta);
  const auto psi = eval_Psi(x, t);
  const auto p = eval_P(x, t, u);
  const Real tiny = working_epsilon<Real>() * 1024;
  if (psi.abs() < tiny) throw std::domain_error("Psi vanishes");
  if (p.abs() < tiny) throw std::domain_error("P vanishes on the torus");
  const Real x2 = x * x;
  const auto K = (t * t * t * u * (u - Cplx<Real>(x)) * x2) / (p * psi);
  const auto f = (t * t) / ((t - Cplx<Real>(x)) * psi);
  return {K, f};
}

/// Nystrom discretization on n equispaced nodes t_j = exp(2 pi i j / n).
template <class Real>
struct NystromSystem {
  Real x;
  int n = 0;
  std::vector<Cplx<Real>> nodes;   // t_j
  std::vector<Cplx<Real>> psi;     // Psi(x, t_j)
  std::vector<Cplx<Real>> rhs;     // f_j
  std::vector<Cplx<Real>> kernel;  // row-major, K_jk = K(x, tau_j, theta_k) / n
  std::vector<Cplx<Real>> phi;     // solution
  Real residual{0};                // || (I - K) phi - f ||_inf

  const Cplx<Real>& K(int j, int k) const { return kernel[static_cast<std::size_t>(j) * n + k]; }

  /// x^2 * mean(phi) = H(x^3), complex (the imaginary part is rounding noise).
  Cplx<Real> H() const {
    Cplx<Real> s(0);
    for (const auto& v : phi) s += v;
    return s * (x * x / Real(n));
  }
};

namespace detail {

// Worker threads inherit the process-wide HighReal precision set by the caller.
template <class F>
void parallel_rows(int n, unsigned threads, F&& row) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (int j = 0; j < n; ++j) row(j);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (int j = static_cast<int>(w); j < n; j += static_cast<int>(threads)) row(j);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Assembles the kernel matrix and right-hand side at x without solving.
template <class Real>
NystromSystem<Real> nystrom_assemble(const Real& x, int n, unsigned threads = 1) {
  if (n < 4) throw std::invalid_argument("need at least 4 quadrature nodes");
  if (x < 0) throw std::domain_error("x must be nonnegative");
  NystromSystem<Real> s;
  s.x = x;
  s.n = n;
  // powers of the primitive root, indexed mod n
  std::vector<Cplx<Real>> w(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) w[static_cast<std::size_t>(m)] = circle_point(Real(m) / Real(n));
  auto W = [&](std::int64_t e) -> const Cplx<Real>& { return w[static_cast<std::size_t>(((e % n) + n) % n)]; };

  s.nodes = w;
  s.psi.resize(static_cast<std::size_t>(n));
  s.rhs.resize(static_cast<std::size_t>(n));
  s.kernel.assign(static_cast<std::size_t>(n) * n, Cplx<Real>(0));

  detail::parallel_rows(n, threads, [&](int j) {
    const auto& t = w[static_cast<std::size_t>(j)];
    s.psi[static_cast<std::size_t>(j)] = x == 0 ? Cplx<Real>(1) : eval_Psi(x, t);
    s.rhs[static_cast<std::size_t>(j)] = t * t / ((t - Cplx<Real>(x)) * s.psi[static_cast<std::size_t>(j)]);
  });
  if (x == 0) return s;

  const Real x2 = x * x;
  const Real x3 = x2 * x;
  detail::parallel_rows(n, threads, [&](int j) {
    const Cplx<Real> scale = Cplx<Real>(x2 / Real(n)) / s.psi[static_cast<std::size_t>(j)];
    for (int k = 0; k < n; ++k) {
      // monomials of P(x, w^j, w^k)
      Cplx<Real> p = W(2 * j + 2 * k);
      p -= (W(j + 2 * k) + W(2 * j + k)) * x;
      p += (W(j + k) - W(4 * j + k) - W(j + 4 * k)) * x2;
      p += (W(4 * j) + W(4 * k)) * x3;
      const Cplx<Real> num = W(3 * j + 2 * k) - W(3 * j + k) * x;
      s.kernel[static_cast<std::size_t>(j) * n + k] = num * scale / p;
    }
  });
  return s;
}

/// Solves (I - K) phi = f by dense LU with partial pivoting.
template <class Real>
NystromSystem<Real> nystrom_solve(const Real& x, int n, unsigned threads = 1) {
  auto s = nystrom_assemble(x, n, threads);
  const auto N = static_cast<std::size_t>(n);
  DenseLU<Real> lu(N);
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t k = 0; k < N; ++k) lu.at(j, k) = (j == k ? Cplx<Real>(1) : Cplx<Real>(0)) - s.kernel[j * N + k];
  lu.factor();
  s.phi = lu.solve(s.rhs);

  using std::abs;
  Real res = 0;
  for (std::size_t j = 0; j < N; ++j) {
    Cplx<Real> r = s.phi[j] - s.rhs[j];
    for (std::size_t k = 0; k < N; ++k) r -= s.kernel[j * N + k] * s.phi[k];
    const Real a = r.abs();
    if (a > res) res = a;
  }
  s.residual = res;
  return s;
}

/// H(x^3) from the n-node discretization.
template <class Real>
Real H_eval(const Real& x, int n, unsigned threads = 1) {
  return nystrom_solve(x, n, threads).H().re;
}

/// Rectangle-rule value of int int |K(x, tau, theta)|^2 on an n x n grid.
template <class Real>
Real N2(const Real& x, int n, unsigned threads = 1) {
  const auto s = nystrom_assemble(x, n, threads);
  Real sum = 0;
  for (const auto& k : s.kernel) sum += k.norm();
  // entries carry a 1/n factor already
  return sum;
}

struct PrecisionContext {
  unsigned digits = 24;
  int nodes = 100;
  unsigned threads = 1;

  /// Working precision following the node count (about 0.12 digits per node).
  static unsigned default_digits(int nodes) { return static_cast<unsigned>(std::max(15.0, 12 + 0.12 * nodes)); }
};

struct C3Result {
  HighReal x0;
  HighReal limit;  // 1 / x0^2
  HighReal c3;     // log2(limit)
  HighReal residual;  // H(x0^3) - 1 at the returned x0
  int evaluations = 0;
  unsigned digits = 0;
  int nodes = 0;
};

inline const char* bracket_lo_text() { return "16/33"; }
inline const char* bracket_hi_text() { return "17/35"; }

/// Root of H(x^3) = 1 in [16/33, 17/35]: bisection on a coarse double-precision
/// system, then secant steps on the full system at working precision.
inline C3Result solve_x0_c3(const PrecisionContext& ctx) {
  if (ctx.nodes < 4) throw std::invalid_argument("need at least 4 quadrature nodes");
  const int nc = std::min(ctx.nodes, 100);
  auto coarse = [&](double x) { return H_eval<double>(x, nc, ctx.threads) - 1.0; };
  double lo = 16.0 / 33.0, hi = 17.0 / 35.0;
  double flo = coarse(lo), fhi = coarse(hi);
  if (!(flo < 0 && fhi > 0)) throw NoSignChange();
  while (hi - lo > 1e-11) {
    const double mid = (lo + hi) / 2;
    const double fm = coarse(mid);
    (fm < 0 ? lo : hi) = mid;
  }
  const double xc = (lo + hi) / 2;

  PrecisionScope scope(ctx.digits);
  C3Result r;
  r.digits = ctx.digits;
  r.nodes = ctx.nodes;
  auto F = [&](const HighReal& x) {
    ++r.evaluations;
    return H_eval<HighReal>(x, ctx.nodes, ctx.threads) - 1;
  };
  HighReal a = HighReal(xc) - HighReal("1e-9"), b = HighReal(xc) + HighReal("1e-9");
  HighReal fa = F(a), fb = F(b);
  const HighReal lo_h = HighReal(16) / 33, hi_h = HighReal(17) / 35;
  for (HighReal width("1e-9"); fa * fb > 0 && width < HighReal("0.01");) {
    width *= 100;
    a = std::max(lo_h, HighReal(xc) - width);
    b = std::min(hi_h, HighReal(xc) + width);
    fa = F(a);
    fb = F(b);
  }
  if (fa * fb > 0) throw NoSignChange();

  using std::abs;
  const HighReal tol = working_epsilon<HighReal>() * 1000;
  for (int it = 0; it < 60; ++it) {
    if (fb == fa) break;
    const HighReal c = b - fb * (b - a) / (fb - fa);
    a = b;
    fa = fb;
    b = c;
    fb = F(b);
    if (abs(b - a) <= tol * abs(b) || fb == 0) break;
  }
  r.x0 = b;
  r.residual = fb;
  r.limit = 1 / (b * b);
  r.c3 = log(r.limit) / log(HighReal(2));
  return r;
}

}  // namespace lattri
