#pragma once

#include "lattri/complex.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <array>
#include <complex>
#include <limits>
#include <stdexcept>

namespace lattri {

template <class Real>
Real working_epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

template <>
inline HighReal working_epsilon<HighReal>() {
  using std::pow;
  return pow(HighReal(10), -static_cast<int>(HighReal::default_precision()));
}

template <class Real, std::size_t N>
Cplx<Real> horner(const std::array<Cplx<Real>, N>& c, const Cplx<Real>& u) {
  Cplx<Real> s = c[N - 1];
  for (std::size_t k = N - 1; k-- > 0;) s = s * u + c[k];
  return s;
}

template <class Real, std::size_t N>
Cplx<Real> horner_derivative(const std::array<Cplx<Real>, N>& c, const Cplx<Real>& u) {
  Cplx<Real> s = Real(N - 1) * c[N - 1];
  for (std::size_t k = N - 1; k-- > 1;) s = s * u + Real(k) * c[k];
  return s;
}

/// All four roots of c[4] u^4 + ... + c[0]: companion-matrix eigenvalues in
/// double precision, then Newton steps at the working precision of Real.
template <class Real>
std::array<Cplx<Real>, 4> quartic_roots(const std::array<Cplx<Real>, 5>& c) {
  const auto lead = to_std(c[4]);
  if (std::abs(lead) == 0.0) throw std::domain_error("quartic has vanishing leading coefficient");
  Eigen::Matrix4cd comp = Eigen::Matrix4cd::Zero();
  for (int i = 1; i < 4; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < 4; ++i) comp(i, 3) = -to_std(c[static_cast<std::size_t>(i)]) / lead;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(comp, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw std::runtime_error("companion eigenvalue solver failed");

  const Real eps = working_epsilon<Real>();
  std::array<Cplx<Real>, 4> roots;
  for (int i = 0; i < 4; ++i) {
    Cplx<Real> u = from_std<Real>(es.eigenvalues()(i));
    for (int it = 0; it < 100; ++it) {
      const auto d = horner_derivative(c, u);
      if (d.norm() == 0) break;
      const auto step = horner(c, u) / d;
      u -= step;
      const Real scale = u.norm() > 1 ? u.norm() : Real(1);
      if (step.norm() <= eps * eps * scale * 16) break;
    }
    roots[static_cast<std::size_t>(i)] = u;
  }
  return roots;
}

}  // namespace lattri
