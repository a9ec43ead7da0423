#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>

namespace lattri {

using HighReal = boost::multiprecision::mpfr_float;

/// Sets the working precision (decimal digits) of newly created HighReal
/// values for the lifetime of the guard, on the calling thread.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits) : saved_(HighReal::default_precision()) {
    if (digits < 15) throw std::invalid_argument("working precision below 15 digits");
    HighReal::default_precision(digits);
  }
  ~PrecisionScope() { HighReal::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

template <class Real>
Real pi_value() {
  using std::acos;
  return acos(Real(-1));
}

/// Minimal complex number over any real type (std::complex is only specified
/// for the builtin floating types).
template <class Real>
struct Cplx {
  Real re{0};
  Real im{0};

  Cplx() = default;
  Cplx(Real r) : re(std::move(r)), im(0) {}  // NOLINT: implicit from real on purpose
  Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  template <class I, class = std::enable_if_t<std::is_integral_v<I>>>
  Cplx(I v) : re(v), im(0) {}  // NOLINT

  Cplx& operator+=(const Cplx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cplx& operator-=(const Cplx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Cplx& operator*=(const Cplx& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Cplx& operator/=(const Cplx& o) {
    const Real d = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = std::move(r);
    return *this;
  }
  Cplx operator-() const { return {-re, -im}; }

  friend Cplx operator+(Cplx a, const Cplx& b) { return a += b; }
  friend Cplx operator-(Cplx a, const Cplx& b) { return a -= b; }
  friend Cplx operator*(Cplx a, const Cplx& b) { return a *= b; }
  friend Cplx operator/(Cplx a, const Cplx& b) { return a /= b; }
  friend Cplx operator*(Cplx a, const Real& s) {
    a.re *= s;
    a.im *= s;
    return a;
  }
  friend Cplx operator*(const Real& s, Cplx a) { return a * s; }

  Cplx conj() const { return {re, -im}; }
  Real norm() const { return re * re + im * im; }
  Real abs() const {
    using std::sqrt;
    return sqrt(norm());
  }

  friend std::ostream& operator<<(std::ostream& os, const Cplx& z) { return os << '(' << z.re << ',' << z.im << ')'; }
};

/// e^(2 pi i tau)
template <class Real>
Cplx<Real> circle_point(const Real& tau) {
  using std::cos;
  using std::sin;
  const Real a = 2 * pi_value<Real>() * tau;
  return {cos(a), sin(a)};
}

template <class Real>
Cplx<Real> from_std(const std::complex<double>& z) {
  return {Real(z.real()), Real(z.imag())};
}

template <class Real>
std::complex<double> to_std(const Cplx<Real>& z) {
  return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

}  // namespace lattri
