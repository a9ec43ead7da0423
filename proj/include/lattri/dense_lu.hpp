#pragma once

#include "lattri/complex.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lattri {

class SingularMatrix : public std::runtime_error {
 public:
  explicit SingularMatrix(std::size_t col)
      : std::runtime_error("matrix is numerically singular at column " + std::to_string(col)) {}
};

/// Dense complex LU factorization with partial pivoting, row-major storage.
template <class Real>
class DenseLU {
 public:
  explicit DenseLU(std::size_t n) : n_(n), a_(n * n), perm_(n) {}

  Cplx<Real>& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Cplx<Real>& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::size_t size() const { return n_; }

  void factor() {
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
    for (std::size_t j = 0; j < n_; ++j) {
      std::size_t piv = j;
      Real best = at(j, j).norm();
      for (std::size_t i = j + 1; i < n_; ++i) {
        Real v = at(i, j).norm();
        if (v > best) {
          best = std::move(v);
          piv = i;
        }
      }
      if (best == 0) throw SingularMatrix(j);
      if (piv != j) {
        for (std::size_t k = 0; k < n_; ++k) std::swap(at(j, k), at(piv, k));
        std::swap(perm_[j], perm_[piv]);
      }
      const Cplx<Real> inv = Cplx<Real>(1) / at(j, j);
      for (std::size_t i = j + 1; i < n_; ++i) {
        Cplx<Real>& l = at(i, j);
        l *= inv;
        const Real& lr = l.re;
        const Real& li = l.im;
        Cplx<Real>* row = &a_[i * n_];
        const Cplx<Real>* prow = &a_[j * n_];
        for (std::size_t k = j + 1; k < n_; ++k) {
          row[k].re -= lr * prow[k].re - li * prow[k].im;
          row[k].im -= lr * prow[k].im + li * prow[k].re;
        }
      }
    }
    factored_ = true;
  }

  std::vector<Cplx<Real>> solve(const std::vector<Cplx<Real>>& b) const {
    if (!factored_) throw std::logic_error("factor() first");
    if (b.size() != n_) throw std::invalid_argument("right-hand side has the wrong size");
    std::vector<Cplx<Real>> y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      Cplx<Real> s = b[perm_[i]];
      for (std::size_t k = 0; k < i; ++k) s -= at(i, k) * y[k];
      y[i] = std::move(s);
    }
    for (std::size_t i = n_; i-- > 0;) {
      Cplx<Real> s = y[i];
      for (std::size_t k = i + 1; k < n_; ++k) s -= at(i, k) * y[k];
      y[i] = s / at(i, i);
    }
    return y;
  }

 private:
  std::size_t n_;
  std::vector<Cplx<Real>> a_;
  std::vector<std::size_t> perm_;
  bool factored_ = false;
};

}  // namespace lattri
