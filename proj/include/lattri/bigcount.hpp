#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lattri {

using BigCount = boost::multiprecision::cpp_int;

inline std::string to_decimal(const BigCount& v) { return v.str(); }

/// log2 of a positive integer to full double precision.
inline double log2_big(const BigCount& v) {
  if (v <= 0) throw std::domain_error("log2 of a non-positive count");
  const auto top = static_cast<long>(boost::multiprecision::msb(v));
  if (top < 63) return std::log2(static_cast<double>(static_cast<std::uint64_t>(v)));
  const long shift = top - 62;
  const auto head = static_cast<std::uint64_t>(v >> shift);
  return std::log2(static_cast<double>(head)) + static_cast<double>(shift);
}

namespace modular {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

/// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// The `count` largest primes below 2^62.
inline std::vector<std::uint64_t> default_primes(std::size_t count) {
  std::vector<std::uint64_t> out;
  std::uint64_t c = (std::uint64_t{1} << 62) - 1;
  while (out.size() < count) {
    if (is_prime(c)) out.push_back(c);
    c -= 2;
  }
  return out;
}

inline std::uint64_t inverse(std::uint64_t a, std::uint64_t m) {
  // extended Euclid on signed 128-bit values
  __int128 t = 0, new_t = 1, r = m, new_r = a % m;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw std::invalid_argument("moduli are not coprime");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

}  // namespace modular

/// An exact count represented by its residues modulo distinct primes.
struct ResidueVector {
  std::vector<std::uint64_t> primes;
  std::vector<std::uint64_t> residues;

  BigCount modulus() const {
    BigCount m = 1;
    for (auto p : primes) m *= p;
    return m;
  }
};

/// The unique value in [0, prod primes) congruent to every residue.
inline BigCount crt_reconstruct(const ResidueVector& rv) {
  if (rv.primes.empty()) throw std::invalid_argument("empty residue vector");
  if (rv.primes.size() != rv.residues.size()) throw std::invalid_argument("primes and residues differ in length");
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < rv.primes.size(); ++i) {
    const auto p = rv.primes[i];
    if (p < 2) throw std::invalid_argument("modulus below 2");
    if (!seen.insert(p).second) throw std::invalid_argument("duplicate prime " + std::to_string(p));
    if (rv.residues[i] >= p) throw std::invalid_argument("residue out of range");
  }
  // Garner: x = v0 + v1 p0 + v2 p0 p1 + ...
  const auto k = rv.primes.size();
  std::vector<std::uint64_t> v(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto p = rv.primes[i];
    std::uint64_t acc = 0;
    std::uint64_t prod = 1 % p;
    for (std::size_t j = 0; j < i; ++j) {
      acc = (acc + modular::mulmod(v[j] % p, prod, p)) % p;
      prod = modular::mulmod(prod, rv.primes[j] % p, p);
    }
    const auto diff = (rv.residues[i] % p + p - acc) % p;
    v[i] = modular::mulmod(diff, modular::inverse(prod, p), p);
  }
  BigCount x = 0;
  BigCount scale = 1;
  for (std::size_t i = 0; i < k; ++i) {
    x += scale * v[i];
    scale *= rv.primes[i];
  }
  return x;
}

}  // namespace lattri
