#pragma once
// Exact elements of Z[zeta_ell] in the power basis 1, zeta, ..., zeta^{ell-2}.

#include "fermat/residue.hpp"

#include <gmpxx.h>

#include <ostream>
#include <vector>

namespace fermat {

class CyclotomicInt {
 public:
  explicit CyclotomicInt(PrimeEll ell) : ell_(ell), c_(ell.value() - 1, 0) {}

  static CyclotomicInt integer(PrimeEll ell, const mpz_class& n) {
    CyclotomicInt z(ell);
    z.c_[0] = n;
    return z;
  }

  /// sum_i v[i] zeta^i with v indexed mod ell (length ell).
  static CyclotomicInt from_exponent_coeffs(PrimeEll ell, std::vector<mpz_class> v) {
    CyclotomicInt z(ell);
    z.assign_reduced(std::move(v));
    return z;
  }

  PrimeEll ell() const { return ell_; }
  const std::vector<mpz_class>& coeffs() const { return c_; }

  bool is_integer() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }
  const mpz_class& rational_part() const { return c_[0]; }

  CyclotomicInt operator+(const CyclotomicInt& o) const {
    CyclotomicInt z(*this);
    for (std::size_t i = 0; i < c_.size(); ++i) z.c_[i] += o.c_[i];
    return z;
  }
  CyclotomicInt operator-(const CyclotomicInt& o) const {
    CyclotomicInt z(*this);
    for (std::size_t i = 0; i < c_.size(); ++i) z.c_[i] -= o.c_[i];
    return z;
  }
  CyclotomicInt operator-() const {
    CyclotomicInt z(*this);
    for (auto& x : z.c_) x = -x;
    return z;
  }

  CyclotomicInt operator*(const CyclotomicInt& o) const {
    const std::uint32_t l = ell_.value();
    std::vector<mpz_class> v(l, 0);
    for (std::uint32_t i = 0; i + 1 < l; ++i) {
      if (c_[i] == 0) continue;
      for (std::uint32_t j = 0; j + 1 < l; ++j) {
        if (o.c_[j] == 0) continue;
        const std::uint32_t e = (i + j) % l;
        mpz_addmul(v[e].get_mpz_t(), c_[i].get_mpz_t(), o.c_[j].get_mpz_t());
      }
    }
    CyclotomicInt z(ell_);
    z.assign_reduced(std::move(v));
    return z;
  }

  CyclotomicInt operator*(const mpz_class& s) const {
    CyclotomicInt z(*this);
    for (auto& x : z.c_) x *= s;
    return z;
  }

  /// Galois action zeta -> zeta^t, t prime to ell.
  CyclotomicInt sigma(std::uint32_t t) const {
    const std::uint32_t l = ell_.value();
    if (t % l == 0) throw std::invalid_argument("sigma_t needs t prime to ell");
    std::vector<mpz_class> v(l, 0);
    for (std::uint32_t i = 0; i + 1 < l; ++i) v[static_cast<std::uint64_t>(i) * t % l] = c_[i];
    CyclotomicInt z(ell_);
    z.assign_reduced(std::move(v));
    return z;
  }

  CyclotomicInt conj() const { return sigma(ell_.value() - 1); }

  friend bool operator==(const CyclotomicInt& a, const CyclotomicInt& b) {
    return a.ell_ == b.ell_ && a.c_ == b.c_;
  }

  friend std::ostream& operator<<(std::ostream& os, const CyclotomicInt& z) {
    os << "[";
    for (std::size_t i = 0; i < z.c_.size(); ++i) os << (i ? ", " : "") << z.c_[i];
    return os << "]";
  }

 private:
  // v has length ell (exponents mod ell); zeta^{ell-1} = -(1 + ... + zeta^{ell-2}).
  void assign_reduced(std::vector<mpz_class> v) {
    const std::uint32_t l = ell_.value();
    if (v.size() != l) throw std::invalid_argument("expected ell coefficients");
    const mpz_class top = v[l - 1];
    for (std::uint32_t i = 0; i + 1 < l; ++i) c_[i] = v[i] - top;
  }

  PrimeEll ell_;
  std::vector<mpz_class> c_;
};

}  // namespace fermat
