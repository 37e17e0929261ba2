#pragma once
// Order-ell characters of F_q, q = p^f with f = ord(p mod ell), and the Jacobi sums
// J_{(ka,a)} = -sum_v chi(v)^{ka} chi(v+1)^a as exact elements of Z[zeta_ell].

#include "fermat/cyclotomic.hpp"
#include "fermat/errors.hpp"
#include "fermat/finite_field.hpp"
#include "fermat/residue.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace fermat {

/// The residue field of a prime above p in Q(zeta_ell). The order-ell element
/// t = generator^{(q-1)/ell} plays the role of zeta_ell; every Jacobi sum below is
/// canonical only relative to this choice.
class FqContext {
 public:
  static constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 24;
  static constexpr std::uint16_t kZero = 0xFFFF;

  FqContext(std::uint64_t p, PrimeEll ell)
      : ell_(ell), p_(check_p(p, ell)), f_(static_cast<unsigned>(multiplicative_order(p % ell.value(), ell.value()))),
        field_(p, f_) {
    const std::uint64_t q = field_.size();
    exponent_ = (q - 1) / ell.value();
    t_ = field_.pow(field_.generator(), exponent_);
    std::uint32_t x = 1;
    for (std::uint32_t j = 0; j < ell.value(); ++j) {
      t_powers_.emplace(x, j);
      x = field_.mul(x, t_);
    }
    if (q <= kTableLimit) build_table();
  }

  PrimeEll ell() const { return ell_; }
  std::uint64_t p() const { return p_; }
  unsigned f() const { return f_; }
  std::uint64_t q() const { return field_.size(); }
  const FiniteField& field() const { return field_; }
  FiniteField::Elem t() const { return t_; }
  bool has_table() const { return !table_.empty(); }

  /// j with x^{(q-1)/ell} = t^j, or nullopt for x = 0.
  std::optional<std::uint32_t> character(FiniteField::Elem x) const {
    if (x == 0) return std::nullopt;
    if (has_table()) return table_[x];
    const auto y = field_.pow(x, exponent_);
    const auto it = t_powers_.find(y);
    if (it == t_powers_.end()) throw VerificationError("x^{(q-1)/ell} is not a power of t");
    return it->second;
  }

  /// Raw table access (kZero marks 0); only valid when has_table().
  const std::vector<std::uint16_t>& table() const { return table_; }

 private:
  static std::uint64_t check_p(std::uint64_t p, PrimeEll ell) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime, got " + std::to_string(p));
    if (p == ell.value()) throw std::invalid_argument("p must differ from ell");
    return p;
  }

  // Walk the generator: gen^j has character j mod ell.
  void build_table() {
    const std::uint64_t q = field_.size();
    table_.assign(q, kZero);
    const auto gen = field_.generator();
    const std::uint32_t l = ell_.value();
    std::uint32_t x = 1;
    std::uint32_t j = 0;
    for (std::uint64_t i = 0; i + 1 < q; ++i) {
      table_[x] = static_cast<std::uint16_t>(j);
      x = field_.mul(x, gen);
      if (++j == l) j = 0;
    }
  }

  PrimeEll ell_;
  std::uint64_t p_;
  unsigned f_;
  FiniteField field_;
  std::uint64_t exponent_ = 0;
  FiniteField::Elem t_ = 1;
  std::unordered_map<FiniteField::Elem, std::uint32_t> t_powers_;
  std::vector<std::uint16_t> table_;
};

inline FqContext build_fq(std::uint64_t p, PrimeEll ell) { return FqContext(p, ell); }

struct JacobiSum {
  CyclotomicInt value;
  std::uint32_t ka;
  std::uint32_t a;
  std::uint64_t q;
};

/// n[i*ell + j] = #{v in F_q, v != 0, -1 : chi(v) = i, chi(v+1) = j}.
class PairCounts {
 public:
  explicit PairCounts(const FqContext& ctx) : ell_(ctx.ell()), q_(ctx.q()) {
    const std::uint32_t l = ell_.value();
    counts_.assign(static_cast<std::size_t>(l) * l, 0);
    const auto& field = ctx.field();
    if (ctx.has_table()) {
      const auto& tab = ctx.table();
      for (std::uint64_t v = 1; v < q_; ++v) {
        const auto w = field.add_one(static_cast<FiniteField::Elem>(v));
        if (w == 0) continue;
        ++counts_[static_cast<std::size_t>(tab[v]) * l + tab[w]];
      }
    } else {
      for (std::uint64_t v = 1; v < q_; ++v) {
        const auto w = field.add_one(static_cast<FiniteField::Elem>(v));
        if (w == 0) continue;
        ++counts_[static_cast<std::size_t>(*ctx.character(static_cast<FiniteField::Elem>(v))) * l +
                  *ctx.character(w)];
      }
    }
  }

  std::uint64_t at(std::uint32_t i, std::uint32_t j) const { return counts_[static_cast<std::size_t>(i) * ell_.value() + j]; }

  JacobiSum jacobi(std::uint32_t ka, std::uint32_t a) const {
    const std::uint32_t l = ell_.value();
    ka %= l;
    a %= l;
    std::vector<std::uint64_t> acc(l, 0);
    for (std::uint32_t i = 0; i < l; ++i) {
      const std::uint64_t base = static_cast<std::uint64_t>(ka) * i;
      for (std::uint32_t j = 0; j < l; ++j) acc[(base + static_cast<std::uint64_t>(a) * j) % l] += at(i, j);
    }
    std::vector<mpz_class> v(l);
    for (std::uint32_t m = 0; m < l; ++m) {
      v[m] = mpz_class(static_cast<unsigned long>(acc[m]));
      v[m] = -v[m];
    }
    return {CyclotomicInt::from_exponent_coeffs(ell_, std::move(v)), ka, a, q_};
  }

 private:
  PrimeEll ell_;
  std::uint64_t q_;
  std::vector<std::uint64_t> counts_;
};

/// Direct O(q) evaluation of one Jacobi sum.
inline JacobiSum jacobi_sum_direct(const FqContext& ctx, std::uint32_t ka, std::uint32_t a) {
  const std::uint32_t l = ctx.ell().value();
  ka %= l;
  a %= l;
  std::vector<std::uint64_t> acc(l, 0);
  const auto& field = ctx.field();
  for (std::uint64_t v = 1; v < ctx.q(); ++v) {
    const auto w = field.add_one(static_cast<FiniteField::Elem>(v));
    if (w == 0) continue;
    const std::uint64_t i = *ctx.character(static_cast<FiniteField::Elem>(v));
    const std::uint64_t j = *ctx.character(w);
    ++acc[(ka * i + a * j) % l];
  }
  std::vector<mpz_class> v(l);
  for (std::uint32_t m = 0; m < l; ++m) v[m] = -mpz_class(static_cast<unsigned long>(acc[m]));
  return {CyclotomicInt::from_exponent_coeffs(ctx.ell(), std::move(v)), ka, a, ctx.q()};
}

/// J_{(ka,a)} at the prime fixed by ctx. For even residue degree the value is the
/// rational integer -p^{f/2}; debug builds confirm this against the direct sum.
inline JacobiSum jacobi_sum(const FqContext& ctx, std::uint32_t ka, std::uint32_t a) {
  const std::uint32_t l = ctx.ell().value();
  if (ka % l == 0 || a % l == 0 || (ka + a) % l == 0)
    throw std::invalid_argument("Jacobi sum needs ka, a, ka + a nonzero mod ell");
  if (ctx.f() % 2 == 0) {
    mpz_class pf;
    mpz_ui_pow_ui(pf.get_mpz_t(), ctx.p(), ctx.f() / 2);
    JacobiSum j{CyclotomicInt::integer(ctx.ell(), -pf), ka % l, a % l, ctx.q()};
#ifndef NDEBUG
    if (!(jacobi_sum_direct(ctx, ka, a).value == j.value))
      throw VerificationError("even residue degree Jacobi sum differs from -p^{f/2}");
#endif
    return j;
  }
  return jacobi_sum_direct(ctx, ka, a);
}

}  // namespace fermat
