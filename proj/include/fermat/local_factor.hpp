#pragma once
// Local factors L_p(C_k, T) at good primes p != ell, from Jacobi sums, and an
// independent reconstruction from point counts.

#include "fermat/cm_structure.hpp"
#include "fermat/cyclotomic.hpp"
#include "fermat/errors.hpp"
#include "fermat/finite_field.hpp"
#include "fermat/jacobi.hpp"
#include "fermat/residue.hpp"

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <vector>

namespace fermat {

struct LocalFactor {
  std::uint32_t ell;
  std::uint32_t k;
  std::uint64_t p;
  unsigned f;
  std::vector<mpz_class> coeffs;  // coeffs[i] is the coefficient of T^i, i = 0..ell-1

  /// a_i / p^{i/2}: the coefficients of L_p(C_k, T / sqrt p).
  std::vector<double> normalized() const {
    std::vector<double> out(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      out[i] = coeffs[i].get_d() / std::pow(static_cast<double>(p), 0.5 * static_cast<double>(i));
    return out;
  }

  friend bool operator==(const LocalFactor& a, const LocalFactor& b) {
    return a.ell == b.ell && a.p == b.p && a.coeffs == b.coeffs;
  }
};

inline mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), n, k);
  return c;
}

inline mpz_class ipow(std::uint64_t base, unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

/// Representatives of G / W, the smallest element of each coset.
inline std::vector<std::uint32_t> quotient_representatives(const ResidueSet& W) {
  const PrimeEll ell = W.ell();
  const auto w_elems = W.elements();
  ResidueSet seen(ell);
  std::vector<std::uint32_t> reps;
  for (std::uint32_t a = 1; a < ell.value(); ++a) {
    if (seen.contains(a)) continue;
    reps.push_back(a);
    for (auto w : w_elems) seen.insert(mul(a, w, ell));
  }
  return reps;
}

inline LocalFactor local_factor(PrimeEll ell, std::int64_t k, std::uint64_t p) {
  check_k(ell, k);
  if (!is_prime(p)) throw std::invalid_argument("p must be prime, got " + std::to_string(p));
  if (p == ell.value()) throw std::invalid_argument("p = ell is a prime of bad reduction");
  const std::uint32_t l = ell.value();
  const auto f = static_cast<unsigned>(multiplicative_order(p % l, l));
  LocalFactor out{l, static_cast<std::uint32_t>(k), p, f, std::vector<mpz_class>(l, 0)};

  if (f % 2 == 0) {
    // (1 + p^{f/2} T^f)^{(ell-1)/f}
    const unsigned m = (l - 1) / f;
    const mpz_class s = ipow(p, f / 2);
    mpz_class sj = 1;
    for (unsigned j = 0; j <= m; ++j) {
      out.coeffs[j * f] = binomial(m, j) * sj;
      sj *= s;
    }
    return out;
  }

  const CmData cm = build_Mk(ell, k);
  const WkfData W = build_Wkf(cm, f);
  const auto reps = quotient_representatives(W.W_kf);
  const unsigned mult = W.n_kf / f;
  const FqContext ctx(p, ell);
  std::vector<JacobiSum> sums;
  if (reps.size() > 1 && l <= 2048) {
    const PairCounts counts(ctx);
    for (auto a : reps) sums.push_back(counts.jacobi(mul(cm.k, a, ell), a));
  } else {
    for (auto a : reps) sums.push_back(jacobi_sum(ctx, mul(cm.k, a, ell), a));
  }

  // product in U = T^f
  std::vector<CyclotomicInt> poly{CyclotomicInt::integer(ell, 1)};
  for (const auto& js : sums) {
    const CyclotomicInt minus_j = -js.value;
    for (unsigned r = 0; r < mult; ++r) {
      std::vector<CyclotomicInt> next(poly.size() + 1, CyclotomicInt(ell));
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i] = next[i] + poly[i];
        next[i + 1] = next[i + 1] + poly[i] * minus_j;
      }
      poly = std::move(next);
    }
  }
  if ((poly.size() - 1) * f != l - 1) throw VerificationError("local factor has the wrong degree");
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (!poly[i].is_integer())
      throw VerificationError("local factor coefficient of T^" + std::to_string(i * f) + " is not rational");
    out.coeffs[i * f] = poly[i].rational_part();
  }
  return out;
}

/// |C_k(F_q)|, q = p^n, for the smooth model: three points over u in {0, -1, infinity}
/// plus the points over each other u.
inline mpz_class count_points(PrimeEll ell, std::int64_t k, std::uint64_t p, unsigned n) {
  check_k(ell, k);
  if (p == ell.value()) throw std::invalid_argument("p = ell is a prime of bad reduction");
  const FiniteField field(p, n);
  const std::uint64_t q = field.size();
  const std::uint32_t l = ell.value();
  if ((q - 1) % l != 0) return mpz_class(static_cast<unsigned long>(q + 1));
  const std::uint64_t e = (q - 1) / l;
  const std::uint64_t twist = l - static_cast<std::uint64_t>(k) - 1;
  std::uint64_t hits = 0;
  for (std::uint64_t u = 1; u < q; ++u) {
    const auto u1 = field.add_one(static_cast<FiniteField::Elem>(u));
    if (u1 == 0) continue;
    const auto w = field.mul(static_cast<FiniteField::Elem>(u), field.pow(u1, twist));
    if (field.pow(w, e) == 1) ++hits;
  }
  return mpz_class(static_cast<unsigned long>(3 + l * hits));
}

/// Rebuild L_p(C_k, T) from |C_k(F_{p^n})|, n = 1..g, by Newton's identities and the
/// functional equation.
inline LocalFactor lpoly_from_counts(PrimeEll ell, std::uint32_t k, std::uint64_t p, const std::vector<mpz_class>& counts) {
  const std::uint32_t g = ell.half();
  if (counts.size() < g) throw std::invalid_argument("need point counts over F_{p^n} for n = 1..g");
  std::vector<mpz_class> s(g + 1);
  for (std::uint32_t n = 1; n <= g; ++n) s[n] = ipow(p, n) + 1 - counts[n - 1];
  std::vector<mpz_class> c(2 * g + 1, 0);
  c[0] = 1;
  for (std::uint32_t i = 1; i <= g; ++i) {
    mpz_class acc = 0;
    for (std::uint32_t j = 1; j <= i; ++j) acc -= s[j] * c[i - j];
    if (!mpz_divisible_ui_p(acc.get_mpz_t(), i))
      throw VerificationError("Newton identity produced a non-integer coefficient");
    mpz_divexact_ui(c[i].get_mpz_t(), acc.get_mpz_t(), i);
  }
  for (std::uint32_t i = 0; i < g; ++i) c[2 * g - i] = ipow(p, g - i) * c[i];
  const auto f = static_cast<unsigned>(multiplicative_order(p % ell.value(), ell.value()));
  return LocalFactor{ell.value(), k, p, f, std::move(c)};
}

inline LocalFactor local_factor_from_point_counts(PrimeEll ell, std::int64_t k, std::uint64_t p) {
  check_k(ell, k);
  std::vector<mpz_class> counts;
  for (unsigned n = 1; n <= ell.half(); ++n) counts.push_back(count_points(ell, k, p, n));
  return lpoly_from_counts(ell, static_cast<std::uint32_t>(k), p, counts);
}

}  // namespace fermat
