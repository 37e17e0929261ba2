#pragma once
// Generalized Demjanenko matrices D_{k,f}, the degeneracy classification of pairs
// (ell, k) and of residue degrees, character-sum evaluation of det(D_{k,f}), and
// the resultant used to bound N_k.

#include "fermat/cm_structure.hpp"
#include "fermat/errors.hpp"
#include "fermat/exact_linalg.hpp"
#include "fermat/residue.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

namespace fermat {

/// The integer matrix 2 D_{k,f}. Row index c and column index a both run over
/// `reps`; entry (c, a) is 2 E_{k,f}(-c^{-1} a) - f.
struct DemjanenkoMatrix {
  PrimeEll ell;
  std::uint32_t k;
  std::uint32_t f;
  std::uint32_t n_kf;
  std::vector<std::uint32_t> reps;
  std::vector<std::vector<int>> entries;

  std::size_t size() const { return reps.size(); }
};

/// One representative per {+-1} W-coset: the smallest coset element lying in M_k.
inline std::vector<std::uint32_t> coset_representatives(const CmData& cm, const ResidueSet& W) {
  const PrimeEll ell = cm.ell;
  const auto w_elems = W.elements();
  ResidueSet seen(ell);
  std::vector<std::uint32_t> reps;
  for (std::uint32_t a = 1; a < ell.value(); ++a) {
    if (seen.contains(a)) continue;
    std::uint32_t best = ell.value();
    for (auto w : w_elems) {
      for (std::uint32_t x : {mul(a, w, ell), neg(mul(a, w, ell), ell)}) {
        seen.insert(x);
        if (cm.M_k.contains(x)) best = std::min(best, x);
      }
    }
    reps.push_back(best);
  }
  std::sort(reps.begin(), reps.end());
  return reps;
}

inline DemjanenkoMatrix build_matrix(const CmData& cm, std::uint32_t f) {
  if (f % 2 == 0)
    throw std::invalid_argument("D_{k,f} vanishes identically for even f = " + std::to_string(f));
  const auto W = build_Wkf(cm, f);
  const auto E = ekf_table(cm, f);
  const PrimeEll ell = cm.ell;
  DemjanenkoMatrix m{ell, cm.k, f, W.n_kf, coset_representatives(cm, W.W_kf), {}};
  const std::size_t r = m.reps.size();
  if (r != *W.r_kf) throw VerificationError("number of coset representatives differs from r_{k,f}");
  m.entries.assign(r, std::vector<int>(r));
  for (std::size_t i = 0; i < r; ++i) {
    const std::uint32_t minus_c_inv = neg(inverse(m.reps[i], ell), ell);
    for (std::size_t j = 0; j < r; ++j)
      m.entries[i][j] = 2 * static_cast<int>(E[mul(minus_c_inv, m.reps[j], ell)]) - static_cast<int>(f);
  }
  return m;
}

/// Exact rank and det of 2D; det(D) = det2D / 2^size.
inline RankDet exact_rank_det(const DemjanenkoMatrix& m) {
  IntMatrix a(m.size(), std::vector<mpz_class>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) a[i][j] = m.entries[i][j];
  return bareiss_rank_det(std::move(a));
}

inline mpq_class exact_det(const DemjanenkoMatrix& m) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, m.size());
  mpq_class d(exact_rank_det(m).det, den);
  d.canonicalize();
  return d;
}

struct DegeneracyReport {
  std::uint32_t ell;
  std::uint32_t k;
  bool is_cubic_root;
  std::optional<std::uint32_t> N_k;  // absent for primitive cube roots
  bool degenerate;
  std::uint32_t rank_Dk;
  std::vector<std::uint32_t> F0;
  std::vector<std::uint32_t> F1;
  std::vector<std::uint32_t> nondegenerate_residue_degrees;
  bool rank_verified = false;  // rank_Dk confirmed by exact elimination
};

inline std::vector<std::uint32_t> odd_divisors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (auto d : divisors(n))
    if (d % 2 == 1) out.push_back(d);
  return out;
}

/// Arithmetic degeneracy test: k not a cube root, ord(-k^2-k) and ord(k) odd,
/// v3(ord k) > v3(ord(-k^2-k)).
inline bool is_degenerate_pair(PrimeEll ell, std::uint32_t k) {
  if (is_primitive_cube_root(k, ell)) return false;
  const std::uint32_t a = order(neg(mul(k, k + 1, ell), ell), ell);
  const std::uint32_t b = order(k, ell);
  return a % 2 == 1 && b % 2 == 1 && v3(b) > v3(a);
}

inline DegeneracyReport classify(PrimeEll ell, std::int64_t k_in, bool verify_rank = true) {
  check_k(ell, k_in);
  const auto k = static_cast<std::uint32_t>(k_in);
  DegeneracyReport rep{};
  rep.ell = ell.value();
  rep.k = k;
  rep.is_cubic_root = is_primitive_cube_root(k, ell);
  rep.degenerate = is_degenerate_pair(ell, k);
  const auto odd = odd_divisors(ell.group_order());
  if (!rep.is_cubic_root)
    rep.N_k = std::lcm(order(neg(mul(k, k + 1, ell), ell), ell), order(k, ell));
  const std::uint32_t r_k = ell.group_order() / (2 * (rep.is_cubic_root ? 3 : 1));
  if (rep.degenerate) {
    const std::uint32_t N = *rep.N_k;
    for (auto f : odd) {
      if (f % (N / 3) == 0 && f % N != 0) rep.F0.push_back(f);
      if (v3(f) >= v3(N)) rep.F1.push_back(f);
    }
    std::set<std::uint32_t> u(rep.F0.begin(), rep.F0.end());
    u.insert(rep.F1.begin(), rep.F1.end());
    rep.nondegenerate_residue_degrees.assign(u.begin(), u.end());
    const std::uint64_t num = static_cast<std::uint64_t>(ell.group_order()) * (N - 2);
    if (num % (2 * N) != 0) throw VerificationError("predicted rank of D_k is not an integer");
    rep.rank_Dk = static_cast<std::uint32_t>(num / (2 * N));
  } else {
    rep.nondegenerate_residue_degrees = odd;
    rep.rank_Dk = r_k;
  }
  if (verify_rank) {
    const auto rd = exact_rank_det(build_matrix(build_Mk(ell, k), 1));
    if (rd.rank != rep.rank_Dk)
      throw VerificationError("exact rank of D_k is " + std::to_string(rd.rank) + ", classification predicts " +
                              std::to_string(rep.rank_Dk));
    rep.rank_verified = true;
  }
  return rep;
}

/// Primes 3 < ell < bound admitting a degenerate k.
inline std::vector<std::uint32_t> degenerate_primes_below(std::uint32_t bound) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t ell = 5; ell < bound; ell += 2) {
    if (!is_prime(ell)) continue;
    const PrimeEll e(ell);
    for (std::uint32_t k = 1; k + 2 <= ell; ++k) {
      if (is_degenerate_pair(e, k)) {
        out.push_back(ell);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Character sums

enum class Precision { Double, LongDouble, Quad };

inline Precision precision_for_bits(unsigned bits) {
  if (bits <= 53) return Precision::Double;
  if (bits <= 64) return Precision::LongDouble;
  return Precision::Quad;
}

/// discrete log table of G: dlog[g^j] = j.
inline std::vector<std::uint32_t> dlog_table(PrimeEll ell) {
  std::vector<std::uint32_t> dl(ell.value(), 0);
  const std::uint32_t g = find_generator(ell);
  std::uint32_t x = 1;
  for (std::uint32_t j = 0; j < ell.group_order(); ++j) {
    dl[x] = j;
    x = mul(x, g, ell);
  }
  return dl;
}

namespace detail {

template <class Real>
struct ComplexOf {
  using type = std::complex<Real>;
};
template <>
struct ComplexOf<boost::multiprecision::cpp_bin_float_quad> {
  using type = boost::multiprecision::cpp_complex_quad;
};

template <class Real>
Real pi_v() {
  return boost::math::constants::pi<Real>();
}

// psi_0^t(g^j) = exp(2 pi i t j / (ell-1)).
template <class Real>
typename ComplexOf<Real>::type char_value(std::uint64_t t, std::uint32_t dlog, std::uint32_t order) {
  using std::cos;
  using std::sin;
  const std::uint64_t e = (t % order) * dlog % order;
  const Real theta = 2 * pi_v<Real>() * Real(e) / Real(order);
  return typename ComplexOf<Real>::type(cos(theta), sin(theta));
}

}  // namespace detail

struct BernoulliCharSum {
  std::uint32_t t;
  std::complex<double> B1;
  std::complex<double> factor;
  std::complex<double> direct;  // sum over a in M_k of psi(a)
};

template <class Real>
typename detail::ComplexOf<Real>::type bernoulli_closed_form(const CmData& cm, std::uint32_t t,
                                                              const std::vector<std::uint32_t>& dl,
                                                              typename detail::ComplexOf<Real>::type* B1_out = nullptr,
                                                              typename detail::ComplexOf<Real>::type* factor_out = nullptr) {
  using C = typename detail::ComplexOf<Real>::type;
  const std::uint32_t ell = cm.ell.value();
  const std::uint32_t order = ell - 1;
  C B1(0);
  for (std::uint32_t a = 1; a < ell; ++a) B1 += detail::char_value<Real>(t, dl[a], order) * Real(a);
  B1 /= Real(ell);
  // 1/psi(x) = psi^{-1}(x)
  const std::uint64_t t_inv = order - t % order;
  const C factor = detail::char_value<Real>(t_inv, dl[cm.k + 1], order) - C(1) -
                   detail::char_value<Real>(t_inv, dl[cm.k], order);
  if (B1_out) *B1_out = B1;
  if (factor_out) *factor_out = factor;
  return B1 * factor;
}

/// Both sides of the closed form sum_{a in M_k} psi(a) = B_{1,psi} (1/psi(k+1) - 1 - 1/psi(k)).
inline BernoulliCharSum bernoulli_charsum(const CmData& cm, std::uint32_t t) {
  const auto dl = dlog_table(cm.ell);
  std::complex<double> B1, factor;
  bernoulli_closed_form<double>(cm, t, dl, &B1, &factor);
  std::complex<double> direct(0);
  for (auto a : cm.M_k.elements()) direct += detail::char_value<double>(t, dl[a], cm.ell.group_order());
  return {t, B1, factor, direct};
}

struct CharSumDet {
  std::complex<double> value;
  std::size_t nonzero_sums;  // equals rank(D_{k,f})
  std::size_t characters;    // odd characters trivial on W_{k,f}
};

namespace detail {

template <class Real>
CharSumDet charsum_det_impl(const DemjanenkoMatrix& m, const mpz_class& exact_det2D) {
  using C = typename ComplexOf<Real>::type;
  using std::abs;
  const CmData cm = build_Mk(m.ell, m.k);
  const auto dl = dlog_table(m.ell);
  const std::uint32_t order = m.ell.group_order();
  const Real tol = sqrt(std::numeric_limits<Real>::epsilon()) * Real(m.ell.value());
  C prod(1);
  std::size_t nonzero = 0, count = 0;
  for (std::uint32_t t = m.n_kf; t < order; t += 2 * m.n_kf) {  // odd multiples of n_kf
    const C s = bernoulli_closed_form<Real>(cm, t, dl);
    ++count;
    if (abs(s) > tol) ++nonzero;
    prod *= s;
  }
  const Real scale = Real(-static_cast<double>(m.f)) / Real(2 * m.n_kf);
  Real factor(1);
  for (std::size_t i = 0; i < count; ++i) factor *= scale;
  prod *= factor;
  if (exact_det2D != 0 && nonzero != count)
    throw PrecisionInsufficient("character sum indistinguishable from zero while exact det(D_{k,f}) != 0");
  return {std::complex<double>(static_cast<double>(prod.real()), static_cast<double>(prod.imag())), nonzero, count};
}

}  // namespace detail

/// det(D_{k,f}) as (-f/(2 n_kf))^{r_kf} times the product over odd characters trivial
/// on W_{k,f} of their sums over M_k, each evaluated through the Bernoulli closed form.
inline CharSumDet charsum_det(const DemjanenkoMatrix& m, unsigned precision_bits = 53) {
  if (m.f % 2 == 0) throw std::invalid_argument("charsum_det needs odd f");
  const mpz_class det2D = exact_rank_det(m).det;
  switch (precision_for_bits(precision_bits)) {
    case Precision::Double:
      return detail::charsum_det_impl<double>(m, det2D);
    case Precision::LongDouble:
      return detail::charsum_det_impl<long double>(m, det2D);
    case Precision::Quad:
      return detail::charsum_det_impl<boost::multiprecision::cpp_bin_float_quad>(m, det2D);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Resultant R_{N0} = Res(x^{2f}+x^f+1, ((x+1)^f x^f + 1)/(x^2+x+1)), f = N0/3.

using ZPoly = std::vector<mpz_class>;  // coefficient of x^i at index i

inline void trim(ZPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

/// Exact division by a monic polynomial; throws when the remainder is nonzero.
inline ZPoly divide_exact_monic(ZPoly num, const ZPoly& den) {
  trim(num);
  const std::size_t dn = den.size() - 1;
  if (num.size() - 1 < dn) throw VerificationError("polynomial division: numerator degree too small");
  ZPoly quot(num.size() - dn, 0);
  for (std::size_t i = num.size(); i-- > dn;) {
    const mpz_class c = num[i];
    quot[i - dn] = c;
    if (c != 0)
      for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  for (std::size_t i = 0; i < dn; ++i)
    if (num[i] != 0) throw VerificationError("polynomial division left a nonzero remainder");
  return quot;
}

inline mpz_class resultant(const ZPoly& p, const ZPoly& q) {
  const std::size_t m = p.size() - 1, n = q.size() - 1, dim = m + n;
  IntMatrix s(dim, std::vector<mpz_class>(dim, 0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i <= m; ++i) s[r][r + i] = p[m - i];
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t i = 0; i <= n; ++i) s[n + r][r + i] = q[n - i];
  return bareiss_rank_det(std::move(s)).det;
}

struct Factorization {
  std::vector<std::pair<mpz_class, unsigned>> factors;
  bool complete = true;  // false if a composite cofactor could not be split
};

inline Factorization factor_integer(mpz_class n, unsigned long trial_bound = 1000000) {
  Factorization out;
  if (n < 0) n = -n;
  if (n == 0) throw std::invalid_argument("cannot factor 0");
  for (unsigned long d = 2; d <= trial_bound && n > 1; ++d) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      unsigned e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), d);
        ++e;
      }
      out.factors.emplace_back(mpz_class(d), e);
    }
  }
  if (n > 1) {
    // cofactor: try perfect powers of a probable prime
    for (unsigned e = 64; e >= 1; --e) {
      mpz_class root;
      if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0 && mpz_probab_prime_p(root.get_mpz_t(), 40)) {
        out.factors.emplace_back(root, e);
        n = 1;
        break;
      }
    }
    if (n > 1) {
      out.factors.emplace_back(n, 1);
      out.complete = false;
    }
  }
  return out;
}

struct ResultantSearch {
  mpz_class resultant;
  Factorization factorization;
  std::vector<mpz_class> candidate_primes;
};

inline ResultantSearch resultant_search(std::uint32_t N0) {
  if (N0 < 9 || N0 % 3 != 0 || N0 % 2 == 0)
    throw std::invalid_argument("N0 must be an odd multiple of 3 with N0 >= 9");
  const std::uint32_t f = N0 / 3;
  ZPoly p(2 * f + 1, 0);
  p[0] = 1;
  p[f] = 1;
  p[2 * f] = 1;
  // (x+1)^f x^f + 1
  ZPoly num(2 * f + 1, 0);
  for (std::uint32_t i = 0; i <= f; ++i) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), f, i);
    num[f + i] = c;
  }
  num[0] += 1;
  const ZPoly q = divide_exact_monic(num, ZPoly{1, 1, 1});
  ResultantSearch out;
  out.resultant = resultant(p, q);
  if (out.resultant == 0) throw VerificationError("resultant R_N0 vanished");
  out.factorization = factor_integer(out.resultant);
  for (const auto& [prime, e] : out.factorization.factors) out.candidate_primes.push_back(prime);
  return out;
}

}  // namespace fermat
