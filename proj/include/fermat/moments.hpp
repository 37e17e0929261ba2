#pragma once
// Exact moments M_n[mu_i] of the limiting distribution of the normalized
// coefficients a_i(p), assembled from one measure per residue degree f | ell-1.

#include "fermat/cm_structure.hpp"
#include "fermat/demjanenko.hpp"
#include "fermat/errors.hpp"
#include "fermat/local_factor.hpp"
#include "fermat/residue.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace fermat {

/// E[s^m] for s = u + conj(u), u uniform on U(1): C(m, m/2) for even m, else 0.
inline mpz_class trace_moment(unsigned m) {
  if (m % 2) return 0;
  return binomial(m, m / 2);
}

/// Coefficients of (1 + T^f)^{(ell-1)/f}, checked against the closed index formula.
inline std::vector<mpz_class> even_degree_coefficients(std::uint32_t ell, std::uint32_t f) {
  if (f % 2 != 0 || (ell - 1) % f != 0) throw std::invalid_argument("f must be an even divisor of ell-1");
  const std::uint32_t m = (ell - 1) / f;
  std::vector<mpz_class> c{1};
  for (std::uint32_t r = 0; r < m; ++r) {
    std::vector<mpz_class> next(c.size() + f, 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + f] += c[i];
    }
    c = std::move(next);
  }
  for (std::uint32_t i = 0; i < ell; ++i) {
    const mpz_class formula = i % f == 0 ? binomial(m, (ell - 1 - i) / f) : mpz_class(0);
    if (c[i] != formula) throw VerificationError("binomial expansion disagrees with the index formula");
  }
  return c;
}

/// Sparse polynomial in s_1..s_r; the key packs exponents in mixed radix `base`.
class TracePolynomial {
 public:
  TracePolynomial(std::uint32_t vars, std::uint64_t base) : vars_(vars), base_(base) {
    unsigned __int128 cap = 1;
    for (std::uint32_t j = 0; j < vars; ++j) {
      cap *= base;
      if (cap > (static_cast<unsigned __int128>(1) << 63))
        throw std::length_error("exponent index overflow: too many variables for this moment order");
    }
  }

  static TracePolynomial constant(std::uint32_t vars, std::uint64_t base, const mpz_class& c) {
    TracePolynomial p(vars, base);
    if (c != 0) p.terms_[0] = c;
    return p;
  }

  std::uint32_t vars() const { return vars_; }
  std::size_t term_count() const { return terms_.size(); }
  const std::unordered_map<std::uint64_t, mpz_class>& terms() const { return terms_; }

  std::vector<unsigned> exponents(std::uint64_t key) const {
    std::vector<unsigned> e(vars_);
    for (std::uint32_t j = 0; j < vars_; ++j) {
      e[j] = static_cast<unsigned>(key % base_);
      key /= base_;
    }
    return e;
  }

  void add_term(std::uint64_t key, const mpz_class& c) {
    auto& slot = terms_[key];
    slot += c;
    if (slot == 0) terms_.erase(key);
  }

  /// Product; caller guarantees per-variable degrees stay below base.
  TracePolynomial operator*(const TracePolynomial& o) const {
    TracePolynomial r(vars_, base_);
    r.terms_.reserve(terms_.size() * 4 + o.terms_.size());
    for (const auto& [ka, ca] : terms_)
      for (const auto& [kb, cb] : o.terms_) {
        auto& slot = r.terms_[ka + kb];
        mpz_addmul(slot.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
      }
    for (auto it = r.terms_.begin(); it != r.terms_.end();)
      it = it->second == 0 ? r.terms_.erase(it) : std::next(it);
    return r;
  }

  /// E[p(s)] under independent s_j with the U(1) trace law.
  mpz_class expectation(const std::vector<mpz_class>& moment_table) const {
    mpz_class total = 0;
    for (const auto& [key, c] : terms_) {
      mpz_class prod = c;
      std::uint64_t k = key;
      for (std::uint32_t j = 0; j < vars_ && prod != 0; ++j) {
        prod *= moment_table[k % base_];
        k /= base_;
      }
      total += prod;
    }
    return total;
  }

 private:
  std::uint32_t vars_;
  std::uint64_t base_;
  std::unordered_map<std::uint64_t, mpz_class> terms_;
};

struct OddDegreeData {
  std::uint32_t f;
  std::uint32_t n_kf;
  std::uint32_t r_kf;
  std::uint32_t e;  // n_kf / f
};

inline OddDegreeData odd_degree_data(const CmData& cm, std::uint32_t f) {
  const auto W = build_Wkf(cm, f);
  return {f, W.n_kf, *W.r_kf, W.n_kf / f};
}

/// a_i = [T^i] prod_{j=1}^{r} (1 + s_j T^f + T^{2f})^e as a polynomial in s.
inline TracePolynomial trace_coefficient(const OddDegreeData& d, std::uint32_t i, std::uint64_t base) {
  TracePolynomial zero(d.r_kf, base);
  if (i % d.f != 0) return zero;
  const std::uint32_t target = i / d.f;
  const std::uint32_t e = d.e;
  // factor[deg] = polynomial in one variable: coefficient list by s-exponent
  std::vector<std::vector<mpz_class>> factor(2 * e + 1, std::vector<mpz_class>(e + 1, 0));
  for (std::uint32_t b = 0; b <= e; ++b)
    for (std::uint32_t c = 0; b + c <= e; ++c) {
      const std::uint32_t a = e - b - c;
      factor[b + 2 * c][b] += binomial(e, a) * binomial(e - a, b);
    }
  // dynamic program over variables: state = (U-degree so far) -> polynomial
  std::vector<TracePolynomial> state(target + 1, zero);
  state[0] = TracePolynomial::constant(d.r_kf, base, 1);
  std::uint64_t stride = 1;
  for (std::uint32_t j = 0; j < d.r_kf; ++j) {
    std::vector<TracePolynomial> next(target + 1, zero);
    for (std::uint32_t u = 0; u <= target; ++u) {
      if (state[u].term_count() == 0) continue;
      for (std::uint32_t deg = 0; deg <= 2 * e && u + deg <= target; ++deg)
        for (std::uint32_t b = 0; b <= e; ++b) {
          if (factor[deg][b] == 0) continue;
          for (const auto& [key, c] : state[u].terms()) next[u + deg].add_term(key + b * stride, c * factor[deg][b]);
        }
    }
    state = std::move(next);
    stride *= base;
  }
  return state[target];
}

struct DegreeMoments {
  std::uint32_t f;
  std::vector<mpq_class> moments;  // moments[n-1] = M_n[mu_{i,f}]
};

inline bool is_nondegenerate_degree(const DegeneracyReport& rep, std::uint32_t f) {
  const auto& v = rep.nondegenerate_residue_degrees;
  return std::find(v.begin(), v.end(), f) != v.end();
}

/// M_n[mu_{i,f}] for n = 1..n_max.
inline DegreeMoments per_degree_moments(const CmData& cm, const DegeneracyReport& rep, std::uint32_t i,
                                        std::uint32_t n_max, std::uint32_t f) {
  const std::uint32_t ell = cm.ell.value();
  if (f == 0 || (ell - 1) % f != 0) throw std::invalid_argument("f must divide ell-1");
  if (i < 1 || i > ell - 1) throw std::invalid_argument("i must lie in [1, ell-1]");
  DegreeMoments out{f, {}};
  if (f % 2 == 0) {
    const mpz_class a = even_degree_coefficients(ell, f)[i];
    mpz_class pw = 1;
    for (std::uint32_t n = 1; n <= n_max; ++n) {
      pw *= a;
      out.moments.emplace_back(pw);
    }
    return out;
  }
  if (!is_nondegenerate_degree(rep, f)) throw DegenerateResidueDegree(ell, cm.k, {f});
  const auto d = odd_degree_data(cm, f);
  const std::uint64_t base = static_cast<std::uint64_t>(n_max) * d.e + 1;
  std::vector<mpz_class> mt(base);
  for (std::uint64_t m = 0; m < base; ++m) mt[m] = trace_moment(static_cast<unsigned>(m));
  const auto a = trace_coefficient(d, i, base);
  TracePolynomial pw = a;
  for (std::uint32_t n = 1; n <= n_max; ++n) {
    if (n > 1) pw = pw * a;
    out.moments.emplace_back(pw.expectation(mt));
  }
  return out;
}

inline mpq_class per_degree_moment(PrimeEll ell, std::int64_t k, std::uint32_t i, std::uint32_t n, std::uint32_t f) {
  const CmData cm = build_Mk(ell, k);
  const auto rep = classify(ell, k, false);
  return per_degree_moments(cm, rep, i, n, f).moments.at(n - 1);
}

struct MomentResult {
  std::uint32_t i;
  std::vector<std::optional<mpq_class>> totals;  // totals[n-1]; empty if some f is blocked
  std::vector<DegreeMoments> per_degree;         // computable degrees only
  std::vector<std::uint32_t> blocked_degrees;    // degenerate odd f
};

/// M_n[mu_i] = sum_{f | ell-1} phi(f)/(ell-1) M_n[mu_{i,f}], n = 1..n_max.
inline MomentResult theoretical_moments(const CmData& cm, const DegeneracyReport& rep, std::uint32_t i,
                                        std::uint32_t n_max) {
  const std::uint32_t ell = cm.ell.value();
  MomentResult out{i, std::vector<std::optional<mpq_class>>(n_max), {}, {}};
  for (auto f : divisors(ell - 1)) {
    if (f % 2 == 1 && !is_nondegenerate_degree(rep, f)) {
      out.blocked_degrees.push_back(f);
      continue;
    }
    out.per_degree.push_back(per_degree_moments(cm, rep, i, n_max, f));
  }
  if (out.blocked_degrees.empty()) {
    for (std::uint32_t n = 0; n < n_max; ++n) {
      mpq_class total = 0;
      for (const auto& dm : out.per_degree) total += mpq_class(euler_phi(dm.f), ell - 1) * dm.moments[n];
      total.canonicalize();
      out.totals[n] = total;
    }
  }
  return out;
}

inline mpq_class theoretical_moment(PrimeEll ell, std::int64_t k, std::uint32_t i, std::uint32_t n) {
  const CmData cm = build_Mk(ell, k);
  const auto rep = classify(ell, k, false);
  const auto r = theoretical_moments(cm, rep, i, n);
  if (!r.blocked_degrees.empty()) throw DegenerateResidueDegree(ell.value(), cm.k, r.blocked_degrees);
  return *r.totals[n - 1];
}

/// Exact table M_n[mu_i], i = 1..i_max, n = 1..n_max.
struct MomentTable {
  std::uint32_t ell;
  std::uint32_t k;
  std::vector<MomentResult> rows;  // rows[i-1]
};

inline MomentTable moment_table(PrimeEll ell, std::int64_t k, std::uint32_t i_max, std::uint32_t n_max) {
  const CmData cm = build_Mk(ell, k);
  const auto rep = classify(ell, k, false);
  if (i_max < 1 || i_max > ell.group_order()) throw std::invalid_argument("i_max must lie in [1, ell-1]");
  if (n_max < 1) throw std::invalid_argument("n_max must be positive");
  MomentTable t{ell.value(), cm.k, {}};
  for (std::uint32_t i = 1; i <= i_max; ++i) t.rows.push_back(theoretical_moments(cm, rep, i, n_max));
  return t;
}

}  // namespace fermat
