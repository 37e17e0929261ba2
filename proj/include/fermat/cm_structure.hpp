#pragma once
// CM combinatorics of Jac(C_k): the type M_k, its stabilizer W_k, the smoothed
// indicators E_{k,f} and their stabilizers W_{k,f}, and the isogeny orbit of k.

#include "fermat/errors.hpp"
#include "fermat/residue.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fermat {

struct CmData {
  PrimeEll ell;
  std::uint32_t k;
  std::uint32_t g;  // smallest primitive root
  ResidueSet M_k;
  ResidueSet W_k;
  std::uint32_t n_k;
  std::uint32_t r_k;
};

inline void check_k(PrimeEll ell, std::int64_t k) {
  if (k < 1 || k > static_cast<std::int64_t>(ell.value()) - 2)
    throw std::invalid_argument("k must lie in [1, ell-2] = [1, " + std::to_string(ell.value() - 2) +
                                "], got " + std::to_string(k));
}

inline bool is_primitive_cube_root(std::uint32_t k, PrimeEll ell) {
  return (static_cast<std::uint64_t>(k) * k + k + 1) % ell.value() == 0;
}

/// Stabilizer {w : w S = S} by direct scan.
inline ResidueSet stabilizer(const ResidueSet& s) {
  const PrimeEll ell = s.ell();
  ResidueSet out(ell);
  for (std::uint32_t w = 1; w < ell.value(); ++w)
    if (s.scaled(w) == s) out.insert(w);
  return out;
}

inline CmData build_Mk(PrimeEll ell, std::int64_t k_in) {
  check_k(ell, k_in);
  const auto k = static_cast<std::uint32_t>(k_in);
  ResidueSet M(ell);
  for (std::uint32_t j = 1; j < ell.value(); ++j)
    if (mul(k, j, ell) + j < ell.value()) M.insert(j);
  if (M.size() != ell.half()) throw VerificationError("|M_k| != (ell-1)/2");
  ResidueSet W = stabilizer(M);
  const auto n = static_cast<std::uint32_t>(W.size());
  if (n != (is_primitive_cube_root(k, ell) ? 3u : 1u))
    throw VerificationError("|W_k| disagrees with the cube-root criterion for (" +
                            std::to_string(ell.value()) + "," + std::to_string(k) + ")");
  return CmData{ell, k, find_generator(ell), std::move(M), std::move(W), n, ell.group_order() / (2 * n)};
}

/// E_{k,f}(a) for every a in [0, ell) (index 0 unused), f | ell-1.
inline std::vector<std::uint32_t> ekf_table(const CmData& cm, std::uint32_t f) {
  const auto H = subgroup_of_order(f, cm.ell).elements.elements();
  std::vector<std::uint32_t> table(cm.ell.value(), 0);
  for (std::uint32_t a = 1; a < cm.ell.value(); ++a) {
    std::uint32_t e = 0;
    for (auto h : H)
      if (!cm.M_k.contains(mul(a, h, cm.ell))) ++e;
    table[a] = e;
  }
  return table;
}

inline std::uint32_t ekf(std::uint32_t a, std::uint32_t f, const CmData& cm) {
  if (a % cm.ell.value() == 0) throw std::invalid_argument("E_{k,f} is defined on G only");
  const auto H = subgroup_of_order(f, cm.ell).elements.elements();
  std::uint32_t e = 0;
  for (auto h : H)
    if (!cm.M_k.contains(mul(a % cm.ell.value(), h, cm.ell))) ++e;
  return e;
}

struct WkfData {
  std::uint32_t f;
  ResidueSet W_kf;
  std::uint32_t n_kf;
  std::optional<std::uint32_t> r_kf;  // undefined when W_kf = G (f even)
};

/// Whether W_{k,f} = H_{3f} by the arithmetic test; f odd.
inline bool wkf_is_triple(const CmData& cm, std::uint32_t f) {
  const auto& ell = cm.ell;
  const std::uint32_t kf = pow(cm.k, f, ell);
  const bool cube = (static_cast<std::uint64_t>(kf) * kf + kf + 1) % ell.value() == 0;
  const bool twist = mul(pow(cm.k + 1, f, ell), kf, ell) == ell.value() - 1;
  return cube && twist;
}

/// Predicted W_{k,f}: G for even f, otherwise H_{3f} or H_f.
inline ResidueSet classify_Wkf(const CmData& cm, std::uint32_t f) {
  if (f % 2 == 0) return ResidueSet::whole_group(cm.ell);
  if (wkf_is_triple(cm, f)) {
    if (cm.ell.group_order() % (3 * f) != 0)
      throw VerificationError("arithmetic test predicts H_{3f} but 3f does not divide ell-1");
    return subgroup_of_order(3 * f, cm.ell).elements;
  }
  return subgroup_of_order(f, cm.ell).elements;
}

/// W_{k,f} by scanning the definition, cross-checked against classify_Wkf.
inline WkfData build_Wkf(const CmData& cm, std::uint32_t f) {
  const PrimeEll ell = cm.ell;
  if (f == 0 || ell.group_order() % f != 0)
    throw std::invalid_argument("f = " + std::to_string(f) + " does not divide ell-1");
  const auto E = ekf_table(cm, f);
  ResidueSet W(ell);
  for (std::uint32_t w = 1; w < ell.value(); ++w) {
    bool fixes = true;
    for (std::uint32_t a = 1; a < ell.value() && fixes; ++a) fixes = E[a] == E[mul(a, w, ell)];
    if (fixes) W.insert(w);
  }
  if (!(W == classify_Wkf(cm, f)))
    throw VerificationError("brute-force W_{k,f} disagrees with its classification at (ell,k,f) = (" +
                            std::to_string(ell.value()) + "," + std::to_string(cm.k) + "," +
                            std::to_string(f) + ")");
  const auto n = static_cast<std::uint32_t>(W.size());
  std::optional<std::uint32_t> r;
  if (2 * n <= ell.group_order()) r = ell.group_order() / (2 * n);
  return WkfData{f, std::move(W), n, r};
}

/// The orbit of k under the order-6 group of isomorphisms between the C_k.
inline std::vector<std::uint32_t> orbit(std::int64_t k_in, PrimeEll ell) {
  check_k(ell, k_in);
  const auto k = static_cast<std::uint32_t>(k_in);
  const std::uint32_t k1 = k + 1;
  const std::uint32_t inv_k = inverse(k, ell);
  const std::uint32_t inv_k1 = inverse(k1, ell);
  std::set<std::uint32_t> out{
      k,
      neg(inv_k1, ell),
      neg(mul(k1, inv_k, ell), ell),
      neg(mul(k, inv_k1, ell), ell),
      neg(k1, ell),
      inv_k,
  };
  return {out.begin(), out.end()};
}

/// Number of isogeny classes among C_1..C_{ell-2}, checked against the orbit partition.
inline std::uint32_t isogeny_class_count(PrimeEll ell) {
  if (ell.value() == 3) throw std::invalid_argument("isogeny_class_count needs ell > 3");
  const std::uint32_t formula = ell.value() % 3 == 1 ? (ell.value() + 5) / 6 : (ell.value() + 1) / 6;
  std::set<std::vector<std::uint32_t>> classes;
  for (std::uint32_t k = 1; k + 2 <= ell.value(); ++k) classes.insert(orbit(k, ell));
  if (classes.size() != formula)
    throw VerificationError("orbit partition has " + std::to_string(classes.size()) +
                            " classes, formula gives " + std::to_string(formula));
  return formula;
}

}  // namespace fermat
