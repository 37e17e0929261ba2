#pragma once
// The generator gamma of the Sato-Tate group of Jac(C_k) over Q, the torus
// U(1)^{r_k} of its identity component, and characteristic polynomials of
// elements t * gamma^i.

#include "fermat/cm_structure.hpp"
#include "fermat/errors.hpp"
#include "fermat/residue.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fermat {

using cplx = std::complex<double>;
using CPoly = std::vector<cplx>;  // coefficient of T^i at index i

/// Signed permutation matrix: column j is sign[j] * e_{to[j]}.
struct MonomialMatrix {
  std::vector<std::uint32_t> to;
  std::vector<int> sign;

  static MonomialMatrix identity(std::size_t n) {
    MonomialMatrix m{std::vector<std::uint32_t>(n), std::vector<int>(n, 1)};
    for (std::size_t j = 0; j < n; ++j) m.to[j] = static_cast<std::uint32_t>(j);
    return m;
  }

  std::size_t dim() const { return to.size(); }

  MonomialMatrix operator*(const MonomialMatrix& b) const {
    MonomialMatrix c{std::vector<std::uint32_t>(dim()), std::vector<int>(dim())};
    for (std::size_t j = 0; j < dim(); ++j) {
      c.to[j] = to[b.to[j]];
      c.sign[j] = b.sign[j] * sign[b.to[j]];
    }
    return c;
  }

  MonomialMatrix pow(std::uint64_t e) const {
    MonomialMatrix r = identity(dim()), base = *this;
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  MonomialMatrix transpose() const {
    MonomialMatrix t{std::vector<std::uint32_t>(dim()), std::vector<int>(dim())};
    for (std::size_t j = 0; j < dim(); ++j) {
      t.to[to[j]] = static_cast<std::uint32_t>(j);
      t.sign[to[j]] = sign[j];
    }
    return t;
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
    for (std::size_t j = 0; j < dim(); ++j) m(to[j], static_cast<Eigen::Index>(j)) = sign[j];
    return m;
  }

  friend bool operator==(const MonomialMatrix&, const MonomialMatrix&) = default;
};

enum class Block2 { I2, J2 };

struct STGenerator {
  PrimeEll ell;
  std::uint32_t k;
  std::uint32_t g;
  std::vector<Block2> blocks;  // blocks[i-1] = Gamma_i, i = 1..(ell-1)/2
  MonomialMatrix gamma;
  // slot_label[i] is the element h of M_k with {h, -h} = {g^{i+1}, -g^{i+1}}; the
  // first diagonal entry of slot i is zeta^h.
  std::vector<std::uint32_t> slot_label;
  std::uint32_t n_k;
  std::uint32_t r_k;
};

inline MonomialMatrix assemble_gamma(const std::vector<Block2>& blocks) {
  const std::size_t m = blocks.size();
  MonomialMatrix gm{std::vector<std::uint32_t>(2 * m), std::vector<int>(2 * m, 1)};
  for (std::size_t R = 0; R < m; ++R) {
    const std::size_t C = (R + 1) % m;
    const Block2 b = blocks[C];
    if (b == Block2::I2) {
      gm.to[2 * C] = static_cast<std::uint32_t>(2 * R);
      gm.to[2 * C + 1] = static_cast<std::uint32_t>(2 * R + 1);
    } else {  // [[0, 1], [-1, 0]]
      gm.to[2 * C] = static_cast<std::uint32_t>(2 * R + 1);
      gm.sign[2 * C] = -1;
      gm.to[2 * C + 1] = static_cast<std::uint32_t>(2 * R);
    }
  }
  return gm;
}

inline STGenerator build_gamma(const CmData& cm, std::uint32_t g) {
  const PrimeEll ell = cm.ell;
  if (!is_generator(g, ell)) throw std::invalid_argument(std::to_string(g) + " does not generate G");
  const std::uint32_t m = ell.half();
  STGenerator gen{ell, cm.k, g, {}, {}, {}, cm.n_k, cm.r_k};
  std::uint32_t prev = 1;  // g^{i-1}
  for (std::uint32_t i = 1; i <= m; ++i) {
    const std::uint32_t cur = mul(prev, g, ell);
    gen.blocks.push_back(cm.M_k.contains(prev) == cm.M_k.contains(cur) ? Block2::I2 : Block2::J2);
    gen.slot_label.push_back(cm.M_k.contains(cur) ? cur : neg(cur, ell));
    prev = cur;
  }
  gen.gamma = assemble_gamma(gen.blocks);
  return gen;
}

inline STGenerator build_gamma(const CmData& cm) { return build_gamma(cm, cm.g); }

/// Diagonal of iota_{n_k}(diag(u_1, conj u_1, ..., u_r, conj u_r)).
inline std::vector<cplx> torus_diagonal(const STGenerator& gen, const std::vector<cplx>& u) {
  if (u.size() != gen.r_k) throw std::invalid_argument("torus parameter needs r_k entries");
  std::vector<cplx> d;
  d.reserve(gen.ell.group_order());
  for (std::uint32_t c = 0; c < gen.n_k; ++c)
    for (const auto& x : u) {
      d.push_back(x);
      d.push_back(std::conj(x));
    }
  return d;
}

inline std::vector<cplx> angles_to_units(const std::vector<double>& theta) {
  std::vector<cplx> u;
  for (double t : theta) u.push_back(std::polar(1.0, t));
  return u;
}

inline CPoly poly_mul(const CPoly& a, const CPoly& b) {
  CPoly c(a.size() + b.size() - 1, cplx(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

/// det(T - D * M) for a diagonal D and monomial M, one factor T^L - (weight product)
/// per cycle of M.
inline CPoly char_poly_diag_times_monomial(const std::vector<cplx>& diag, const MonomialMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<bool> seen(n, false);
  CPoly out{cplx(1)};
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    cplx w(1);
    std::size_t len = 0, j = start;
    do {
      seen[j] = true;
      w *= diag[m.to[j]] * static_cast<double>(m.sign[j]);
      j = m.to[j];
      ++len;
    } while (j != start);
    CPoly factor(len + 1, cplx(0));
    factor[0] = -w;
    factor[len] = 1;
    out = poly_mul(out, factor);
  }
  return out;
}

inline CPoly char_poly_on_component(const STGenerator& gen, std::uint32_t i, const std::vector<cplx>& u) {
  if (i > gen.ell.group_order() - 1) throw std::invalid_argument("component index must lie in [0, ell-2]");
  return char_poly_diag_times_monomial(torus_diagonal(gen, u), gen.gamma.pow(i));
}

/// Dense matrix of t(u) * gamma^i.
inline Eigen::MatrixXcd st_element(const STGenerator& gen, std::uint32_t i, const std::vector<cplx>& u) {
  const auto d = torus_diagonal(gen, u);
  Eigen::MatrixXcd m = gen.gamma.pow(i).dense().cast<cplx>();
  for (Eigen::Index r = 0; r < m.rows(); ++r) m.row(r) *= d[static_cast<std::size_t>(r)];
  return m;
}

/// #{j in M_k : a j not in M_k}
inline std::uint32_t gauss_count(const CmData& cm, std::uint32_t a) {
  std::uint32_t n = 0;
  for (auto j : cm.M_k.elements())
    if (!cm.M_k.contains(mul(a, j, cm.ell))) ++n;
  return n;
}

struct GeneratorCheck {
  std::string identity;
  bool passed;
};

struct VerifyReport {
  std::vector<GeneratorCheck> checks;
  std::uint32_t N_g = 0;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

/// Diagonal (ell-1)-vector whose slot i is (x(h_i), conj x(h_i)), from values x on M_k.
inline std::vector<cplx> slot_diagonal(const STGenerator& gen, const std::vector<cplx>& x_on_G) {
  std::vector<cplx> d;
  for (auto h : gen.slot_label) {
    d.push_back(x_on_G[h]);
    d.push_back(x_on_G[neg(h, gen.ell)]);
  }
  return d;
}

inline VerifyReport verify_generator(const STGenerator& gen, std::uint64_t seed = 1) {
  VerifyReport rep;
  const PrimeEll ell = gen.ell;
  const std::uint32_t m = ell.half();
  const std::size_t n = ell.group_order();
  const CmData cm = build_Mk(ell, gen.k);

  // gamma^{(ell-1)/2} = diag(J2^{N_g}, ..., J2^{N_g})
  rep.N_g = gauss_count(cm, gen.g);
  {
    const auto half = gen.gamma.pow(m);
    MonomialMatrix expect = MonomialMatrix::identity(n);
    for (std::size_t b = 0; b < m; ++b) {
      MonomialMatrix j2{{1, 0}, {-1, 1}};
      const auto p = j2.pow(rep.N_g % 4);
      for (std::size_t c = 0; c < 2; ++c) {
        expect.to[2 * b + c] = static_cast<std::uint32_t>(2 * b + p.to[c]);
        expect.sign[2 * b + c] = p.sign[c];
      }
    }
    rep.checks.push_back({"gamma^((ell-1)/2) = diag(J2^N_g)", half == expect});
    rep.checks.push_back({"N_g is odd", rep.N_g % 2 == 1});
  }

  {
    auto minus_id = MonomialMatrix::identity(n);
    for (auto& s : minus_id.sign) s = -1;
    rep.checks.push_back({"gamma^(ell-1) = -I", gen.gamma.pow(n) == minus_id});
  }

  {
    MonomialMatrix J = MonomialMatrix::identity(n);
    for (std::size_t b = 0; b < m; ++b) {
      J.to[2 * b] = static_cast<std::uint32_t>(2 * b + 1);
      J.sign[2 * b] = -1;
      J.to[2 * b + 1] = static_cast<std::uint32_t>(2 * b);
      J.sign[2 * b + 1] = 1;
    }
    rep.checks.push_back({"gamma^T J gamma = J", gen.gamma.transpose() * J * gen.gamma == J});
  }

  {
    // gamma t(x) gamma^{-1} = t(x o g) for random x on G with x(-j) = conj x(j)
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
    bool ok = true;
    for (int trial = 0; trial < 4 && ok; ++trial) {
      std::vector<cplx> x(ell.value(), cplx(0));
      for (auto j : cm.M_k.elements()) {
        x[j] = std::polar(1.0, angle(rng));
        x[neg(j, ell)] = std::conj(x[j]);
      }
      std::vector<cplx> xg(ell.value(), cplx(0));
      for (std::uint32_t j = 1; j < ell.value(); ++j) xg[j] = x[mul(gen.g, j, ell)];
      const auto D = slot_diagonal(gen, x);
      const auto Dg = slot_diagonal(gen, xg);
      const Eigen::MatrixXd G = gen.gamma.dense();
      Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = D[i];
      const Eigen::MatrixXcd conj = G.cast<cplx>() * T * G.transpose().cast<cplx>();
      for (std::size_t r = 0; r < n && ok; ++r)
        for (std::size_t c = 0; c < n && ok; ++c) {
          const cplx expect = r == c ? Dg[r] : cplx(0);
          ok = std::abs(conj(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) - expect) < 1e-12;
        }
    }
    rep.checks.push_back({"gamma t(x) gamma^-1 = t(x o g)", ok});
  }

  {
    bool ok = true;
    for (std::uint32_t a = 1; a < ell.value(); ++a)
      ok = ok && ((gauss_count(cm, a) % 2 == 0 ? 1 : -1) == legendre(a, ell));
    rep.checks.push_back({"(-1)^N_a = (a/ell) for all a", ok});
  }
  return rep;
}

/// Seeded sampler for Haar measure on the full Sato-Tate group: a uniform component
/// gamma^i and a uniform torus point.
class STSampler {
 public:
  STSampler(const STGenerator& gen, std::uint64_t seed) : gen_(gen), rng_(seed) {
    for (std::uint32_t i = 0; i + 1 < gen.ell.value(); ++i) powers_.push_back(gen.gamma.pow(i));
  }

  struct Sample {
    std::uint32_t component;
    std::vector<cplx> u;
  };

  Sample draw() {
    std::uniform_int_distribution<std::uint32_t> comp(0, gen_.ell.group_order() - 1);
    std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
    Sample s{comp(rng_), {}};
    for (std::uint32_t j = 0; j < gen_.r_k; ++j) s.u.push_back(std::polar(1.0, angle(rng_)));
    return s;
  }

  /// Characteristic polynomial det(T - g) of a fresh sample.
  CPoly draw_char_poly() {
    const auto s = draw();
    return char_poly_diag_times_monomial(torus_diagonal(gen_, s.u), powers_[s.component]);
  }

 private:
  const STGenerator& gen_;
  std::mt19937_64 rng_;
  std::vector<MonomialMatrix> powers_;
};

}  // namespace fermat
