#pragma once
// Small finite fields F_{p^n} with q = p^n < 2^32. Elements are encoded as integers
// in [0, q): the base-p digits are the coefficients c_0 (least significant) up to
// c_{n-1} of a polynomial in F_p[x] modulo a fixed monic irreducible.

#include "fermat/residue.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fermat {

namespace poly_fp {

using Poly = std::vector<std::uint64_t>;  // low degree first

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mod(Poly a, const Poly& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = powmod(m.back(), p - 2, p);
  while (a.size() > dm) {
    const std::uint64_t c = mulmod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = (a[shift + i] + p - mulmod(c, m[i], p)) % p;
    trim(a);
  }
  return a;
}

inline Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  return r;
}

inline Poly mulmod_poly(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  return mod(mul(a, b, p), m, p);
}

inline Poly powmod_poly(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p) {
  Poly r{1};
  base = mod(base, m, p);
  while (e) {
    if (e & 1) r = mulmod_poly(r, base, m, p);
    base = mulmod_poly(base, base, m, p);
    e >>= 1;
  }
  return mod(r, m, p);
}

inline Poly sub(Poly a, const Poly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Rabin's test: f of degree n is irreducible over F_p iff x^{p^n} = x mod f and
/// gcd(x^{p^{n/r}} - x, f) = 1 for every prime r | n.
inline bool is_irreducible(const Poly& f, std::uint64_t p) {
  const std::size_t n = f.size() - 1;
  if (n == 1) return true;
  if (f[0] == 0) return false;
  const Poly x{0, 1};
  // frob[i] = x^{p^i} mod f
  std::vector<Poly> frob(n + 1);
  frob[0] = mod(x, f, p);
  for (std::size_t i = 1; i <= n; ++i) frob[i] = powmod_poly(frob[i - 1], p, f, p);
  if (sub(frob[n], x, p).size() != 0) return false;
  for (auto r : prime_divisors(n)) {
    const Poly g = gcd(f, sub(frob[n / r], x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace poly_fp

class FiniteField {
 public:
  using Elem = std::uint32_t;
  static constexpr unsigned kMaxDegree = 32;

  FiniteField(std::uint64_t p, unsigned n) : p_(p), n_(n) {
    if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime, got " + std::to_string(p));
    if (n == 0) throw std::invalid_argument("field degree must be positive");
    unsigned __int128 q = 1;
    for (unsigned i = 0; i < n; ++i) {
      q *= p;
      if (q >= (static_cast<unsigned __int128>(1) << 32))
        throw std::invalid_argument("field size p^n must be below 2^32");
    }
    q_ = static_cast<std::uint64_t>(q);
    pick_modulus();
    neg_modulus_.resize(n_);
    for (unsigned i = 0; i < n_; ++i) neg_modulus_[i] = (p_ - modulus_[i]) % p_;
    pick_generator();
  }

  std::uint64_t p() const { return p_; }
  unsigned degree() const { return n_; }
  std::uint64_t size() const { return q_; }
  const poly_fp::Poly& modulus() const { return modulus_; }
  Elem generator() const { return generator_; }
  Elem one() const { return 1; }

  poly_fp::Poly decode(Elem a) const {
    poly_fp::Poly c(n_, 0);
    for (unsigned i = 0; i < n_; ++i) {
      c[i] = a % p_;
      a = static_cast<Elem>(a / p_);
    }
    return c;
  }

  Elem encode(const poly_fp::Poly& c) const {
    std::uint64_t a = 0;
    for (std::size_t i = c.size(); i-- > 0;) a = a * p_ + c[i];
    return static_cast<Elem>(a);
  }

  Elem add(Elem a, Elem b) const {
    if (n_ == 1) return static_cast<Elem>((static_cast<std::uint64_t>(a) + b) % p_);
    auto x = decode(a), y = decode(b);
    for (unsigned i = 0; i < n_; ++i) x[i] = (x[i] + y[i]) % p_;
    return encode(x);
  }

  /// a + 1 (touches only the constant digit)
  Elem add_one(Elem a) const {
    const std::uint64_t c0 = a % p_;
    return static_cast<Elem>(a - c0 + (c0 + 1) % p_);
  }

  Elem mul(Elem a, Elem b) const {
    if (n_ == 1) return static_cast<Elem>(mulmod(a, b, p_));
    std::uint64_t x[kMaxDegree], y[kMaxDegree], r[2 * kMaxDegree];
    unpack(a, x);
    unpack(b, y);
    const unsigned n = n_;
    for (unsigned i = 0; i < 2 * n - 1; ++i) r[i] = 0;
    for (unsigned i = 0; i < n; ++i) {
      if (!x[i]) continue;
      for (unsigned j = 0; j < n; ++j) r[i + j] = (r[i + j] + x[i] * y[j]) % p_;
    }
    // modulus is monic: x^n = -sum m_i x^i
    for (unsigned d = 2 * n - 1; d-- > n;) {
      const std::uint64_t c = r[d];
      if (!c) continue;
      for (unsigned i = 0; i < n; ++i) r[d - n + i] = (r[d - n + i] + c * neg_modulus_[i]) % p_;
    }
    std::uint64_t out = 0;
    for (unsigned i = n; i-- > 0;) out = out * p_ + r[i];
    return static_cast<Elem>(out);
  }

  Elem pow(Elem a, std::uint64_t e) const {
    Elem r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

 private:
  // q < 2^32 bounds digits by 2^16 when n > 1, so digit products fit easily in 64 bits.
  void unpack(Elem a, std::uint64_t* c) const {
    for (unsigned i = 0; i < n_; ++i) {
      c[i] = a % p_;
      a = static_cast<Elem>(a / p_);
    }
  }

  void pick_modulus() {
    if (n_ == 1) {
      modulus_ = {0, 1};
      return;
    }
    // least monic irreducible by the integer encoding of its lower coefficients
    for (std::uint64_t tail = 0; tail < q_; ++tail) {
      poly_fp::Poly f(n_ + 1, 0);
      std::uint64_t t = tail;
      for (unsigned i = 0; i < n_; ++i) {
        f[i] = t % p_;
        t /= p_;
      }
      f[n_] = 1;
      if (poly_fp::is_irreducible(f, p_)) {
        modulus_ = std::move(f);
        return;
      }
    }
    throw std::logic_error("no irreducible polynomial found");
  }

  void pick_generator() {
    if (q_ == 2) {
      generator_ = 1;
      return;
    }
    const auto factors = prime_divisors(q_ - 1);
    for (Elem a = 2; a < q_; ++a) {
      bool primitive = true;
      for (auto r : factors) {
        if (pow(a, (q_ - 1) / r) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        generator_ = a;
        return;
      }
    }
    throw std::logic_error("no primitive element found");
  }

  std::uint64_t p_;
  unsigned n_;
  std::uint64_t q_ = 0;
  poly_fp::Poly modulus_;
  std::vector<std::uint64_t> neg_modulus_;
  Elem generator_ = 1;
};

}  // namespace fermat
