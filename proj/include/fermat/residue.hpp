#pragma once
// Arithmetic in G = (Z/ell Z)^* and a few integer number-theory helpers shared by
// the rest of the library.

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef FERMAT_MAX_ELL
#define FERMAT_MAX_ELL 10000
#endif

namespace fermat {

inline constexpr std::uint32_t kMaxEll = FERMAT_MAX_ELL;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return result;
}

// Deterministic Miller-Rabin for all 64-bit inputs.
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

// Distinct prime divisors by trial division; fine for the n <= 2^40 used here.
inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::vector<std::uint32_t> divisors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

inline std::uint32_t euler_phi(std::uint32_t n) {
  std::uint32_t result = n;
  for (auto p : prime_divisors(n)) result = result / static_cast<std::uint32_t>(p) * static_cast<std::uint32_t>(p - 1);
  return result;
}

// Multiplicative order of a modulo m (gcd(a, m) = 1 and m prime are assumed).
inline std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m) {
  std::uint64_t n = m - 1;
  std::uint64_t order = n;
  for (auto r : prime_divisors(n)) {
    while (order % r == 0 && powmod(a, order / r, m) == 1) order /= r;
  }
  return order;
}

inline std::uint64_t smallest_primitive_root(std::uint64_t p) {
  if (p == 2) return 1;
  const auto factors = prime_divisors(p - 1);
  for (std::uint64_t g = 2;; ++g) {
    bool ok = true;
    for (auto r : factors) {
      if (powmod(g, (p - 1) / r, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

/// An odd prime ell in [3, kMaxEll]; the modulus of the cyclotomic field Q(zeta_ell).
class PrimeEll {
 public:
  explicit PrimeEll(std::int64_t ell) {
    if (ell < 3 || ell > static_cast<std::int64_t>(kMaxEll) || !is_prime(static_cast<std::uint64_t>(ell)))
      throw std::invalid_argument("ell must be an odd prime in [3, " + std::to_string(kMaxEll) +
                                  "], got " + std::to_string(ell));
    value_ = static_cast<std::uint32_t>(ell);
  }

  std::uint32_t value() const noexcept { return value_; }
  operator std::uint32_t() const noexcept { return value_; }
  // |G| = ell - 1
  std::uint32_t group_order() const noexcept { return value_ - 1; }
  std::uint32_t half() const noexcept { return (value_ - 1) / 2; }

  friend bool operator==(const PrimeEll&, const PrimeEll&) = default;

 private:
  std::uint32_t value_ = 3;
};

/// Representative of a modulo ell in [1, ell-1], or nullopt when ell | a.
inline std::optional<std::uint32_t> canon(std::int64_t a, PrimeEll ell) {
  const std::int64_t m = ell.value();
  std::int64_t r = a % m;
  if (r < 0) r += m;
  if (r == 0) return std::nullopt;
  return static_cast<std::uint32_t>(r);
}

inline std::uint32_t reduce(std::int64_t a, PrimeEll ell) {
  const std::int64_t m = ell.value();
  std::int64_t r = a % m;
  return static_cast<std::uint32_t>(r < 0 ? r + m : r);
}

inline std::uint32_t mul(std::uint32_t a, std::uint32_t b, PrimeEll ell) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % ell.value());
}

inline std::uint32_t neg(std::uint32_t a, PrimeEll ell) { return a == 0 ? 0 : ell.value() - a; }

inline std::uint32_t pow(std::uint32_t a, std::uint64_t e, PrimeEll ell) {
  return static_cast<std::uint32_t>(powmod(a, e, ell.value()));
}

inline std::uint32_t inverse(std::uint32_t a, PrimeEll ell) {
  if (a % ell.value() == 0) throw std::invalid_argument("0 has no inverse mod ell");
  return pow(a, ell.value() - 2, ell);
}

inline std::uint32_t order(std::uint32_t a, PrimeEll ell) {
  if (a % ell.value() == 0) throw std::invalid_argument("order of 0 mod ell is undefined");
  return static_cast<std::uint32_t>(multiplicative_order(a % ell.value(), ell.value()));
}

inline unsigned v3(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("v3(0) is undefined");
  unsigned e = 0;
  while (n % 3 == 0) {
    n /= 3;
    ++e;
  }
  return e;
}

/// Smallest primitive root mod ell. Every ordering of gamma blocks and torus slots
/// in the library is relative to this choice.
inline std::uint32_t find_generator(PrimeEll ell) {
  return static_cast<std::uint32_t>(smallest_primitive_root(ell.value()));
}

inline bool is_generator(std::uint32_t g, PrimeEll ell) {
  return g % ell.value() != 0 && order(g, ell) == ell.group_order();
}

/// Legendre symbol (a/ell) as +1 / -1.
inline int legendre(std::uint32_t a, PrimeEll ell) {
  if (a % ell.value() == 0) throw std::invalid_argument("legendre symbol of a multiple of ell");
  return pow(a, ell.half(), ell) == 1 ? 1 : -1;
}

/// Subset of G stored as a bitset over [0, ell); bit 0 is never set.
class ResidueSet {
 public:
  explicit ResidueSet(PrimeEll ell) : ell_(ell), bits_(ell.value()) {}

  static ResidueSet whole_group(PrimeEll ell) {
    ResidueSet s(ell);
    for (std::uint32_t a = 1; a < ell.value(); ++a) s.insert(a);
    return s;
  }

  PrimeEll ell() const noexcept { return ell_; }
  bool contains(std::uint32_t a) const { return bits_.test(a % ell_.value()); }
  void insert(std::uint32_t a) {
    const auto r = a % ell_.value();
    if (r == 0) throw std::invalid_argument("0 is not an element of G");
    bits_.set(r);
  }
  std::size_t size() const { return bits_.count(); }

  std::vector<std::uint32_t> elements() const {
    std::vector<std::uint32_t> out;
    out.reserve(size());
    for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos; i = bits_.find_next(i))
      out.push_back(static_cast<std::uint32_t>(i));
    return out;
  }

  // w * S
  ResidueSet scaled(std::uint32_t w) const {
    ResidueSet out(ell_);
    for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos; i = bits_.find_next(i))
      out.bits_.set(mul(static_cast<std::uint32_t>(i), w, ell_));
    return out;
  }

  ResidueSet negated() const { return scaled(ell_.value() - 1); }

  bool is_subset_of(const ResidueSet& other) const { return bits_.is_subset_of(other.bits_); }
  bool intersects(const ResidueSet& other) const { return bits_.intersects(other.bits_); }

  friend bool operator==(const ResidueSet& a, const ResidueSet& b) {
    return a.ell_ == b.ell_ && a.bits_ == b.bits_;
  }

 private:
  PrimeEll ell_;
  boost::dynamic_bitset<> bits_;
};

/// The unique subgroup H_f of G of order f.
struct SubgroupHf {
  std::uint32_t f;
  ResidueSet elements;
};

inline SubgroupHf subgroup_of_order(std::uint32_t f, PrimeEll ell) {
  if (f == 0 || ell.group_order() % f != 0)
    throw std::invalid_argument("subgroup order " + std::to_string(f) + " does not divide ell-1 = " +
                                std::to_string(ell.group_order()));
  const std::uint32_t h = pow(find_generator(ell), ell.group_order() / f, ell);
  ResidueSet s(ell);
  std::uint32_t x = 1;
  for (std::uint32_t i = 0; i < f; ++i) {
    s.insert(x);
    x = mul(x, h, ell);
  }
  return {f, std::move(s)};
}

}  // namespace fermat
