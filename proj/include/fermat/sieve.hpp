#pragma once
// Segmented sieve of Eratosthenes.

#include <cmath>
#include <cstdint>
#include <vector>

namespace fermat {

inline std::vector<std::uint32_t> simple_sieve(std::uint32_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

/// Primes in [lo, hi), given all primes up to sqrt(hi).
inline std::vector<std::uint32_t> primes_in_range(std::uint64_t lo, std::uint64_t hi,
                                                  const std::vector<std::uint32_t>& base) {
  std::vector<std::uint32_t> out;
  if (hi <= lo) return out;
  std::vector<std::uint8_t> composite(hi - lo, 0);
  for (std::uint64_t p : base) {
    if (p * p >= hi) break;
    std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
    for (std::uint64_t j = start; j < hi; j += p) composite[j - lo] = 1;
  }
  for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n < hi; ++n)
    if (!composite[n - lo]) out.push_back(static_cast<std::uint32_t>(n));
  return out;
}

inline std::uint32_t isqrt_ceil(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n) --r;
  return static_cast<std::uint32_t>(r);
}

}  // namespace fermat
