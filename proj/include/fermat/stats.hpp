#pragma once
// Empirical moments M_{n,x} of the normalized Frobenius trace
// a_1(p) = (|C_k(F_p)| - p - 1) / sqrt(p) over good primes p <= x.

#include "fermat/cm_structure.hpp"
#include "fermat/local_factor.hpp"
#include "fermat/residue.hpp"
#include "fermat/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fermat {

/// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  void merge(const CompensatedSum& o) {
    add(o.sum);
    add(o.comp);
  }
  double value() const { return sum + comp; }
};

/// Montgomery arithmetic modulo an odd p < 2^31 with R = 2^32.
class Montgomery {
 public:
  explicit Montgomery(std::uint32_t p) : p_(p) {
    if (p % 2 == 0 || p >= (1u << 31)) throw std::invalid_argument("Montgomery modulus must be odd and below 2^31");
    std::uint32_t inv = p;  // Newton iteration for p^{-1} mod 2^32
    for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;
    pinv_ = 0u - inv;
    const std::uint64_t r = (std::uint64_t{1} << 32) % p;
    r2_ = static_cast<std::uint32_t>(r * r % p);
  }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    const std::uint64_t t = static_cast<std::uint64_t>(a) * b;
    const std::uint32_t m = static_cast<std::uint32_t>(t) * pinv_;
    const auto u = static_cast<std::uint32_t>((t + static_cast<std::uint64_t>(m) * p_) >> 32);
    return u >= p_ ? u - p_ : u;
  }
  std::uint32_t to(std::uint32_t a) const { return mul(a, r2_); }
  std::uint32_t from(std::uint32_t a) const { return mul(a, 1); }

 private:
  std::uint32_t p_;
  std::uint32_t pinv_ = 0;
  std::uint32_t r2_ = 0;
};

/// Reusable buffer for the character table of one prime.
struct PointCountScratch {
  std::vector<std::uint16_t> chi;
};

/// |C_k(F_p)| by one pass over u: v^ell = u (u+1)^{ell-k-1} has ell solutions when
/// chi(u) + (ell-k-1) chi(u+1) = 0 mod ell and none otherwise, where chi is the
/// discrete log mod ell.
inline std::uint64_t fast_point_count(PrimeEll ell, std::uint32_t k, std::uint32_t p, PointCountScratch& scratch) {
  const std::uint32_t l = ell.value();
  if (p == l) throw std::invalid_argument("p = ell is a prime of bad reduction");
  if (p == 2 || (p - 1) % l != 0) return static_cast<std::uint64_t>(p) + 1;
  const Montgomery mont(p);
  const auto g = static_cast<std::uint32_t>(smallest_primitive_root(p));
  auto& chi = scratch.chi;
  chi.resize(p);
  // four interleaved walks over the powers of g hide the multiply latency
  constexpr unsigned kChains = 4;
  const std::uint32_t n = p - 1;
  const std::uint32_t len = (n + kChains - 1) / kChains;
  const std::uint32_t gm = mont.to(g);
  std::uint32_t x[kChains], j[kChains];
  std::uint32_t step_pow = static_cast<std::uint32_t>(powmod(g, len, p));
  std::uint32_t start = 1;
  for (unsigned c = 0; c < kChains; ++c) {
    x[c] = mont.to(start);
    j[c] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(c) * len) % l);
    start = static_cast<std::uint32_t>(static_cast<std::uint64_t>(start) * step_pow % p);
  }
  const std::uint32_t full = n / len;  // chains that run the full length
  for (std::uint32_t s = 0; s < len; ++s) {
    for (unsigned c = 0; c < kChains; ++c) {
      if (c >= full && static_cast<std::uint64_t>(c) * len + s >= n) continue;
      chi[mont.from(x[c])] = static_cast<std::uint16_t>(j[c]);
      x[c] = mont.mul(x[c], gm);
      if (++j[c] == l) j[c] = 0;
    }
  }
  const std::uint32_t e = l - k - 1;
  std::vector<std::uint16_t> target(l);
  for (std::uint32_t t = 0; t < l; ++t)
    target[t] = static_cast<std::uint16_t>((l - (static_cast<std::uint64_t>(e) * t) % l) % l);
  std::uint64_t count = 0;
  for (std::uint32_t u = 1; u + 1 < p; ++u) count += chi[u] == target[chi[u + 1]];
  return 3 + static_cast<std::uint64_t>(l) * count;
}

enum class TracePath { Fast, LocalFactor };

/// a_1(p) = (|C_k(F_p)| - p - 1)/sqrt(p); zero unless p = 1 mod ell. The LocalFactor
/// path reads the T coefficient of L_p(C_k, T) instead of counting points.
inline double trace_at_prime(PrimeEll ell, std::int64_t k, std::uint32_t p, TracePath path = TracePath::Fast) {
  check_k(ell, k);
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (p == ell.value()) throw std::invalid_argument("p = ell is a prime of bad reduction");
  const double sp = std::sqrt(static_cast<double>(p));
  if (path == TracePath::LocalFactor) return local_factor(ell, k, p).coeffs[1].get_d() / sp;
  PointCountScratch scratch;
  const auto c = fast_point_count(ell, static_cast<std::uint32_t>(k), p, scratch);
  return (static_cast<double>(c) - static_cast<double>(p) - 1.0) / sp;
}

inline unsigned default_thread_count() {
  if (const char* env = std::getenv("FERMAT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

struct ScanConfig {
  std::uint32_t ell = 5;
  std::uint32_t k = 2;
  std::uint64_t x_max = 1 << 16;
  std::vector<unsigned> moments{1, 2, 3, 4};
  // anything other than {1} switches to exact local factors at every prime, which is
  // only practical for small x
  std::vector<unsigned> coefficients{1};
  std::vector<std::uint64_t> checkpoints;  // x_max is always included
  unsigned threads = 1;
  std::uint64_t chunk_size = 1 << 16;
};

struct MomentCheckpoint {
  std::uint64_t x;
  std::vector<double> M;                 // M[c * moments.size() + j] for (coefficients[c], moments[j])
  std::vector<CompensatedSum> sums;      // raw sums of a_i(p)^n, same layout
  std::uint64_t pi_x = 0;                // good primes p <= x
  std::uint64_t split_primes = 0;        // p = 1 mod ell
  std::vector<std::uint64_t> per_degree; // per_degree[f] = #{p <= x : ord(p mod ell) = f}
};

struct MomentStats {
  std::uint32_t ell;
  std::uint32_t k;
  std::vector<unsigned> moments;
  std::vector<unsigned> coefficients;
  std::vector<MomentCheckpoint> checkpoints;

  const MomentCheckpoint& final() const { return checkpoints.back(); }
  std::size_t index(unsigned n, unsigned i = 1) const {
    for (std::size_t c = 0; c < coefficients.size(); ++c)
      for (std::size_t j = 0; j < moments.size(); ++j)
        if (coefficients[c] == i && moments[j] == n) return c * moments.size() + j;
    throw std::invalid_argument("moment " + std::to_string(n) + " of a_" + std::to_string(i) + " was not requested");
  }
  double moment(unsigned n, unsigned i = 1) const { return final().M[index(n, i)]; }
};

namespace detail {

struct ChunkResult {
  std::vector<CompensatedSum> sums;
  std::uint64_t pi = 0;
  std::uint64_t split = 0;
  std::vector<std::uint64_t> per_degree;
};

}  // namespace detail

inline void validate(const ScanConfig& cfg) {
  const PrimeEll ell(cfg.ell);
  check_k(ell, cfg.k);
  if (cfg.x_max < 3) throw std::invalid_argument("x must be at least 3");
  if (cfg.x_max >= (std::uint64_t{1} << 31)) throw std::invalid_argument("x must be below 2^31");
  if (cfg.moments.empty()) throw std::invalid_argument("at least one moment order is required");
  for (auto n : cfg.moments)
    if (n == 0 || n > 64) throw std::invalid_argument("moment orders must lie in [1, 64]");
  if (cfg.coefficients.empty()) throw std::invalid_argument("at least one coefficient index is required");
  for (auto i : cfg.coefficients)
    if (i == 0 || i >= cfg.ell) throw std::invalid_argument("coefficient indices must lie in [1, ell-1]");
  if (cfg.threads == 0) throw std::invalid_argument("threads must be positive");
  if (cfg.chunk_size == 0) throw std::invalid_argument("chunk size must be positive");
  for (auto c : cfg.checkpoints)
    if (c < 1 || c > cfg.x_max) throw std::invalid_argument("checkpoints must lie in [1, x]");
}

/// Scan all primes p <= x_max. Chunk boundaries depend only on (x_max, chunk_size,
/// checkpoints) and partial sums are folded in chunk order, so the result is
/// bit-identical for any thread count.
inline MomentStats run_scan(const ScanConfig& cfg, std::ostream* progress = nullptr) {
  validate(cfg);
  const PrimeEll ell(cfg.ell);
  const std::uint32_t l = cfg.ell;

  std::vector<std::uint64_t> marks = cfg.checkpoints;
  marks.push_back(cfg.x_max);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  // chunks cover [lo, hi) with hi - 1 landing on every checkpoint
  std::vector<std::pair<std::uint64_t, std::uint64_t>> chunks;
  std::vector<int> checkpoint_at;  // index into marks, or -1
  {
    std::uint64_t lo = 2;
    for (std::size_t m = 0; m < marks.size(); ++m) {
      const std::uint64_t end = marks[m] + 1;
      if (lo >= end) {  // checkpoint below 2
        chunks.emplace_back(lo, lo);
        checkpoint_at.push_back(static_cast<int>(m));
        continue;
      }
      while (lo < end) {
        const std::uint64_t hi = std::min(end, lo + cfg.chunk_size);
        chunks.emplace_back(lo, hi);
        checkpoint_at.push_back(hi == end ? static_cast<int>(m) : -1);
        lo = hi;
      }
    }
  }

  const auto base = simple_sieve(isqrt_ceil(cfg.x_max + 1) + 1);
  std::vector<std::uint32_t> order_of(l, 0);
  for (std::uint32_t r = 1; r < l; ++r) order_of[r] = static_cast<std::uint32_t>(multiplicative_order(r, l));

  const std::size_t nm = cfg.moments.size();
  const std::size_t ns = nm * cfg.coefficients.size();
  const bool fast = cfg.coefficients == std::vector<unsigned>{1};
  std::vector<detail::ChunkResult> results(chunks.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  std::size_t done = 0;

  std::exception_ptr failure;
  auto worker = [&]() {
    PointCountScratch scratch;
    for (;;) {
      if (failure) return;
      const std::size_t idx = next.fetch_add(1);
      if (idx >= chunks.size()) return;
      auto& res = results[idx];
      res.sums.assign(ns, {});
      res.per_degree.assign(l, 0);
      for (auto p : primes_in_range(chunks[idx].first, chunks[idx].second, base)) {
        if (p == l) continue;
        ++res.pi;
        ++res.per_degree[order_of[p % l]];
        const bool split = (p - 1) % l == 0;
        res.split += split;
        if (fast) {
          if (!split) continue;  // a_1(p) = 0 contributes nothing to the sums
          const auto c = fast_point_count(ell, cfg.k, p, scratch);
          const double a = (static_cast<double>(c) - static_cast<double>(p) - 1.0) / std::sqrt(static_cast<double>(p));
          for (std::size_t j = 0; j < nm; ++j) res.sums[j].add(std::pow(a, static_cast<int>(cfg.moments[j])));
          continue;
        }
        std::vector<double> a;
        try {
          a = local_factor(ell, cfg.k, p).normalized();
        } catch (...) {
          std::lock_guard<std::mutex> lock(progress_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
        for (std::size_t c = 0; c < cfg.coefficients.size(); ++c)
          for (std::size_t j = 0; j < nm; ++j)
            res.sums[c * nm + j].add(std::pow(a[cfg.coefficients[c]], static_cast<int>(cfg.moments[j])));
      }
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        ++done;
        *progress << "[stats] ell=" << l << " k=" << cfg.k << " chunk " << done << "/" << chunks.size()
                  << " up to " << chunks[idx].second - 1 << "\n";
      }
    }
  };

  const unsigned nthreads = std::min<unsigned>(cfg.threads, static_cast<unsigned>(std::max<std::size_t>(1, chunks.size())));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  MomentStats out{l, cfg.k, cfg.moments, cfg.coefficients, {}};
  MomentCheckpoint acc{0, std::vector<double>(ns, 0.0), std::vector<CompensatedSum>(ns), 0, 0,
                       std::vector<std::uint64_t>(l, 0)};
  for (std::size_t idx = 0; idx < chunks.size(); ++idx) {
    const auto& res = results[idx];
    if (!res.sums.empty()) {
      for (std::size_t i = 0; i < ns; ++i) acc.sums[i].merge(res.sums[i]);
      acc.pi_x += res.pi;
      acc.split_primes += res.split;
      for (std::uint32_t f = 0; f < l; ++f) acc.per_degree[f] += res.per_degree[f];
    }
    if (checkpoint_at[idx] >= 0) {
      MomentCheckpoint snap = acc;
      snap.x = marks[static_cast<std::size_t>(checkpoint_at[idx])];
      for (std::size_t i = 0; i < ns; ++i)
        snap.M[i] = acc.pi_x ? acc.sums[i].value() / static_cast<double>(acc.pi_x) : 0.0;
      out.checkpoints.push_back(std::move(snap));
    }
  }
  return out;
}

/// CSV with header x,n,M_n_x,pi_x,split_primes, one row per checkpoint and moment. A
/// scan over coefficients other than a_1 alone adds an `i` column after x.
inline void write_csv(const MomentStats& stats, std::ostream& os) {
  const bool with_i = stats.coefficients != std::vector<unsigned>{1};
  os << (with_i ? "x,i,n,M_n_x,pi_x,split_primes\n" : "x,n,M_n_x,pi_x,split_primes\n");
  const auto old_precision = os.precision(17);
  const std::size_t nm = stats.moments.size();
  for (const auto& cp : stats.checkpoints)
    for (std::size_t c = 0; c < stats.coefficients.size(); ++c)
      for (std::size_t j = 0; j < nm; ++j) {
        os << cp.x << ",";
        if (with_i) os << stats.coefficients[c] << ",";
        os << stats.moments[j] << "," << cp.M[c * nm + j] << "," << cp.pi_x << "," << cp.split_primes << "\n";
      }
  os.precision(old_precision);
}

}  // namespace fermat
