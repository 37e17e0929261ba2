#include "fermat/moments.hpp"
#include "fermat/sato_tate.hpp"

#include "golden.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace fermat;

TEST(Moments, TraceMoments) {
  EXPECT_EQ(trace_moment(0), 1);
  EXPECT_EQ(trace_moment(1), 0);
  EXPECT_EQ(trace_moment(2), 2);
  EXPECT_EQ(trace_moment(4), 6);
  EXPECT_EQ(trace_moment(7), 0);
  EXPECT_EQ(trace_moment(8), 70);
}

TEST(Moments, TableValuesForSmallPairs) {
  EXPECT_EQ(theoretical_moment(PrimeEll(5), 2, 1, 2), 1);
  EXPECT_EQ(theoretical_moment(PrimeEll(5), 2, 1, 4), 9);
  EXPECT_EQ(theoretical_moment(PrimeEll(5), 2, 2, 4), 41);
  EXPECT_EQ(theoretical_moment(PrimeEll(7), 3, 1, 8), 7455);
  EXPECT_EQ(theoretical_moment(PrimeEll(7), 2, 3, 4), 7860);
}

TEST(Moments, PerDegreeExamples) {
  EXPECT_EQ(per_degree_moment(PrimeEll(5), 2, 1, 2, 1), 4);
  for (std::uint32_t n = 1; n <= 4; ++n) EXPECT_EQ(per_degree_moment(PrimeEll(5), 2, 4, n, 4), 1);
  EXPECT_EQ(per_degree_moment(PrimeEll(5), 2, 2, 1, 2), 2);
}

TEST(Moments, EvenDegreeVanishesOffMultiples) {
  for (std::uint32_t ell : {7u, 11u, 13u}) {
    for (auto f : divisors(ell - 1)) {
      if (f % 2) continue;
      const auto c = even_degree_coefficients(ell, f);
      for (std::uint32_t i = 0; i < ell; ++i)
        EXPECT_EQ(c[i], i % f ? mpz_class(0) : binomial((ell - 1) / f, i / f)) << ell << " f=" << f << " i=" << i;
    }
  }
  EXPECT_THROW(even_degree_coefficients(7, 3), std::invalid_argument);
  EXPECT_THROW(even_degree_coefficients(7, 4), std::invalid_argument);
}

TEST(Moments, OddMomentsOfOddCoefficientsVanish) {
  for (const auto& row : golden::table1()) {
    const auto t = moment_table(PrimeEll(row.ell), row.k, row.ell - 2, 5);
    for (const auto& r : t.rows)
      if (r.i % 2) {
        for (std::uint32_t n = 1; n <= 5; n += 2) EXPECT_EQ(*r.totals[n - 1], 0) << row.ell << "," << row.k;
      }
  }
}

TEST(Moments, ReflectionSymmetry) {
  for (const auto& row : golden::table1()) {
    const auto t = moment_table(PrimeEll(row.ell), row.k, row.ell - 1, 4);
    for (std::uint32_t i = 1; i < row.ell - 1; ++i)
      EXPECT_EQ(t.rows[i - 1].totals, t.rows[row.ell - 2 - i].totals) << row.ell << "," << row.k << " i=" << i;
    // a_{ell-1} = p^{(ell-1)/2} normalizes to 1
    for (const auto& v : t.rows[row.ell - 2].totals) EXPECT_EQ(*v, 1);
  }
}

TEST(Moments, AllTableEntriesAreIntegers) {
  for (const auto& row : golden::table1()) {
    const auto t = moment_table(PrimeEll(row.ell), row.k, (row.ell - 1) / 2, 6);
    for (const auto& r : t.rows)
      for (const auto& v : r.totals) EXPECT_EQ(v->get_den(), 1) << row.ell << "," << row.k << " i=" << r.i;
  }
}

TEST(Moments, DegenerateDegreeIsBlocked) {
  const PrimeEll ell(67);
  const auto t = moment_table(ell, 6, 1, 2);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].blocked_degrees, std::vector<std::uint32_t>({1}));
  EXPECT_FALSE(t.rows[0].totals[0].has_value());
  EXPECT_THROW(theoretical_moment(ell, 6, 1, 2), DegenerateResidueDegree);
  try {
    theoretical_moment(ell, 6, 1, 2);
  } catch (const DegenerateResidueDegree& e) {
    EXPECT_EQ(e.degrees(), std::vector<unsigned>({1}));
  }
  // a non-degenerate odd degree still has moments
  for (std::uint32_t f : {3u, 11u, 33u}) EXPECT_NO_THROW(per_degree_moment(ell, 6, 1, 2, f));
  EXPECT_THROW(per_degree_moment(ell, 6, 1, 2, 1), DegenerateResidueDegree);
}

TEST(Moments, RejectsBadArguments) {
  EXPECT_THROW(moment_table(PrimeEll(7), 2, 0, 2), std::invalid_argument);
  EXPECT_THROW(moment_table(PrimeEll(7), 2, 7, 2), std::invalid_argument);
  EXPECT_THROW(moment_table(PrimeEll(7), 2, 1, 0), std::invalid_argument);
  EXPECT_THROW(per_degree_moment(PrimeEll(7), 2, 1, 2, 4), std::invalid_argument);
}

// Monte-Carlo estimates of E[c_i^n] over the Sato-Tate group agree with the exact values.
TEST(Moments, MonteCarloAgreesWithExact) {
  constexpr int kSamples = 200000;
  for (auto [ell, k] : {std::pair{5u, 2u}, std::pair{7u, 3u}}) {
    const PrimeEll L(ell);
    const auto gen = build_gamma(build_Mk(L, k));
    STSampler sampler(gen, 2024);
    constexpr unsigned kMaxN = 4;
    std::vector<std::vector<double>> sum(4, std::vector<double>(2 * kMaxN + 1, 0.0));
    for (int s = 0; s < kSamples; ++s) {
      const auto P = sampler.draw_char_poly();
      for (std::uint32_t i = 1; i <= 3; ++i) {
        const double c = P[ell - 1 - i].real();
        double pw = 1;
        for (unsigned n = 1; n <= 2 * kMaxN; ++n) {
          pw *= c;
          sum[i][n] += pw;
        }
      }
    }
    const auto t = moment_table(L, k, 3, 2 * kMaxN);
    for (std::uint32_t i = 1; i <= 3; ++i)
      for (unsigned n = 1; n <= kMaxN; ++n) {
        const double mean = sum[i][n] / kSamples;
        const double var = sum[i][2 * n] / kSamples - mean * mean;
        const double se = std::sqrt(std::max(var, 0.0) / kSamples);
        const double exact = t.rows[i - 1].totals[n - 1]->get_d();
        EXPECT_LE(std::abs(mean - exact), 4 * se + 1e-9) << ell << "," << k << " i=" << i << " n=" << n;
      }
  }
}
