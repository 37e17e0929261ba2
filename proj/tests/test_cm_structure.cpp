#include "fermat/cm_structure.hpp"

#include <gtest/gtest.h>

using namespace fermat;

namespace {

std::vector<std::uint32_t> primes_between(std::uint32_t lo, std::uint32_t hi) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = lo; p <= hi; ++p)
    if (is_prime(p) && p >= 5) out.push_back(p);
  return out;
}

using V = std::vector<std::uint32_t>;

}  // namespace

TEST(BuildMk, TableExamples) {
  auto a = build_Mk(PrimeEll(5), 2);
  EXPECT_EQ(a.M_k.elements(), (V{1, 3}));
  EXPECT_EQ(a.W_k.elements(), (V{1}));
  EXPECT_EQ(a.n_k, 1u);
  EXPECT_EQ(a.r_k, 2u);

  auto b = build_Mk(PrimeEll(7), 2);
  EXPECT_EQ(b.M_k.elements(), (V{1, 2, 4}));
  EXPECT_EQ(b.W_k.elements(), (V{1, 2, 4}));
  EXPECT_EQ(b.n_k, 3u);
  EXPECT_EQ(b.r_k, 1u);

  auto c = build_Mk(PrimeEll(13), 3);
  EXPECT_EQ(c.M_k.elements(), (V{1, 2, 3, 5, 6, 9}));
  EXPECT_EQ(c.W_k.elements(), (V{1, 3, 9}));
}

TEST(BuildMk, RejectsOutOfRangeK) {
  EXPECT_THROW(build_Mk(PrimeEll(7), 0), std::invalid_argument);
  EXPECT_THROW(build_Mk(PrimeEll(7), 6), std::invalid_argument);
  EXPECT_THROW(build_Mk(PrimeEll(7), -1), std::invalid_argument);
}

TEST(BuildMk, PartitionStabilityAndCubicRootCriterion) {
  for (auto l : primes_between(5, 100)) {
    const PrimeEll ell(l);
    for (std::uint32_t k = 1; k + 2 <= l; ++k) {
      const auto cm = build_Mk(ell, k);
      const auto neg = cm.M_k.negated();
      ASSERT_FALSE(cm.M_k.intersects(neg));
      ASSERT_EQ(cm.M_k.size() + neg.size(), l - 1);
      for (auto w : cm.W_k.elements()) ASSERT_EQ(cm.M_k.scaled(w), cm.M_k);
      const bool cube = (static_cast<std::uint64_t>(k) * k + k + 1) % l == 0;
      ASSERT_EQ(cm.n_k == 3, cube) << l << "," << k;
      ASSERT_EQ(cm.n_k == 1, !cube);
      if (cube) {
        V expect{1, k, l - k - 1};
        std::sort(expect.begin(), expect.end());
        ASSERT_EQ(cm.W_k.elements(), expect);
      }
    }
  }
}

TEST(Ekf, Examples) {
  const auto cm = build_Mk(PrimeEll(7), 2);
  EXPECT_EQ(ekf(1, 3, cm), 0u);
  for (auto a : cm.M_k.elements()) EXPECT_EQ(ekf(a, 1, cm), 0u);
}

TEST(Ekf, ReflectionAndTotal) {
  for (auto l : primes_between(5, 60)) {
    const PrimeEll ell(l);
    for (std::uint32_t k = 1; k + 2 <= l; ++k) {
      const auto cm = build_Mk(ell, k);
      for (auto f : divisors(l - 1)) {
        const auto E = ekf_table(cm, f);
        std::uint64_t total = 0;
        for (std::uint32_t a = 1; a < l; ++a) {
          ASSERT_EQ(E[neg(a, ell)], f - E[a]);
          total += E[a];
        }
        ASSERT_EQ(total, static_cast<std::uint64_t>(f) * (l - 1) / 2);
      }
    }
  }
}

TEST(BuildWkf, Examples) {
  const auto cm72 = build_Mk(PrimeEll(7), 2);
  const auto w = build_Wkf(cm72, 1);
  EXPECT_EQ(w.W_kf.elements(), (V{1, 2, 4}));
  EXPECT_EQ(w.n_kf, 3u);
  EXPECT_EQ(*w.r_kf, 1u);

  const auto even = build_Wkf(cm72, 2);
  EXPECT_EQ(even.n_kf, 6u);
  EXPECT_FALSE(even.r_kf.has_value());

  const auto cm676 = build_Mk(PrimeEll(67), 6);
  const auto w11 = build_Wkf(cm676, 11);
  EXPECT_EQ(w11.n_kf, 33u);
  EXPECT_EQ(w11.W_kf, subgroup_of_order(33, PrimeEll(67)).elements);

  EXPECT_THROW(build_Wkf(cm72, 4), std::invalid_argument);
}

TEST(BuildWkf, ContainsHfAndIsSubgroup) {
  for (auto l : primes_between(5, 100)) {
    const PrimeEll ell(l);
    for (std::uint32_t k = 1; k + 2 <= l; ++k) {
      const auto cm = build_Mk(ell, k);
      for (auto f : divisors(l - 1)) {
        const auto W = build_Wkf(cm, f);  // throws VerificationError on a classification mismatch
        ASSERT_TRUE(subgroup_of_order(f, ell).elements.is_subset_of(W.W_kf));
        const auto el = W.W_kf.elements();
        for (auto a : el)
          for (auto b : el) ASSERT_TRUE(W.W_kf.contains(mul(a, b, ell)));
        if (f % 2 == 0) ASSERT_EQ(W.n_kf, l - 1);
        else ASSERT_TRUE(W.n_kf == f || W.n_kf == 3 * f);
      }
    }
  }
}

TEST(Orbit, Examples) {
  for (std::uint32_t l : {5u, 7u, 11u, 13u, 101u}) {
    const auto o = orbit(1, PrimeEll(l));
    V expect{1, (l - 1) / 2, l - 2};
    std::sort(expect.begin(), expect.end());
    expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
    EXPECT_EQ(o, expect) << l;
  }
  EXPECT_EQ(orbit(2, PrimeEll(7)), (V{2, 4}));
  EXPECT_EQ(orbit(2, PrimeEll(5)), (V{1, 2, 3}));
}

TEST(IsogenyClassCount, Examples) {
  EXPECT_EQ(isogeny_class_count(PrimeEll(7)), 2u);
  EXPECT_EQ(isogeny_class_count(PrimeEll(5)), 1u);
  EXPECT_EQ(isogeny_class_count(PrimeEll(11)), 2u);
  EXPECT_THROW(isogeny_class_count(PrimeEll(3)), std::invalid_argument);
  for (auto l : primes_between(5, 100)) {
    const auto expect = l % 3 == 1 ? (l + 5) / 6 : (l + 1) / 6;
    EXPECT_EQ(isogeny_class_count(PrimeEll(l)), expect) << l;
  }
}
