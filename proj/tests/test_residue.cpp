#include "fermat/residue.hpp"

#include <gtest/gtest.h>

using namespace fermat;

namespace {

std::vector<std::uint32_t> primes_up_to(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 3; p <= n; p += 2)
    if (is_prime(p)) out.push_back(p);
  return out;
}

}  // namespace

TEST(PrimeEll, RejectsCompositeAndSmall) {
  EXPECT_THROW(PrimeEll(400), std::invalid_argument);
  EXPECT_THROW(PrimeEll(2), std::invalid_argument);
  EXPECT_THROW(PrimeEll(1), std::invalid_argument);
  EXPECT_THROW(PrimeEll(-7), std::invalid_argument);
  EXPECT_THROW(PrimeEll(10007), std::invalid_argument);  // above the default cap
  EXPECT_EQ(PrimeEll(13).group_order(), 12u);
  EXPECT_EQ(PrimeEll(13).half(), 6u);
}

TEST(Canon, Examples) {
  EXPECT_EQ(canon(-1, PrimeEll(7)), 6u);
  EXPECT_FALSE(canon(7, PrimeEll(7)).has_value());
  EXPECT_FALSE(canon(0, PrimeEll(7)).has_value());
  EXPECT_EQ(canon(-6, PrimeEll(5)), 4u);
  EXPECT_EQ(canon(-20, PrimeEll(7)), 1u);
}

TEST(Order, Examples) {
  EXPECT_EQ(order(1, PrimeEll(13)), 1u);
  EXPECT_EQ(order(2, PrimeEll(5)), 4u);
  EXPECT_EQ(order(2, PrimeEll(7)), 3u);
}

TEST(Order, MinimalExponentProperty) {
  for (auto l : primes_up_to(100)) {
    const PrimeEll ell(l);
    for (std::uint32_t a = 1; a < l; ++a) {
      const auto n = order(a, ell);
      ASSERT_EQ((l - 1) % n, 0u);
      ASSERT_EQ(pow(a, n, ell), 1u);
      for (auto d : divisors(n))
        if (d < n) {
          ASSERT_NE(pow(a, d, ell), 1u) << "a=" << a << " ell=" << l;
        }
    }
  }
}

TEST(V3, Examples) {
  EXPECT_EQ(v3(1), 0u);
  EXPECT_EQ(v3(81), 4u);
  EXPECT_EQ(v3(33), 1u);
  EXPECT_EQ(v3(2), 0u);
}

TEST(FindGenerator, SmallestPrimitiveRoot) {
  EXPECT_EQ(find_generator(PrimeEll(5)), 2u);
  EXPECT_EQ(find_generator(PrimeEll(7)), 3u);
  EXPECT_EQ(find_generator(PrimeEll(11)), 2u);
  EXPECT_EQ(find_generator(PrimeEll(13)), 2u);
  EXPECT_EQ(find_generator(PrimeEll(3)), 2u);
  for (auto l : primes_up_to(100)) {
    const PrimeEll ell(l);
    const auto g = find_generator(ell);
    EXPECT_EQ(order(g, ell), l - 1);
    for (std::uint32_t a = 2; a < g; ++a) EXPECT_LT(order(a, ell), l - 1);
  }
}

TEST(SubgroupOfOrder, Examples) {
  const PrimeEll ell(7);
  EXPECT_EQ(subgroup_of_order(1, ell).elements.elements(), (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(subgroup_of_order(2, ell).elements.elements(), (std::vector<std::uint32_t>{1, 6}));
  EXPECT_EQ(subgroup_of_order(3, ell).elements.elements(), (std::vector<std::uint32_t>{1, 2, 4}));
  EXPECT_THROW(subgroup_of_order(4, ell), std::invalid_argument);
  EXPECT_THROW(subgroup_of_order(0, ell), std::invalid_argument);
}

TEST(SubgroupOfOrder, SizeAndClosure) {
  for (auto l : primes_up_to(100)) {
    const PrimeEll ell(l);
    for (auto f : divisors(l - 1)) {
      const auto H = subgroup_of_order(f, ell);
      const auto elems = H.elements.elements();
      ASSERT_EQ(elems.size(), f);
      ASSERT_TRUE(H.elements.contains(1));
      for (auto a : elems)
        for (auto b : elems) ASSERT_TRUE(H.elements.contains(mul(a, b, ell)));
    }
  }
}

TEST(Legendre, ExamplesAndMultiplicativity) {
  EXPECT_EQ(legendre(1, PrimeEll(11)), 1);
  EXPECT_EQ(legendre(2, PrimeEll(7)), 1);
  for (auto l : primes_up_to(100)) {
    const PrimeEll ell(l);
    EXPECT_EQ(legendre(find_generator(ell), ell), -1);
    for (std::uint32_t a = 1; a < l; ++a)
      for (std::uint32_t b = 1; b < l; ++b)
        ASSERT_EQ(legendre(mul(a, b, ell), ell), legendre(a, ell) * legendre(b, ell));
  }
}

TEST(ResidueSet, ScalingAndNegation) {
  const PrimeEll ell(7);
  ResidueSet s(ell);
  s.insert(1);
  s.insert(2);
  s.insert(4);
  EXPECT_EQ(s.scaled(2), s);
  EXPECT_EQ(s.negated().elements(), (std::vector<std::uint32_t>{3, 5, 6}));
  EXPECT_FALSE(s.intersects(s.negated()));
  EXPECT_EQ(ResidueSet::whole_group(ell).size(), 6u);
}

TEST(Primality, Basics) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(2147483647ULL));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(561));
  EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_EQ(euler_phi(12), 4u);
  EXPECT_EQ(divisors(12), (std::vector<std::uint32_t>{1, 2, 3, 4, 6, 12}));
}
