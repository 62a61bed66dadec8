#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sidonlab/errors.hpp"
#include "sidonlab/relations.hpp"

using namespace sidonlab;

namespace {

std::vector<GroupElement> random_set(const GroupSpec& spec, std::mt19937_64& rng, std::size_t size, int range) {
  std::uniform_int_distribution<int> d(-range, range);
  std::vector<GroupElement> out;
  while (out.size() < size) {
    std::vector<Integer> free;
    for (std::size_t j = 0; j < spec.free_rank(); ++j) free.push_back(d(rng));
    std::vector<std::int64_t> torsion;
    for (auto p : spec.moduli()) torsion.push_back(std::uniform_int_distribution<std::int64_t>(0, p - 1)(rng));
    auto g = spec.element(std::move(free), std::move(torsion));
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  }
  return canonical_set(out);
}

}  // namespace

TEST(Relations, SmallExamples) {
  const auto z = GroupSpec::integers();
  const auto r = count_relations(z, oracle::ints({1, 2, 3}), 1);
  EXPECT_EQ(r.count, 3);
  EXPECT_EQ(r.trivial_count, 1);
  EXPECT_FALSE(r.independent());
  ASSERT_FALSE(r.sample_relations.empty());
  EXPECT_EQ(r.sample_relations[0].exponents, (std::vector<int>{1, 1, -1}));
  EXPECT_EQ(count_relations(z, oracle::ints({3, 9, 27}), 2).count, 1);
  EXPECT_EQ(count_relations(z, {}, 3).count, 1);
  EXPECT_EQ(count_relations(z, {}, 3).method, "empty");
}

TEST(Relations, AgreesWithBruteForceAcrossGroups) {
  std::mt19937_64 rng(11);
  const std::vector<GroupSpec> specs{GroupSpec(1, {}), GroupSpec(2, {}), GroupSpec(0, {7}), GroupSpec(0, {4, 6}),
                                     GroupSpec(1, {3})};
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 12; ++trial) {
      const auto size = static_cast<std::size_t>(1 + trial % 5);
      const auto set = random_set(spec, rng, size, 9);
      for (int n = 1; n <= 3; ++n) {
        const auto r = count_relations(spec, set, n);
        EXPECT_EQ(r.count, oracle::relation_count(spec, set, n)) << spec.to_string() << " n=" << n;
        const auto first = find_relation(spec, set, n);
        const auto expected = oracle::first_relation(spec, set, n);
        ASSERT_EQ(first.has_value(), expected.has_value());
        if (first) EXPECT_EQ(first->exponents, *expected);
        EXPECT_EQ(is_n_degree_independent(spec, set, n), oracle::independent(spec, set, n));
      }
    }
  }
}

TEST(Relations, TorsionTrivialCount) {
  const GroupSpec z3(0, {3});
  const std::vector<GroupElement> e{z3.scalar(1)};
  const auto r = count_relations(z3, e, 3);
  // ξ ∈ {-3..3} with ξ ≡ 0 mod 3: {-3, 0, 3}, all trivial.
  EXPECT_EQ(r.count, 3);
  EXPECT_EQ(r.trivial_count, 3);
  EXPECT_TRUE(r.independent());
  EXPECT_FALSE(find_relation(z3, e, 3).has_value());
}

TEST(Relations, EnumerationFollowsCanonicalOrder) {
  const auto z = GroupSpec::integers();
  const auto set = oracle::ints({1, 2, 3, 4});
  const auto listed = enumerate_relations(z, set, 1, 1000);
  std::vector<std::vector<int>> expected;
  oracle::for_each_vector(4, 1, [&](const std::vector<int>& xi) {
    std::vector<oracle::Small> els;
    for (const auto& g : set) els.push_back(oracle::shrink(g));
    bool nontrivial = false;
    for (int e : xi) nontrivial |= e != 0;
    if (nontrivial && oracle::is_zero_combination(z, els, xi)) expected.push_back(xi);
    return true;
  });
  ASSERT_EQ(listed.size(), expected.size());
  for (std::size_t i = 0; i < listed.size(); ++i) EXPECT_EQ(listed[i].exponents, expected[i]);
  EXPECT_EQ(enumerate_relations(z, set, 1, 2).size(), 2u);
}

TEST(Relations, LacunaryIndependenceDegrees) {
  const auto z = GroupSpec::integers();
  EXPECT_TRUE(is_dissociate(z, oracle::ints({3, 9, 27, 81, 243})));
  EXPECT_FALSE(is_n_degree_independent(z, oracle::ints({3, 9, 27, 81, 243}), 3));
  const auto fives = oracle::ints({5, 25, 125, 625});
  EXPECT_TRUE(is_n_degree_independent(z, fives, 3));
  EXPECT_TRUE(is_n_degree_independent(z, fives, 4));
  EXPECT_FALSE(is_n_degree_independent(z, fives, 5));
  EXPECT_TRUE(is_quasi_independent(z, oracle::ints({2, 4, 8, 16, 32, 64, 128, 256, 512, 1024})));
  EXPECT_FALSE(is_quasi_independent(z, oracle::ints({1, 2, 3})));
}

TEST(Relations, ContainsIdentityIsReported) {
  const auto z = GroupSpec::integers();
  const auto r = count_relations(z, oracle::ints({0, 1}), 1);
  EXPECT_TRUE(r.contains_identity);
  EXPECT_TRUE(r.independent());  // 0 contributes only trivial terms
}

TEST(Relations, LengthIndependence) {
  const auto z = GroupSpec::integers();
  const auto set = oracle::ints({1, 2, 3, 7});
  const auto three = is_n_length_independent(z, set, 3);
  EXPECT_FALSE(three.independent);
  ASSERT_TRUE(three.witness.has_value());
  EXPECT_TRUE(is_n_length_independent(z, set, 2).independent);
  EXPECT_TRUE(is_n_length_independent(z, oracle::ints({1}), 2).vacuous);
}

TEST(Relations, ResidualIsIndependentUnderEveryRule) {
  const auto z = GroupSpec::integers();
  std::vector<GroupElement> set;
  for (int k = 1; k <= 20; ++k) set.push_back(z.scalar(k));
  for (auto rule : {RemovalRule::most_sampled, RemovalRule::first_in_support, RemovalRule::last_in_support}) {
    for (int n = 1; n <= 2; ++n) {
      const auto r = independent_residual(z, set, n, rule);
      EXPECT_TRUE(oracle::independent(z, r.elements, n)) << to_string(rule);
      EXPECT_EQ(r.elements.size() + r.removed.size(), set.size());
    }
  }
  EXPECT_EQ(removal_rule_from_string("last_in_support"), RemovalRule::last_in_support);
  EXPECT_THROW(removal_rule_from_string("nope"), ConfigError);
}

TEST(Relations, WorkCapRaisesResourceError) {
  const auto z = GroupSpec::integers();
  RelationOptions tight;
  tight.work_cap = 10;
  EXPECT_THROW(count_relations(z, oracle::ints({1, 2, 3, 4, 5, 6}), 2, tight), ResourceError);
}

TEST(Relations, HugeElementsUseMeetInTheMiddle) {
  const auto z = GroupSpec::integers();
  const Integer b = Integer(1) << 80;
  std::vector<GroupElement> set{z.scalar(b), z.scalar(2 * b), z.scalar(3 * b), z.scalar(b * 7 + 1)};
  const auto r = count_relations(z, set, 1);
  EXPECT_EQ(r.method, "meet-in-the-middle");
  EXPECT_EQ(r.count, 3);
}

TEST(Relations, DegreeMustBePositive) {
  EXPECT_THROW(count_relations(GroupSpec::integers(), oracle::ints({1}), 0), DomainError);
}
