#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sidonlab/errors.hpp"
#include "sidonlab/extract.hpp"

using namespace sidonlab;

namespace {

const GroupSpec kZ = GroupSpec::integers();

std::vector<GroupElement> range(int lo, int hi) {
  std::vector<GroupElement> out;
  for (int k = lo; k <= hi; ++k) out.push_back(kZ.scalar(k));
  return out;
}

}  // namespace

TEST(Extract, ThinningIsSeededAndValidated) {
  const auto F = range(1, 200);
  EXPECT_EQ(random_thin(F, 0.5, 42), random_thin(F, 0.5, 42));
  EXPECT_NE(random_thin(F, 0.5, 42), random_thin(F, 0.5, 43));
  EXPECT_THROW(random_thin(F, 1.0, 0), DomainError);
  EXPECT_THROW(random_thin(F, 0.0, 0), DomainError);
  std::size_t kept = 0;
  for (std::uint64_t s = 0; s < 200; ++s) kept += random_thin(F, 0.5, s).size();
  EXPECT_NEAR(static_cast<double>(kept) / 200.0, 50.0, 2.0);
}

TEST(Extract, ExpectedRelationCount) {
  EXPECT_NEAR(expected_relation_count(kZ, oracle::ints({3, 9, 27}), 1, 0.2), 1.0, 1e-15);
  EXPECT_NEAR(expected_relation_count(kZ, oracle::ints({1, 2, 3}), 1, 0.2), 1.002, 1e-15);
  EXPECT_EQ(expected_relation_count(kZ, {}, 2, 0.2), 1.0);
  const auto F = oracle::ints({1, 2, 4, 5, 7});
  EXPECT_NEAR(expected_relation_count(kZ, F, 2, 0.3), oracle::weighted_relation_sum(kZ, F, 2, 0.15), 1e-13);
}

TEST(Extract, OutputIsAlwaysIndependent) {
  for (int n = 1; n <= 2; ++n) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      ExtractionParams params;
      params.n = n;
      params.seed = seed;
      params.lambda = 0.9 / n;
      const auto r = extract_independent_subset(kZ, range(1, 20), params);
      EXPECT_TRUE(oracle::independent(kZ, r.H, n));
      EXPECT_EQ(r.attempts.size(), 32u);
      EXPECT_GE(r.achieved_ratio, 0.0);
      EXPECT_LE(r.achieved_ratio, 1.0);
    }
  }
}

TEST(Extract, TwentyIntegersSeedZero) {
  ExtractionParams params;
  params.seed = 0;
  const auto r = extract_independent_subset(kZ, range(1, 20), params);
  EXPECT_GE(r.H.size(), 2u);
  EXPECT_TRUE(oracle::independent(kZ, r.H, 1));
  const auto again = extract_independent_subset(kZ, range(1, 20), params);
  EXPECT_EQ(r.H, again.H);
  EXPECT_EQ(r.chosen_attempt, again.chosen_attempt);
}

TEST(Extract, PowersOfTwoComeBackWholeWithDirectCandidate) {
  std::vector<GroupElement> F;
  for (int k = 1; k <= 10; ++k) F.push_back(kZ.scalar(1L << k));
  ASSERT_TRUE(oracle::independent(kZ, F, 1));
  ExtractionParams params;
  params.include_unthinned = true;
  const auto r = extract_independent_subset(kZ, F, params);
  EXPECT_EQ(r.H, canonical_set(F));
  EXPECT_TRUE(r.from_unthinned);
  EXPECT_DOUBLE_EQ(r.achieved_ratio, 1.0);
}

TEST(Extract, GateFailureIsFlagged) {
  ExtractionParams params;
  params.lambda = 1e-6;  // thinned sets are empty, the size gate never passes
  params.max_attempts = 4;
  const auto r = extract_independent_subset(kZ, range(1, 20), params);
  EXPECT_TRUE(r.gates_failed);
  EXPECT_TRUE(r.H.empty());
}

TEST(Extract, ParameterValidation) {
  ExtractionParams params;
  params.n = 2;
  params.lambda = 0.5;
  EXPECT_THROW(extract_independent_subset(kZ, range(1, 5), params), DomainError);
  params.lambda.reset();
  params.alpha = 1.0;
  EXPECT_THROW(extract_independent_subset(kZ, range(1, 5), params), DomainError);
  EXPECT_THROW(extract_independent_subset(kZ, range(0, 5), ExtractionParams{}), DomainError);
  EXPECT_DOUBLE_EQ(ExtractionParams{}.effective_lambda(), 0.25);
}

TEST(Extract, BinomialGate) {
  const std::vector<int> m{2};
  const std::vector<double> zero{0.0};
  const auto r = binomial_gate_check(m, zero);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].k, 1);
  EXPECT_EQ(r.rows[0].binomial, 2);
  EXPECT_NEAR(std::exp2(r.rows[0].exponent), 2.0 * std::numbers::e, 1e-12);
  EXPECT_TRUE(r.all_hold);
  const std::vector<int> forty{40};
  const std::vector<double> nine{0.9};
  const auto r2 = binomial_gate_check(forty, nine);
  EXPECT_EQ(r2.rows[0].k, 2);
  EXPECT_EQ(r2.rows[0].binomial, 780);
  EXPECT_TRUE(r2.all_hold);
  EXPECT_NEAR(binomial_entropy_exponent(1.0), 0.0, 0.0);
}

TEST(Extract, SplitCoset) {
  const GroupSpec spec(0, {2, 3, 101, 103});
  std::vector<GroupElement> F;
  for (int i = 0; i < 30; ++i) F.push_back(spec.element({}, {i, i * 7, i * 13 + 1, i * 5 + 2}));
  const auto s = split_coset(spec, F, 3);
  EXPECT_EQ(s.head, 2u);
  EXPECT_EQ(s.head_order, 6);
  EXPECT_GE(s.Y.size() * 6, F.size());
  std::size_t total = 0;
  for (const auto& f : s.fibers) total += f.size;
  EXPECT_EQ(total, F.size());
  for (const auto& y : s.Y) {
    EXPECT_EQ(y.torsion()[0], 0);
    EXPECT_EQ(y.torsion()[1], 0);
    EXPECT_NE(std::find(F.begin(), F.end(), spec.combine(y, s.gamma)), F.end());
  }

  const GroupSpec big(0, {101});
  const auto trivial = split_coset(big, std::vector<GroupElement>{big.scalar(1), big.scalar(2)}, 3);
  EXPECT_EQ(trivial.head, 0u);
  EXPECT_EQ(trivial.head_order, 1);
  EXPECT_TRUE(trivial.gamma.is_identity());
  EXPECT_EQ(trivial.Y.size(), 2u);

  const GroupSpec small(0, {2, 3});
  EXPECT_THROW(split_coset(small, std::vector<GroupElement>{small.element({}, {1, 1})}, 3), DomainError);
}

TEST(Extract, SmallConstantPipeline) {
  std::vector<GroupElement> F;
  for (int k = 1; k <= 6; ++k) F.push_back(kZ.scalar(static_cast<long>(std::pow(5, k))));
  ExtractionParams params;
  params.include_unthinned = true;
  SmallConstantOptions options;
  options.family.random_count = 10;
  const auto r = extract_small_constant_subset(kZ, F, 0.5, params, options);
  EXPECT_EQ(r.H, canonical_set(F));
  ASSERT_TRUE(r.certificate.bound.has_value());
  EXPECT_NEAR(*r.certificate.bound, 1.5, 1e-9);
  EXPECT_EQ(r.certificate.sign_patterns, 64u);

  const auto ap = extract_small_constant_subset(kZ, range(1, 30), 1.0, ExtractionParams{}, options);
  EXPECT_FALSE(ap.H.empty());
  EXPECT_TRUE(oracle::independent(kZ, ap.H, ap.peak.degree + 1));
  ASSERT_TRUE(ap.certificate.bound.has_value());
  EXPECT_LE(*ap.certificate.bound, 2.0 + 1e-9);

  const auto empty = extract_small_constant_subset(kZ, {}, 0.5, ExtractionParams{}, options);
  EXPECT_TRUE(empty.H.empty());
  EXPECT_EQ(*empty.certificate.bound, 1.0);
}

TEST(Extract, TorsionPipelineTranslatesBack) {
  const GroupSpec spec(0, {2, 101});
  std::vector<GroupElement> F;
  for (int i = 1; i <= 40; ++i) F.push_back(spec.element({}, {i % 2, (i * 37) % 101}));
  SmallConstantOptions options;
  options.family.random_count = 4;
  ExtractionParams params;
  params.include_unthinned = true;
  const auto r = extract_small_constant_subset(spec, F, 1.0, params, options);
  ASSERT_TRUE(r.split.has_value());
  EXPECT_EQ(r.split->head, 1u);
  for (const auto& h : r.H) EXPECT_NE(std::find(F.begin(), F.end(), h), F.end());
  EXPECT_FALSE(r.H.empty());
  ASSERT_TRUE(r.certificate.bound.has_value());
  EXPECT_LE(*r.certificate.bound, 2.0 + 1e-9);
}

TEST(Extract, ThinningValidationSmall) {
  const auto v = validate_thinning(kZ, range(1, 20), 1, 0.4, 2000, 3, 0.5, 2);
  EXPECT_NEAR(v.expected_size, 4.0, 1e-15);
  EXPECT_LT(std::abs(v.mean_size - v.expected_size), 4 * v.size_stderr);
  EXPECT_EQ(v.extraction_failures, 0u);
  EXPECT_EQ(v.extractions, 2000u);
}
