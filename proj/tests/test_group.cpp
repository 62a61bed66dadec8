#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "oracles.hpp"
#include "sidonlab/errors.hpp"
#include "sidonlab/group.hpp"

using namespace sidonlab;

TEST(Group, ElementReducesResidues) {
  const GroupSpec spec(1, {5, 7});
  const auto g = spec.element({3}, {-1, 15});
  EXPECT_EQ(g.torsion(), (std::vector<std::int64_t>{4, 1}));
  EXPECT_NO_THROW(spec.check(g));
}

TEST(Group, ShapeMismatchIsStructural) {
  const GroupSpec spec(1, {5});
  EXPECT_THROW(spec.element({1, 2}, {0}), StructuralError);
  EXPECT_THROW(spec.check(GroupElement({1}, {7})), StructuralError);
  EXPECT_THROW(GroupSpec(0, {1}), StructuralError);
  EXPECT_THROW(GroupSpec(2, {}).scalar(1), StructuralError);
  EXPECT_THROW(require_same_spec(GroupSpec(1, {}), GroupSpec(2, {})), StructuralError);
}

TEST(Group, CombineInversePower) {
  const GroupSpec spec(1, {6});
  const auto a = spec.element({4}, {5});
  const auto b = spec.element({-9}, {3});
  EXPECT_EQ(spec.combine(a, b), spec.element({-5}, {2}));
  EXPECT_TRUE(spec.combine(a, spec.inverse(a)).is_identity());
  EXPECT_EQ(spec.power(a, 3), spec.element({12}, {3}));
  EXPECT_EQ(spec.power(a, -2), spec.element({-8}, {2}));
  EXPECT_TRUE(spec.power(a, 0).is_identity());
}

TEST(Group, BigIntegerCoordinates) {
  const auto z = GroupSpec::integers();
  const Integer big = Integer(1) << 200;
  const auto g = z.scalar(big);
  EXPECT_EQ(z.power(g, 3).free()[0], big * 3);
  EXPECT_EQ(z.combine(g, z.inverse(g)), z.identity());
}

TEST(Group, ElementOrder) {
  const GroupSpec spec(0, {4, 6});
  EXPECT_EQ(*spec.element_order(spec.element({}, {2, 3})), 2);
  EXPECT_EQ(*spec.element_order(spec.element({}, {1, 2})), 12);
  EXPECT_EQ(*spec.element_order(spec.identity()), 1);
  EXPECT_FALSE(GroupSpec(1, {4}).element_order(GroupSpec(1, {4}).element({1}, {0})).has_value());
}

TEST(Group, CanonicalOrderAndDedup) {
  const auto set = canonical_set(oracle::ints({5, -3, 5, 2}));
  EXPECT_EQ(set, oracle::ints({-3, 2, 5}));
}

TEST(Group, PowerSetCollisions) {
  const GroupSpec z4(0, {4});
  const std::vector<GroupElement> e{z4.scalar(1), z4.scalar(3)};
  const auto r = power_set(z4, e, 2);
  EXPECT_TRUE(r.collisions);
  EXPECT_EQ(r.elements, std::vector<GroupElement>{z4.scalar(2)});
  const auto z = GroupSpec::integers();
  const auto r3 = power_set(z, oracle::ints({1, 2, 5}), 3);
  EXPECT_FALSE(r3.collisions);
  EXPECT_EQ(r3.elements, oracle::ints({3, 6, 15}));
  EXPECT_THROW(power_set(z, oracle::ints({1}), 0), DomainError);
}

TEST(Group, TranslateKeepsOrder) {
  const auto z = GroupSpec::integers();
  EXPECT_EQ(translate_set(z, oracle::ints({3, 1}), z.scalar(10)), oracle::ints({13, 11}));
}

TEST(Group, EvaluateMatchesDefinition) {
  const GroupSpec spec(1, {5});
  const auto g = spec.element({3}, {2});
  const auto x = spec.point({0.3}, {4});
  const double phase = 3 * 0.3 + 2.0 * 4 / 5.0;
  const auto expected = std::polar(1.0, 2 * std::numbers::pi * phase);
  EXPECT_NEAR(std::abs(spec.evaluate(g, x) - expected), 0.0, 1e-12);
}

TEST(Group, FractionalProductIsExactForHugeFrequencies) {
  using Float = boost::multiprecision::cpp_bin_float_100;
  const Integer k = boost::multiprecision::pow(Integer(3), 60);
  for (double x : {0.1, 0.7071, 1e-9, 0.999999}) {
    const Float exact = Float(k) * Float(x);  // x is a dyadic rational, so this is exact at 100 digits
    const Float frac = exact - boost::multiprecision::floor(exact);
    EXPECT_NEAR(fractional_product(k, x), static_cast<double>(frac), 1e-15) << x;
  }
  EXPECT_EQ(fractional_product(Integer(-3), 0.5), 0.5);
  EXPECT_EQ(fractional_product(Integer(0), 0.3), 0.0);
}

TEST(Group, PointWrapsCoordinates) {
  const GroupSpec spec(1, {3});
  const auto x = spec.point({1.25}, {-1});
  EXPECT_DOUBLE_EQ(x.free[0], 0.25);
  EXPECT_EQ(x.torsion[0], 2);
}
