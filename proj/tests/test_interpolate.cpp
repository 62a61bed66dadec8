#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sidonlab/errors.hpp"
#include "sidonlab/interpolate.hpp"

using namespace sidonlab;

namespace {

const GroupSpec kZ = GroupSpec::integers();

std::vector<Complex> random_phi(std::mt19937_64& rng, std::size_t size, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> out;
  for (std::size_t i = 0; i < size; ++i) out.push_back(std::polar(radius * u(rng), 2 * std::numbers::pi * u(rng)));
  return out;
}

}  // namespace

TEST(Interpolate, ClassicSingleImaginary) {
  const std::vector<Complex> phi{Complex(0, 0.5)};
  const auto p = classic_riesz_product(kZ, oracle::ints({3}), phi);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p.coefficient(kZ.scalar(0)), Complex(1.0));
  EXPECT_EQ(p.coefficient(kZ.scalar(3)), Complex(0, 0.5));
  EXPECT_EQ(p.coefficient(kZ.scalar(-3)), Complex(0, -0.5));
  EXPECT_TRUE(p.is_real_valued());
  EXPECT_NEAR(oracle::scan_min_re_z(oracle::to_map(p), 12000), 0.0, 1e-9);
  const auto cert = verify_interpolation(p, oracle::ints({3}), phi);
  EXPECT_TRUE(cert.nonneg_certified());
  EXPECT_EQ(cert.nonneg_method, "direct");
  EXPECT_EQ(cert.residual, 0.0);
  ASSERT_TRUE(cert.implied_sidon_bound.has_value());
  EXPECT_DOUBLE_EQ(*cert.implied_sidon_bound, 2.0);
}

TEST(Interpolate, ClassicLacunaryHalf) {
  const auto E = oracle::ints({3, 9, 27, 81});
  const std::vector<Complex> phi(4, 0.5);
  const auto p = classic_riesz_product(kZ, E, phi);
  const auto cert = verify_interpolation(p, E, phi);
  EXPECT_EQ(cert.mass_at_identity, Complex(1.0));
  EXPECT_LE(cert.residual, 1e-15);
  EXPECT_TRUE(cert.nonneg_certified());
  // Positivity gives ‖P‖₁ = P̂(1); compare with quadrature.
  EXPECT_NEAR(lp_norm(p, 1.0, 8 * 240 + 1).value, 1.0, 1e-6);
}

TEST(Interpolate, ClassicPreconditions) {
  EXPECT_THROW(classic_riesz_product(kZ, oracle::ints({1, 2, 3}), std::vector<Complex>(3, 0.1)), DomainError);
  EXPECT_THROW(classic_riesz_product(kZ, oracle::ints({3}), std::vector<Complex>{0.6}), DomainError);
  EXPECT_THROW(classic_riesz_product(kZ, oracle::ints({3, 9}), std::vector<Complex>{0.1}), StructuralError);
  const auto one = classic_riesz_product(kZ, {}, std::vector<Complex>{});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.coefficient(kZ.identity()), Complex(1.0));
  const GroupSpec z2(0, {2});
  EXPECT_THROW(classic_riesz_product(z2, std::vector<GroupElement>{z2.scalar(1)}, std::vector<Complex>{0.5}),
               DomainError);
}

TEST(Interpolate, FactorPolynomialIdentities) {
  const auto peak = build_peak_polynomial(0.5, PeakKind::fejer);
  const auto g = kZ.scalar(7);
  for (Complex phi : {Complex(0.3, -0.2), Complex(-2.0 / 3.0), std::polar(peak.coefficient(1), 1.0)}) {
    const auto f = factor_polynomial(kZ, g, phi, peak);
    EXPECT_EQ(f.coefficient(kZ.identity()), Complex(1.0));
    EXPECT_EQ(f.coefficient(g), phi);
    EXPECT_TRUE(f.is_real_valued(1e-15));
    EXPECT_TRUE(is_nonnegative(f).certified);
  }
  const auto constant = factor_polynomial(kZ, g, 0.0, peak);
  EXPECT_EQ(constant.size(), 1u);
  EXPECT_THROW(factor_polynomial(kZ, g, 0.7, peak), DomainError);
}

TEST(Interpolate, RieszProductMatchesConvolutionOracle) {
  std::mt19937_64 rng(17);
  const auto H = oracle::ints({5, 25, 125, 625});
  const auto peak = build_peak_polynomial(0.5, PeakKind::fejer);
  const auto phi = random_phi(rng, 4, 2.0 / 3.0);
  const auto r = riesz_interpolate(kZ, H, phi, peak);

  oracle::CoeffMap expected{{kZ.identity(), 1.0}};
  for (std::size_t i = 0; i < H.size(); ++i) {
    expected = oracle::convolve(kZ, expected, oracle::to_map(factor_polynomial(kZ, H[i], phi[i], peak)));
  }
  for (const auto& [g, c] : expected) EXPECT_NEAR(std::abs(r.polynomial.coefficient(g) - c), 0.0, 1e-14);
  for (std::size_t i = 0; i < H.size(); ++i) EXPECT_NEAR(std::abs(r.polynomial.coefficient(H[i]) - phi[i]), 0.0, 1e-15);

  const auto& c = r.certificate;
  EXPECT_LE(c.residual, 1e-10);
  EXPECT_NEAR(std::abs(c.mass_at_identity - Complex(1.0)), 0.0, 1e-12);
  EXPECT_TRUE(c.nonneg_certified());
  EXPECT_EQ(c.nonneg_method, "factored");
  ASSERT_TRUE(c.implied_sidon_bound.has_value());
  EXPECT_NEAR(*c.implied_sidon_bound, 1.5, 1e-9);
}

TEST(Interpolate, FactoredAndDirectCertificatesAgree) {
  const auto H = oracle::ints({5, 25});
  const auto peak = build_peak_polynomial(0.5, PeakKind::fejer);
  const std::vector<Complex> phi{2.0 / 3.0, std::polar(2.0 / 3.0, 2.0)};
  const auto r = riesz_interpolate(kZ, H, phi, peak);
  const auto direct = verify_interpolation(r.polynomial, H, phi, {}, 1.5);
  EXPECT_TRUE(r.certificate.nonneg_certified());
  EXPECT_TRUE(direct.nonneg_certified());
  EXPECT_EQ(direct.nonneg_method, "direct");
  EXPECT_NEAR(oracle::scan_min_re_z(oracle::to_map(r.polynomial), 100'000), 0.0, 1e-6);
  EXPECT_NEAR(lp_norm(r.polynomial, 1.0, 8 * 60 + 1).value, 1.0, 1e-6);
}

TEST(Interpolate, PlantedRelationIsRejected) {
  const auto peak = build_peak_polynomial(0.5, PeakKind::fejer);
  try {
    riesz_interpolate(kZ, oracle::ints({5, 25, 30}), std::vector<Complex>(3, 0.5), peak);
    FAIL() << "expected a DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("relation"), std::string::npos);
  }
  EXPECT_THROW(riesz_interpolate(kZ, oracle::ints({5}), std::vector<Complex>{0.9}, peak), DomainError);
}

TEST(Interpolate, SupportCapIsResourceError) {
  const auto peak = build_peak_polynomial(0.5, PeakKind::fejer);
  MultiplyOptions tiny;
  tiny.max_terms = 100;
  EXPECT_THROW(riesz_interpolate(kZ, oracle::ints({5, 25, 125, 625}), std::vector<Complex>(4, 0.5), peak, {}, {},
                                 tiny),
               ResourceError);
}

TEST(Interpolate, SingletonAndTorsion) {
  const auto peak = build_peak_polynomial(1.0, PeakKind::fejer);
  const auto single = riesz_interpolate(kZ, oracle::ints({4}), std::vector<Complex>{0.5}, peak);
  EXPECT_EQ(single.polynomial.size(), 3u);
  EXPECT_TRUE(single.certificate.nonneg_certified());

  const GroupSpec spec(0, {101, 103});
  const std::vector<GroupElement> H{spec.element({}, {1, 0}), spec.element({}, {0, 1})};
  const auto r = riesz_interpolate(spec, H, std::vector<Complex>{0.5, Complex(0, -0.5)}, peak);
  EXPECT_LE(r.certificate.residual, 1e-15);
  EXPECT_EQ(r.certificate.mass_at_identity, Complex(1.0));
  EXPECT_TRUE(verify_interpolation(r.polynomial, H, std::vector<Complex>{0.5, Complex(0, -0.5)}).nonneg_certified());

  const GroupSpec small(0, {2});
  EXPECT_THROW(riesz_interpolate(small, std::vector<GroupElement>{small.scalar(1)}, std::vector<Complex>{0.5}, peak),
               DomainError);
}

TEST(Interpolate, VerifyReportsPerturbationAndNonReal) {
  const auto E = oracle::ints({3, 9});
  const std::vector<Complex> phi{0.25, 0.5};
  const auto p = classic_riesz_product(kZ, E, phi);
  const auto shifted = add(p, TrigPolynomial::monomial(kZ, kZ.scalar(9), 1e-3));
  const auto cert = verify_interpolation(shifted, E, phi);
  EXPECT_NEAR(cert.residual, 1e-3, 1e-15);
  EXPECT_FALSE(cert.real_valued);
  EXPECT_FALSE(cert.nonneg.has_value());
  EXPECT_FALSE(cert.implied_sidon_bound.has_value());
  EXPECT_TRUE(cert.l1_is_estimate);
}

TEST(Interpolate, FamilyCertificates) {
  const auto peak = build_peak_polynomial(0.5, PeakKind::fejer);
  FamilyOptions options;
  options.random_count = 5;
  const auto fam = certify_family(kZ, oracle::ints({5, 25, 125, 625}), peak, options);
  EXPECT_EQ(fam.sign_patterns, 16u);
  EXPECT_TRUE(fam.exhaustive_signs);
  EXPECT_EQ(fam.members.size(), 21u);
  EXPECT_TRUE(fam.all_nonneg);
  ASSERT_TRUE(fam.bound.has_value());
  EXPECT_LT(*fam.bound, 1.5001);

  const auto classic = certify_classic_family(kZ, oracle::ints({3, 9, 27}), options);
  ASSERT_TRUE(classic.bound.has_value());
  EXPECT_NEAR(*classic.bound, 2.0, 1e-12);

  const auto empty = certify_family(kZ, {}, peak, options);
  ASSERT_TRUE(empty.bound.has_value());
  EXPECT_EQ(*empty.bound, 1.0);
}
