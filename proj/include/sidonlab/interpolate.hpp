#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sidonlab/polynomial.hpp"
#include "sidonlab/relations.hpp"

namespace sidonlab {

struct InterpolationTolerances {
  NonnegativityOptions nonnegativity{};
  std::int64_t l1_points = 0;  // quadrature points per coordinate; 0 picks 8 × spread + 1
};

struct InterpolationCertificate {
  std::vector<GroupElement> elements;  // canonical order
  std::vector<Complex> target;         // φ aligned with `elements`
  double residual = 0.0;               // max |P̂(γ) - φ(γ)|
  Complex mass_at_identity = 0.0;
  bool real_valued = false;
  std::optional<NonnegativityCertificate> nonneg;  // absent when P is not real-valued
  // "direct": P itself went through is_nonnegative. "factored": each factor
  // was certified in one variable and the bounds multiplied as intervals.
  std::string nonneg_method;
  double l1_mass = 0.0;
  bool l1_is_estimate = true;
  double scale = 0.0;                  // B: the bound applies to targets B·φ
  std::optional<double> implied_sidon_bound;

  bool nonneg_certified() const { return nonneg && nonneg->certified; }
};

/// Recomputes every quantity from P. The implied bound is
/// B·‖P‖₁ / (1 - B·residual) with B = `scale` (default 1/‖φ‖∞); it is absent
/// when P is not certified nonnegative with an exact mass, or when
/// B·residual >= 1.
InterpolationCertificate verify_interpolation(const TrigPolynomial& p, std::span<const GroupElement> elements,
                                              std::span<const Complex> phi,
                                              const InterpolationTolerances& tolerances = {},
                                              std::optional<double> scale = std::nullopt);

/// ∏_{γ∈E} (1 + φ(γ)γ + conj(φ(γ))γ⁻¹) for dissociate E and ‖φ‖∞ <= 1/2.
/// `phi` is aligned with `elements` as given.
TrigPolynomial classic_riesz_product(const GroupSpec& spec, std::span<const GroupElement> elements,
                                     std::span<const Complex> phi, const RelationOptions& relations = {},
                                     const MultiplyOptions& multiply = {});

/// P_γ = t·Σ_m p̂(m)(uγ)^m + 1 - t with t = |φ|/p̂(1), u = φ/|φ|. Returns the
/// constant 1 when φ = 0.
TrigPolynomial factor_polynomial(const GroupSpec& spec, const GroupElement& gamma, Complex phi,
                                 const PeakPolynomial& peak);

/// Lower bound for a product of factors f_i(x) = g_i(χ_i(x)), each g_i a
/// polynomial on ℤ (one variable): the g_i are certified separately with
/// tolerance `tolerance`·1e-3 and their ranges multiplied as intervals, less a
/// slack for rounding in the expanded product.
NonnegativityCertificate factored_nonnegativity(std::span<const TrigPolynomial> univariate_factors,
                                                const NonnegativityOptions& options = {});

struct RieszInterpolation {
  TrigPolynomial polynomial;
  InterpolationCertificate certificate;
};

/// ∏_{γ∈H} P_γ for H that is (N+1)-degree independent, N = deg p.
RieszInterpolation riesz_interpolate(const GroupSpec& spec, std::span<const GroupElement> elements,
                                     std::span<const Complex> phi, const PeakPolynomial& peak,
                                     const InterpolationTolerances& tolerances = {},
                                     const RelationOptions& relations = {}, const MultiplyOptions& multiply = {});

struct FamilyOptions {
  std::size_t random_count = 100;
  std::uint64_t seed = 0;
  std::size_t max_sign_elements = 12;  // all sign patterns up to this |H|
  InterpolationTolerances tolerances{};
  RelationOptions relations{};
  MultiplyOptions multiply{};
};

struct FamilyMember {
  std::string kind;  // "signs" or "random"
  std::size_t index = 0;
  double residual = 0.0;
  double mass_at_identity = 0.0;
  bool nonneg_certified = false;
  std::optional<double> lower_bound;
  std::optional<double> implied_sidon_bound;
};

struct FamilyCertificate {
  std::string construction;  // "peak" or "classic"
  std::vector<GroupElement> elements;
  double epsilon = 0.0;      // peak only
  int degree = 0;            // peak only
  double scale = 0.0;        // B: members interpolate φ/B for |φ| = 1
  std::size_t sign_patterns = 0;
  std::size_t random_members = 0;
  bool exhaustive_signs = false;
  double max_residual = 0.0;
  double max_mass_deviation = 0.0;  // max |P̂(1) - 1|
  bool all_nonneg = true;
  std::optional<double> bound;       // max implied bound over the family; none if any member failed
  std::vector<FamilyMember> members;
};

/// Runs riesz_interpolate on φ = ±1/(1+ε) sign patterns (all of them when
/// |H| <= max_sign_elements) and on `random_count` seeded unimodular φ/(1+ε).
FamilyCertificate certify_family(const GroupSpec& spec, std::span<const GroupElement> elements,
                                 const PeakPolynomial& peak, const FamilyOptions& options = {});

/// Same family at scale 1/2 through classic_riesz_product.
FamilyCertificate certify_classic_family(const GroupSpec& spec, std::span<const GroupElement> elements,
                                         const FamilyOptions& options = {});

}  // namespace sidonlab
