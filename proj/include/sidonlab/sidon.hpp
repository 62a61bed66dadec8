#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sidonlab/interpolate.hpp"

namespace sidonlab {

struct SidonEstimate {
  std::vector<GroupElement> elements;  // canonical
  std::optional<double> lower;
  bool lower_certified = false;        // false when sup norms were only sampled (free rank > 2)
  std::vector<Complex> witness;        // coefficient vector a aligned with `elements`
  std::optional<SupNormBound> witness_sup;
  std::size_t candidates_evaluated = 0;
  std::optional<double> upper;
  bool upper_exhaustive = false;       // sign family was exhaustive
  std::optional<double> residual_max;
  std::optional<FamilyCertificate> family;
  std::string method;
};

struct LowerBoundOptions {
  std::size_t trials = 200;  // random unimodular starts
  std::uint64_t seed = 0;
  int grid_multiplier = 64;
  std::size_t max_sign_elements = 12;
  std::size_t descent_starts = 3;
  std::size_t descent_rounds = 60;
  std::vector<std::vector<Term>> witness_pool;  // extra candidates, e.g. witnesses for subsets
  std::size_t max_points = std::size_t{1} << 26;
};

/// max Σ|a_γ| / U(a) over candidate coefficient vectors a on E, where U is
/// the certified sup-norm upper bound, so the result never exceeds the
/// Sidon constant of E.
SidonEstimate sidon_lower_bound(const GroupSpec& spec, std::span<const GroupElement> elements,
                                const LowerBoundOptions& options = {});

/// Family certificate for H with the ε-peak construction.
SidonEstimate sidon_upper_bound_via_riesz(const GroupSpec& spec, std::span<const GroupElement> elements,
                                          double epsilon, const FamilyOptions& options = {},
                                          PeakKind kind = PeakKind::fejer);

/// Family certificate at scale 1/2 with classic Riesz products (bound 2).
SidonEstimate sidon_upper_bound_classic(const GroupSpec& spec, std::span<const GroupElement> elements,
                                        const FamilyOptions& options = {});

struct SecBound {
  std::int64_t p = 0;
  double value = 0.0;  // sup over (r, θ) found
  double bound = 0.0;  // sec(π/(2p))
  double r = 0.0;
  double theta = 0.0;
  bool holds = false;  // value >= bound - 1e-6
};

/// sup over β = r e^{iθ} of (1 + r) / max_{ξ^p = 1} |1 + βξ| by grid search
/// and local refinement.
SecBound two_element_constant_mod_p(std::int64_t p, int r_steps = 200, int theta_steps = 200);

struct PowerSetCheck {
  std::int64_t m = 0;
  std::size_t trials = 0;
  int grid_multiplier = 0;
  double max_ratio_discrepancy = 0.0;
  double max_upper_discrepancy = 0.0;  // relative
  double best_ratio = 0.0;             // best certified ratio for E
  double best_ratio_power = 0.0;       // best certified ratio for E_m
};

/// Compares certified ratios of f = Σ a_γ γ and f_m = Σ a_γ γ^m on seeded
/// random a. Requires a torsion-free group.
PowerSetCheck power_set_constant_check(const GroupSpec& spec, std::span<const GroupElement> elements, std::int64_t m,
                                       std::size_t trials, std::uint64_t seed, int grid_multiplier = 64);

struct ExpMomentCheck {
  double lhs = 1.0;          // ∫ exp(Σ a_γ Re γ)
  double sum_squares = 0.0;  // Σ a_γ²
  std::optional<double> fitted_k;  // log(lhs) / Σ a_γ²
  std::string mode;          // "quadrature", "exact" or "monte-carlo"
  std::size_t points = 0;
};

/// `a` is aligned with `elements`. points = 0 picks a default.
ExpMomentCheck exp_moment_check(const GroupSpec& spec, std::span<const GroupElement> elements,
                                std::span<const double> a, std::size_t points = 0, std::uint64_t seed = 0);

/// ∫ ∏_{γ∈A} (1 + λ Σ_{k=1}^n Re γ^k), exact up to rounding, as the identity
/// coefficient of the expanded product. Needs 0 < λ < 1/n and orders > n.
double product_integral(const GroupSpec& spec, std::span<const GroupElement> elements, int n, double lambda,
                        const MultiplyOptions& options = {});

struct LambdaPCheck {
  double S = 0.0;
  int p = 0;
  std::size_t trials = 0;
  std::int64_t points = 0;
  double worst_norm_ratio = 0.0;  // max ‖f‖_p / ‖f‖_2
  double worst_ratio = 0.0;       // worst_norm_ratio / (2 S √p)
};

LambdaPCheck lambda_p_check(const GroupSpec& spec, std::span<const GroupElement> elements, double S, int p,
                            std::size_t trials, std::uint64_t seed);

}  // namespace sidonlab
