#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sidonlab/interpolate.hpp"
#include "sidonlab/relations.hpp"

namespace sidonlab {

struct ExtractionParams {
  int n = 1;
  std::optional<double> lambda;  // default 1/(4n)
  int max_attempts = 32;
  std::uint64_t seed = 0;
  double alpha = 0.5;
  RemovalRule rule = RemovalRule::most_sampled;
  RelationOptions relations{};
  // Also offer the residual of the unthinned set as a candidate.
  bool include_unthinned = false;

  double effective_lambda() const;
  void validate() const;
};

struct AttemptRecord {
  std::size_t index = 0;
  std::size_t thinned_size = 0;
  Integer relation_count = 1;
  bool size_gate = false;
  bool relation_gate = false;
  std::optional<std::size_t> residual_size;

  bool passed_gates() const { return size_gate && relation_gate; }
};

struct ExtractionResult {
  std::vector<GroupElement> H;  // canonical order
  std::vector<AttemptRecord> attempts;
  std::size_t input_size = 0;
  double achieved_ratio = 0.0;  // |H| / |F|, 0 for empty F
  bool gates_failed = false;
  std::optional<std::size_t> chosen_attempt;  // none when the unthinned candidate won or F is empty
  bool from_unthinned = false;
  ExtractionParams params;
};

/// Keeps each element (in the given order) independently with probability
/// λ/2, drawing from Rng(seed).
std::vector<GroupElement> random_thin(std::span<const GroupElement> elements, double lambda, std::uint64_t seed);

/// E C_n(F(ω)): the identity coefficient of ∏_{γ∈F} (1 + (λ/2) Σ_{k=1}^n (γ^k + γ^{-k})).
double expected_relation_count(const GroupSpec& spec, std::span<const GroupElement> elements, int n, double lambda,
                               const MultiplyOptions& options = {});

/// Attempt i thins with substream i of params.seed. Accepted attempts pass
/// |F(ω)| > λ|F|/4 and C_n(F(ω)) <= 2·2^{α|F(ω)|}; the largest residual of an
/// accepted attempt wins (lowest index on ties). With no accepted attempt the
/// largest, then least related, thinned set is reduced and gates_failed is set.
ExtractionResult extract_independent_subset(const GroupSpec& spec, std::span<const GroupElement> elements,
                                            const ExtractionParams& params);

/// s(θ) = ((1-θ)/2) log2(2e/(1-θ)).
double binomial_entropy_exponent(double theta);

struct BinomialGateRow {
  int m = 0;
  double theta = 0.0;
  int k = 0;  // floor(m(1-θ)/2)
  Integer binomial = 1;
  double exponent = 0.0;  // s(θ)·m
  bool holds = false;
};

struct BinomialGateReport {
  std::vector<BinomialGateRow> rows;
  bool all_hold = true;
};

/// Exact check of binom(m, floor(m(1-θ)/2)) <= 2^{s(θ)m}.
BinomialGateReport binomial_gate_check(std::span<const int> sizes, std::span<const double> thetas);

struct FiberSize {
  GroupElement key;  // head coordinates, tail zeroed
  std::size_t size = 0;
};

struct CosetSplit {
  std::size_t head = 0;    // n₀: torsion coordinates 1..n₀ form the head
  Integer head_order = 1;  // M = ∏_{i<=n₀} p_i
  GroupElement gamma;      // coset representative
  std::vector<GroupElement> Y;  // canonical; F ∩ γ·tail = γ·Y
  std::vector<FiberSize> fibers;  // ascending key
};

/// Splits off the torsion coordinates whose moduli are <= N+1 (the head) and
/// returns the largest fiber of F over the head projection.
CosetSplit split_coset(const GroupSpec& spec, std::span<const GroupElement> elements, int N);

struct SmallConstantOptions {
  PeakKind kind = PeakKind::fejer;
  FamilyOptions family{};
};

struct SmallConstantResult {
  std::vector<GroupElement> H;  // canonical
  PeakPolynomial peak;
  std::optional<CosetSplit> split;
  bool dropped_identity = false;  // γ itself lay in F and was left out of Y
  ExtractionResult extraction;
  FamilyCertificate certificate;  // for H translated back to the tail, same constant
};

/// Peak polynomial for ε, coset split on torsion groups, extraction of an
/// (N+1)-degree independent subset, family certificate of the Sidon bound.
SmallConstantResult extract_small_constant_subset(const GroupSpec& spec, std::span<const GroupElement> elements,
                                                  double epsilon, ExtractionParams params,
                                                  const SmallConstantOptions& options = {});

struct ThinningValidation {
  std::size_t seeds = 0;
  std::size_t set_size = 0;
  int n = 0;
  double lambda = 0.0;
  double alpha = 0.0;
  double mean_size = 0.0;
  double size_stderr = 0.0;
  double expected_size = 0.0;  // λ|F|/2
  double variance_size = 0.0;
  double expected_variance = 0.0;  // |F|(λ/2 - λ²/4)
  double mean_count = 0.0;
  double count_stderr = 0.0;
  double expected_count = 0.0;
  double p_size_small = 0.0;  // P(|F(ω)| <= λ|F|/4)
  double chebyshev_bound = 0.0;  // 8/(λ|F|)
  double p_count_large = 0.0;  // P(C > 2 E C)
  double p_both_gates = 0.0;
  std::size_t extractions = 0;
  std::size_t extraction_failures = 0;  // extracted H not n-degree independent
};

/// Monte-Carlo over `seeds` thinnings (seed s uses substream s of base_seed);
/// when extract_attempts > 0, also runs extract_independent_subset with seed s
/// and re-verifies each H.
ThinningValidation validate_thinning(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                                     double lambda, std::size_t seeds, std::uint64_t base_seed, double alpha = 0.5,
                                     int extract_attempts = 0, const RelationOptions& relations = {});

}  // namespace sidonlab
