#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sidonlab/group.hpp"

namespace sidonlab {

/// An exponent vector ξ over a query set, stored densely and aligned with
/// `elements` (the query set in canonical order).
struct ExponentVector {
  std::vector<GroupElement> elements;
  std::vector<int> exponents;
  int bound = 0;

  /// Elements whose component ξ_γ·γ is not the identity.
  std::vector<GroupElement> support(const GroupSpec& spec) const;
  std::string to_string() const;
};

struct RelationOptions {
  std::uint64_t work_cap = 100'000'000;  // elementary DP / hash steps per query
  std::size_t sample_cap = 8;            // nontrivial relations kept in reports
};

/// C_n(F): the number of ξ ∈ {0,±1,…,±n}^F with Σ ξ_γ γ = 0.
struct RelationReport {
  std::vector<GroupElement> elements;  // canonical order
  int degree = 0;
  Integer count = 1;
  Integer trivial_count = 1;           // ξ with ξ_γ γ = 0 for every γ
  std::vector<ExponentVector> sample_relations;  // first nontrivial relations in canonical order
  std::string method;                  // "empty", "dp" or "meet-in-the-middle"
  std::uint64_t estimated_work = 0;
  bool contains_identity = false;

  bool independent() const { return count == trivial_count; }
};

RelationReport count_relations(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                               const RelationOptions& options = {});

/// The first nontrivial relation in canonical order, or nullopt when F is
/// n-degree independent.
///
/// Canonical order: elements ascend (see GroupElement ordering); exponent
/// vectors compare lexicographically with exponent values ranked
/// 0, 1, -1, 2, -2, …, n, -n. A relation is nontrivial when some ξ_γ γ ≠ 0.
std::optional<ExponentVector> find_relation(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                                            const RelationOptions& options = {});

/// First `limit` nontrivial relations in canonical order.
std::vector<ExponentVector> enumerate_relations(const GroupSpec& spec, std::span<const GroupElement> elements,
                                                int n, std::size_t limit, const RelationOptions& options = {});

bool is_n_degree_independent(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                             const RelationOptions& options = {});
inline bool is_quasi_independent(const GroupSpec& spec, std::span<const GroupElement> elements,
                                 const RelationOptions& options = {}) {
  return is_n_degree_independent(spec, elements, 1, options);
}
inline bool is_dissociate(const GroupSpec& spec, std::span<const GroupElement> elements,
                          const RelationOptions& options = {}) {
  return is_n_degree_independent(spec, elements, 2, options);
}

struct LengthIndependence {
  bool independent = true;
  bool vacuous = false;  // |F| < n: no n-element subsets exist
  std::optional<ExponentVector> witness;
};

/// No ∏ γ_i^{m_i} = 1 with m_i ∈ {0,±1} over n distinct elements unless each
/// γ_i^{m_i} = 1.
LengthIndependence is_n_length_independent(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                                           const RelationOptions& options = {});

enum class RemovalRule {
  // Support element occurring in the most sampled relations; ties go to the
  // smallest element.
  most_sampled,
  first_in_support,
  last_in_support,
};

std::string to_string(RemovalRule rule);
RemovalRule removal_rule_from_string(const std::string& name);

struct ResidualResult {
  std::vector<GroupElement> elements;  // canonical order
  std::vector<GroupElement> removed;   // in removal order
};

/// Greedy reduction to an n-degree independent subset: repeatedly find a
/// relation and drop one element of its support.
ResidualResult independent_residual(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                                    RemovalRule rule = RemovalRule::most_sampled,
                                    const RelationOptions& options = {});

}  // namespace sidonlab
