#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sidonlab {

using Integer = boost::multiprecision::cpp_int;

/// An element of Γ = ℤ^d ⊕ ℤ_{p_1} ⊕ … ⊕ ℤ_{p_t}, written additively.
///
/// Elements do not carry their group; every operation goes through the
/// owning GroupSpec, which validates shapes and reduces residues.
class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(std::vector<Integer> free, std::vector<std::int64_t> torsion)
      : free_(std::move(free)), torsion_(std::move(torsion)) {}

  const std::vector<Integer>& free() const noexcept { return free_; }
  const std::vector<std::int64_t>& torsion() const noexcept { return torsion_; }

  bool is_identity() const noexcept;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  // Lexicographic on (free, torsion). This is the canonical element order
  // used for deterministic output everywhere in the library.
  friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b);

  std::string to_string() const;

 private:
  std::vector<Integer> free_;
  std::vector<std::int64_t> torsion_;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept;
};

/// A point of the dual group G = 𝕋^d × ∏ ℤ_{p_i}; free coordinates live in
/// [0,1), torsion coordinates are residues.
struct DualPoint {
  std::vector<double> free;
  std::vector<std::int64_t> torsion;
};

class GroupSpec {
 public:
  GroupSpec() = default;
  GroupSpec(std::size_t free_rank, std::vector<std::int64_t> moduli);

  /// ℤ, the setting of most examples.
  static GroupSpec integers() { return GroupSpec(1, {}); }

  std::size_t free_rank() const noexcept { return free_rank_; }
  const std::vector<std::int64_t>& moduli() const noexcept { return moduli_; }
  std::size_t torsion_rank() const noexcept { return moduli_.size(); }
  bool torsion_free() const noexcept { return moduli_.empty(); }
  bool pure_torsion() const noexcept { return free_rank_ == 0 && !moduli_.empty(); }
  std::size_t coordinate_count() const noexcept { return free_rank_ + moduli_.size(); }

  /// Builds an element, reducing torsion residues into [0, p_i).
  GroupElement element(std::vector<Integer> free, std::vector<std::int64_t> torsion = {}) const;
  /// Shorthand for groups with exactly one coordinate (ℤ or ℤ_p).
  GroupElement scalar(const Integer& value) const;
  GroupElement identity() const;

  /// Throws StructuralError unless `g` has this group's shape with reduced residues.
  void check(const GroupElement& g) const;
  void check(const DualPoint& x) const;

  GroupElement combine(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  GroupElement power(const GroupElement& a, const Integer& k) const;

  /// γ(x) = exp(2πi(Σ γ_j x_j + Σ y_i z_i / p_i)). The free phase is reduced
  /// mod 1 in exact integer arithmetic before the exponential is taken.
  std::complex<double> evaluate(const GroupElement& gamma, const DualPoint& x) const;

  /// Least k ≥ 1 with kγ = 0, or nullopt when γ has infinite order.
  std::optional<Integer> element_order(const GroupElement& gamma) const;

  DualPoint point(std::vector<double> free, std::vector<std::int64_t> torsion = {}) const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

  std::string to_string() const;

 private:
  std::size_t free_rank_ = 0;
  std::vector<std::int64_t> moduli_;
};

void require_same_spec(const GroupSpec& a, const GroupSpec& b);

/// Sorts into canonical order and removes duplicates.
std::vector<GroupElement> canonical_set(std::span<const GroupElement> elements);

struct PowerSetResult {
  std::vector<GroupElement> elements;  // canonical order, deduplicated
  bool collisions = false;
};

/// E_k = {γ^k : γ ∈ E}.
PowerSetResult power_set(const GroupSpec& spec, std::span<const GroupElement> elements,
                         const Integer& k);

/// γE, in the same order as `elements`.
std::vector<GroupElement> translate_set(const GroupSpec& spec,
                                        std::span<const GroupElement> elements,
                                        const GroupElement& shift);

/// frac(k·x) for an integer k and a double x, computed exactly from the
/// binary expansion of x and rounded once.
double fractional_product(const Integer& k, double x);

}  // namespace sidonlab
