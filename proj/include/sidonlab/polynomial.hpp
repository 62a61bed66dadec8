#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sidonlab/group.hpp"

namespace sidonlab {

using Complex = std::complex<double>;

struct Term {
  GroupElement element;
  Complex coefficient;
};

/// A trigonometric polynomial on G, stored as its finitely supported Fourier
/// coefficient map on Γ. Terms are kept in canonical element order with no
/// stored zeros (or nothing below `prune_threshold` when one was requested).
class TrigPolynomial {
 public:
  explicit TrigPolynomial(GroupSpec spec) : spec_(std::move(spec)) {}

  /// Accumulates duplicate elements, drops coefficients with
  /// |c| <= prune_threshold (exact zeros when the threshold is 0).
  static TrigPolynomial from_terms(GroupSpec spec, std::vector<Term> terms, double prune_threshold = 0.0);
  static TrigPolynomial constant(GroupSpec spec, Complex value);
  static TrigPolynomial monomial(GroupSpec spec, GroupElement element, Complex value = 1.0);

  const GroupSpec& spec() const noexcept { return spec_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  double prune_threshold() const noexcept { return prune_threshold_; }

  Complex coefficient(const GroupElement& gamma) const;
  Complex evaluate(const DualPoint& x) const;

  /// coeffs(-γ) == conj(coeffs(γ)) for every γ, up to `tolerance` in absolute value.
  bool is_real_valued(double tolerance = 0.0) const;

  /// Σ |P̂(γ)|, a bound on the sup norm.
  double coefficient_l1() const;

  /// Exact L2 norm from coefficients (Parseval).
  double l2_norm() const;

  TrigPolynomial scaled(Complex factor) const;

 private:
  GroupSpec spec_;
  std::vector<Term> terms_;
  double prune_threshold_ = 0.0;
};

struct MultiplyOptions {
  std::size_t max_terms = 4'000'000;
  double prune_threshold = 0.0;
};

/// Convolution of coefficient maps. Contributions to each output coefficient
/// are summed in canonical (left term, right term) order, so the result does
/// not depend on hashing or threading.
TrigPolynomial multiply(const TrigPolynomial& lhs, const TrigPolynomial& rhs,
                        const MultiplyOptions& options = {});

/// Product of `factors` left to right.
TrigPolynomial multiply_all(std::span<const TrigPolynomial> factors, const GroupSpec& spec,
                            const MultiplyOptions& options = {});

TrigPolynomial add(const TrigPolynomial& lhs, const TrigPolynomial& rhs);

// -------------------------------------------------------------------------
// Norms and certificates

struct GridOptions {
  int grid_multiplier = 8;
  std::size_t max_points = std::size_t{1} << 26;
};

struct SupNormBound {
  double lower = 0.0;  // attained at `witness`
  double upper = 0.0;  // certified when `certified`
  DualPoint witness;
  std::size_t grid_size = 0;         // total sample points
  std::vector<std::int64_t> grid;    // points per free coordinate
  std::vector<double> half_spread;   // (max - min frequency) / 2 per free coordinate
  bool certified = false;
};

/// Grid maximum of |P| plus the Bernstein-type certificate
/// upper = lower / (1 - Σ_j π N_j / M_j), where N_j is the half spread of the
/// frequencies in coordinate j and M_j = ceil(grid_multiplier · N_j). Torsion
/// coordinates are enumerated exhaustively. Ranks above 2 fall back to a
/// seeded random sample and report certified = false.
SupNormBound sup_norm_bounds(const TrigPolynomial& p, const GridOptions& options = {});

struct LpNorm {
  double value = 0.0;
  double exponent = 0.0;
  std::int64_t points_per_coordinate = 0;
  std::size_t grid_size = 0;
};

/// (mean over a uniform grid of |P|^p)^{1/p}. Exact for even integer p once
/// the grid exceeds p times the frequency spread.
LpNorm lp_norm(const TrigPolynomial& p, double exponent, std::int64_t points_per_coordinate,
               std::size_t max_points = std::size_t{1} << 26);

struct NonnegativityCertificate {
  double min_sampled = 0.0;            // minimum of Re P over the base grid
  DualPoint argmin;
  std::optional<double> lower_bound;   // certified lower bound on min P, when the search completed
  bool certified = false;              // lower_bound >= -tolerance
  double tolerance = 0.0;
  std::vector<std::int64_t> grid;
  std::size_t cells_examined = 0;
  int max_depth_reached = 0;
};

struct NonnegativityOptions {
  double tolerance = 1e-9;
  int grid_multiplier = 8;
  int max_depth = 40;
  std::size_t max_cells = 50'000'000;
  std::size_t max_points = std::size_t{1} << 26;
};

/// Certifies min_x P(x) >= -tolerance for a real-valued P of free rank <= 2.
///
/// Cells of a uniform grid are bounded with a second-order Taylor expansion
/// at the cell centre (exact minimum of the quadratic over the cell) plus the
/// third-order remainder (2π)³/6 · Σ|P̂(γ)| (Σ_j |γ_j| h_j)³; cells whose
/// bound is below -tolerance are bisected until they are certified, shown
/// negative, or the depth limit is reached. Throws DomainError when P is not
/// real-valued.
NonnegativityCertificate is_nonnegative(const TrigPolynomial& p, const NonnegativityOptions& options = {});

// -------------------------------------------------------------------------
// Peak polynomials

enum class PeakKind {
  // q = truncated Fourier series of the unit-mass triangle of half-width 1/n,
  // then p = (q + η/2) / (q̂(0) + η/2).
  triangle,
  // Minimal-degree Fejér kernel with p̂(1) >= 1/(1+ε).
  fejer,
};

std::string to_string(PeakKind kind);
PeakKind peak_kind_from_string(const std::string& name);

struct PeakPolynomial {
  PeakKind kind = PeakKind::triangle;
  double epsilon = 0.0;
  int degree = 0;                     // N
  std::vector<double> coefficients;   // p̂(m) for m = -N..N at index m + N
  std::optional<double> eta;          // triangle only
  std::optional<int> triangle_width;  // triangle only: n, support [-1/n, 1/n]
  std::optional<double> tail_mass;    // triangle only: Σ_{|k|>N} f̂(k)

  double coefficient(int m) const;
  TrigPolynomial polynomial() const;  // on ℤ
};

/// Fourier coefficient of the triangle x ↦ max(0, n - n²|x|) on [-1/2, 1/2).
double triangle_coefficient(int n, long k);

PeakPolynomial build_peak_polynomial(double epsilon, PeakKind kind = PeakKind::triangle);

/// ∏_{γ∈F} (1 + w Σ_{k=1}^{n} (γ^k + γ^{-k})). Its coefficient at the
/// identity is Σ_ξ w^{|supp ξ|} over exponent vectors ξ ∈ {-n..n}^F with
/// Σ ξ_γ γ = 0.
TrigPolynomial relation_product(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                                double weight, const MultiplyOptions& options = {});

}  // namespace sidonlab
