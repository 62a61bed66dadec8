#include "sidonlab/polynomial.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <unordered_map>

#include "sidonlab/errors.hpp"

namespace sidonlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex unit(double turns) {
  const double a = kTwoPi * turns;
  return {std::cos(a), std::sin(a)};
}

GroupElement combine_unchecked(const GroupSpec& spec, const GroupElement& a, const GroupElement& b) {
  std::vector<Integer> free(a.free().size());
  for (std::size_t i = 0; i < free.size(); ++i) free[i] = a.free()[i] + b.free()[i];
  std::vector<std::int64_t> torsion(a.torsion().size());
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    torsion[i] = (a.torsion()[i] + b.torsion()[i]) % spec.moduli()[i];
  }
  return GroupElement(std::move(free), std::move(torsion));
}

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Terms flattened into machine integers for grid work.
struct Compiled {
  std::size_t rank = 0;
  std::vector<std::int64_t> moduli;
  std::vector<Complex> coeff;
  std::vector<std::array<std::int64_t, 2>> freq;
  std::vector<std::vector<std::int64_t>> tau;
  std::array<std::int64_t, 2> fmin{0, 0};
  std::array<std::int64_t, 2> fmax{0, 0};
  std::array<std::int64_t, 2> fabs_max{0, 0};
  double coeff_l1 = 0.0;
};

Compiled compile(const TrigPolynomial& p) {
  const auto& spec = p.spec();
  if (spec.free_rank() > 2) throw ConfigError("grid evaluation supports free rank <= 2");
  Compiled c;
  c.rank = spec.free_rank();
  c.moduli = spec.moduli();
  const Integer limit = Integer(1) << 60;
  bool first = true;
  for (const auto& t : p.terms()) {
    std::array<std::int64_t, 2> f{0, 0};
    for (std::size_t j = 0; j < c.rank; ++j) {
      const auto& v = t.element.free()[j];
      if (abs(v) >= limit) throw ResourceError("frequency magnitude exceeds 2^60 grid evaluation range");
      f[j] = v.convert_to<std::int64_t>();
    }
    for (std::size_t j = 0; j < c.rank; ++j) {
      c.fmin[j] = first ? f[j] : std::min(c.fmin[j], f[j]);
      c.fmax[j] = first ? f[j] : std::max(c.fmax[j], f[j]);
      c.fabs_max[j] = std::max(c.fabs_max[j], f[j] < 0 ? -f[j] : f[j]);
    }
    first = false;
    c.coeff.push_back(t.coefficient);
    c.freq.push_back(f);
    c.tau.push_back(t.element.torsion());
    c.coeff_l1 += std::abs(t.coefficient);
  }
  return c;
}

std::size_t torsion_points(const std::vector<std::int64_t>& moduli, std::size_t cap) {
  std::size_t total = 1;
  for (auto p : moduli) {
    if (total > cap / static_cast<std::size_t>(p)) throw ResourceError("torsion enumeration exceeds point cap");
    total *= static_cast<std::size_t>(p);
  }
  return total;
}

// Walks every (torsion tuple, free grid point) and hands the visitor the
// per-term phase factors γ(x). Grid point k_j sits at x_j = k_j / M_j.
template <class Visit>
void for_each_grid_point(const Compiled& cp, const std::array<std::int64_t, 2>& grid, std::size_t max_points,
                         Visit&& visit) {
  const std::size_t nterms = cp.coeff.size();
  const std::size_t tpoints = torsion_points(cp.moduli, max_points);
  std::size_t fpoints = 1;
  for (std::size_t j = 0; j < cp.rank; ++j) fpoints *= static_cast<std::size_t>(grid[j]);
  if (fpoints > max_points / tpoints) {
    throw ResourceError("grid of " + std::to_string(fpoints) + "x" + std::to_string(tpoints) +
                        " points exceeds cap " + std::to_string(max_points));
  }
  std::array<std::vector<Complex>, 2> table;
  std::array<std::vector<std::int64_t>, 2> step;
  for (std::size_t j = 0; j < cp.rank; ++j) {
    const auto m = grid[j];
    table[j].resize(static_cast<std::size_t>(m));
    for (std::int64_t r = 0; r < m; ++r) {
      table[j][static_cast<std::size_t>(r)] = unit(static_cast<double>(r) / static_cast<double>(m));
    }
    step[j].resize(nterms);
    for (std::size_t t = 0; t < nterms; ++t) step[j][t] = mod_floor(cp.freq[t][j], m);
  }

  std::vector<std::int64_t> z(cp.moduli.size(), 0);
  std::vector<Complex> torsion_factor(nterms), row_factor(nterms), phase(nterms);
  std::vector<std::int64_t> r0(nterms), r1(nterms);
  std::array<std::int64_t, 2> k{0, 0};
  for (std::size_t tp = 0; tp < tpoints; ++tp) {
    for (std::size_t t = 0; t < nterms; ++t) {
      long double turns = 0.0L;
      for (std::size_t i = 0; i < z.size(); ++i) {
        const auto p = cp.moduli[i];
        turns += static_cast<long double>((static_cast<__int128>(cp.tau[t][i]) * z[i]) % p) /
                 static_cast<long double>(p);
      }
      turns -= std::floor(turns);
      torsion_factor[t] = unit(static_cast<double>(turns));
    }
    const std::int64_t rows = cp.rank >= 2 ? grid[1] : 1;
    std::fill(r1.begin(), r1.end(), 0);
    for (k[1] = 0; k[1] < rows; ++k[1]) {
      for (std::size_t t = 0; t < nterms; ++t) {
        row_factor[t] = cp.rank >= 2 ? torsion_factor[t] * table[1][static_cast<std::size_t>(r1[t])]
                                     : torsion_factor[t];
      }
      const std::int64_t cols = cp.rank >= 1 ? grid[0] : 1;
      std::fill(r0.begin(), r0.end(), 0);
      for (k[0] = 0; k[0] < cols; ++k[0]) {
        for (std::size_t t = 0; t < nterms; ++t) {
          phase[t] = cp.rank >= 1 ? row_factor[t] * table[0][static_cast<std::size_t>(r0[t])] : row_factor[t];
        }
        visit(z, k, phase);
        if (cp.rank >= 1) {
          for (std::size_t t = 0; t < nterms; ++t) {
            r0[t] += step[0][t];
            if (r0[t] >= grid[0]) r0[t] -= grid[0];
          }
        }
      }
      if (cp.rank >= 2) {
        for (std::size_t t = 0; t < nterms; ++t) {
          r1[t] += step[1][t];
          if (r1[t] >= grid[1]) r1[t] -= grid[1];
        }
      }
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (++z[i] < cp.moduli[i]) break;
      z[i] = 0;
    }
  }
}

DualPoint grid_point(const GroupSpec& spec, const std::vector<std::int64_t>& z, const std::array<std::int64_t, 2>& k,
                     const std::array<std::int64_t, 2>& grid) {
  DualPoint x;
  for (std::size_t j = 0; j < spec.free_rank(); ++j) {
    x.free.push_back(static_cast<double>(k[j]) / static_cast<double>(grid[j]));
  }
  x.torsion = z;
  return x;
}

void check_multiplier(int grid_multiplier) {
  if (grid_multiplier <= 4) {
    throw ConfigError("grid_multiplier must exceed 4 (got " + std::to_string(grid_multiplier) +
                      "); the certificate would be vacuous");
  }
}

std::vector<DualPoint> random_points(const GroupSpec& spec, std::size_t count) {
  std::mt19937_64 rng(0x5151D0AB5EEDULL);
  std::vector<DualPoint> pts;
  pts.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    DualPoint x;
    for (std::size_t j = 0; j < spec.free_rank(); ++j) x.free.push_back(static_cast<double>(rng() >> 11) * 0x1.0p-53);
    for (auto p : spec.moduli()) x.torsion.push_back(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p)));
    pts.push_back(std::move(x));
  }
  return pts;
}

}  // namespace

// ---------------------------------------------------------------------------
// TrigPolynomial

TrigPolynomial TrigPolynomial::from_terms(GroupSpec spec, std::vector<Term> terms, double prune_threshold) {
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index;
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (auto& t : terms) {
    spec.check(t.element);
    auto [it, inserted] = index.try_emplace(t.element, merged.size());
    if (inserted) {
      merged.push_back(std::move(t));
    } else {
      merged[it->second].coefficient += t.coefficient;
    }
  }
  TrigPolynomial out(std::move(spec));
  out.prune_threshold_ = prune_threshold;
  for (auto& t : merged) {
    const double mag = std::abs(t.coefficient);
    if (mag == 0.0 || mag <= prune_threshold) continue;
    out.terms_.push_back(std::move(t));
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const Term& a, const Term& b) { return a.element < b.element; });
  return out;
}

TrigPolynomial TrigPolynomial::constant(GroupSpec spec, Complex value) {
  auto id = spec.identity();
  return from_terms(std::move(spec), {Term{std::move(id), value}});
}

TrigPolynomial TrigPolynomial::monomial(GroupSpec spec, GroupElement element, Complex value) {
  return from_terms(std::move(spec), {Term{std::move(element), value}});
}

Complex TrigPolynomial::coefficient(const GroupElement& gamma) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), gamma,
                             [](const Term& t, const GroupElement& g) { return t.element < g; });
  if (it != terms_.end() && it->element == gamma) return it->coefficient;
  return 0.0;
}

Complex TrigPolynomial::evaluate(const DualPoint& x) const {
  Complex sum = 0.0;
  for (const auto& t : terms_) sum += t.coefficient * spec_.evaluate(t.element, x);
  return sum;
}

bool TrigPolynomial::is_real_valued(double tolerance) const {
  for (const auto& t : terms_) {
    const Complex mirror = coefficient(spec_.inverse(t.element));
    if (std::abs(mirror - std::conj(t.coefficient)) > tolerance) return false;
  }
  return true;
}

double TrigPolynomial::coefficient_l1() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coefficient);
  return s;
}

double TrigPolynomial::l2_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::norm(t.coefficient);
  return std::sqrt(s);
}

TrigPolynomial TrigPolynomial::scaled(Complex factor) const {
  std::vector<Term> terms = terms_;
  for (auto& t : terms) t.coefficient *= factor;
  return from_terms(spec_, std::move(terms), prune_threshold_);
}

TrigPolynomial multiply(const TrigPolynomial& lhs, const TrigPolynomial& rhs, const MultiplyOptions& options) {
  require_same_spec(lhs.spec(), rhs.spec());
  const auto& spec = lhs.spec();
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index;
  std::vector<Term> acc;
  const std::size_t guess = std::min(options.max_terms, lhs.size() * rhs.size());
  index.reserve(guess);
  acc.reserve(guess);
  for (const auto& a : lhs.terms()) {
    for (const auto& b : rhs.terms()) {
      auto key = combine_unchecked(spec, a.element, b.element);
      auto [it, inserted] = index.try_emplace(key, acc.size());
      if (inserted) {
        if (acc.size() >= options.max_terms) {
          throw ResourceError("product support exceeds the configured cap of " +
                              std::to_string(options.max_terms) + " terms");
        }
        acc.push_back(Term{std::move(key), a.coefficient * b.coefficient});
      } else {
        acc[it->second].coefficient += a.coefficient * b.coefficient;
      }
    }
  }
  return TrigPolynomial::from_terms(spec, std::move(acc), options.prune_threshold);
}

TrigPolynomial multiply_all(std::span<const TrigPolynomial> factors, const GroupSpec& spec,
                            const MultiplyOptions& options) {
  auto product = TrigPolynomial::constant(spec, 1.0);
  for (const auto& f : factors) product = multiply(product, f, options);
  return product;
}

TrigPolynomial add(const TrigPolynomial& lhs, const TrigPolynomial& rhs) {
  require_same_spec(lhs.spec(), rhs.spec());
  std::vector<Term> terms = lhs.terms();
  terms.insert(terms.end(), rhs.terms().begin(), rhs.terms().end());
  return TrigPolynomial::from_terms(lhs.spec(), std::move(terms));
}

// ---------------------------------------------------------------------------
// Norms

SupNormBound sup_norm_bounds(const TrigPolynomial& p, const GridOptions& options) {
  check_multiplier(options.grid_multiplier);
  const auto& spec = p.spec();
  SupNormBound out;
  if (p.empty()) {
    out.witness = spec.point(std::vector<double>(spec.free_rank(), 0.0),
                             std::vector<std::int64_t>(spec.torsion_rank(), 0));
    out.certified = spec.free_rank() <= 2;
    out.grid.assign(spec.free_rank(), 1);
    out.half_spread.assign(spec.free_rank(), 0.0);
    out.grid_size = 1;
    return out;
  }

  if (spec.free_rank() > 2) {
    const auto pts = random_points(spec, std::min<std::size_t>(options.max_points, 1 << 16));
    for (const auto& x : pts) {
      const double v = std::abs(p.evaluate(x));
      if (v > out.lower) {
        out.lower = v;
        out.witness = x;
      }
    }
    out.upper = out.lower;
    out.grid_size = pts.size();
    out.certified = false;
    return out;
  }

  const auto cp = compile(p);
  std::array<std::int64_t, 2> grid{1, 1};
  double slack = 0.0;
  for (std::size_t j = 0; j < cp.rank; ++j) {
    const double half = static_cast<double>(cp.fmax[j] - cp.fmin[j]) / 2.0;
    out.half_spread.push_back(half);
    grid[j] = half > 0 ? static_cast<std::int64_t>(std::ceil(options.grid_multiplier * half)) : 1;
    out.grid.push_back(grid[j]);
    slack += std::numbers::pi * half / static_cast<double>(grid[j]);
  }
  if (slack >= 1.0) throw ConfigError("grid too coarse for a Bernstein certificate in this rank");

  double best = -1.0;
  std::vector<std::int64_t> best_z;
  std::array<std::int64_t, 2> best_k{0, 0};
  std::size_t count = 0;
  for_each_grid_point(cp, grid, options.max_points,
                      [&](const std::vector<std::int64_t>& z, const std::array<std::int64_t, 2>& k,
                          const std::vector<Complex>& phase) {
                        Complex sum = 0.0;
                        for (std::size_t t = 0; t < phase.size(); ++t) sum += cp.coeff[t] * phase[t];
                        const double v = std::abs(sum);
                        ++count;
                        if (v > best) {
                          best = v;
                          best_z = z;
                          best_k = k;
                        }
                      });
  out.lower = best;
  out.upper = best / (1.0 - slack);
  out.witness = grid_point(spec, best_z, best_k, grid);
  out.grid_size = count;
  out.certified = true;
  return out;
}

LpNorm lp_norm(const TrigPolynomial& p, double exponent, std::int64_t points_per_coordinate, std::size_t max_points) {
  if (!(exponent >= 1.0)) throw ConfigError("lp_norm exponent must be >= 1");
  if (points_per_coordinate < 1) throw ConfigError("lp_norm needs at least one point per coordinate");
  LpNorm out;
  out.exponent = exponent;
  out.points_per_coordinate = points_per_coordinate;
  if (p.empty()) return out;
  const auto cp = compile(p);
  std::array<std::int64_t, 2> grid{points_per_coordinate, points_per_coordinate};
  long double acc = 0.0L;
  std::size_t count = 0;
  for_each_grid_point(cp, grid, max_points,
                      [&](const std::vector<std::int64_t>&, const std::array<std::int64_t, 2>&,
                          const std::vector<Complex>& phase) {
                        Complex sum = 0.0;
                        for (std::size_t t = 0; t < phase.size(); ++t) sum += cp.coeff[t] * phase[t];
                        acc += std::pow(static_cast<long double>(std::abs(sum)), static_cast<long double>(exponent));
                        ++count;
                      });
  out.grid_size = count;
  out.value = static_cast<double>(std::pow(acc / static_cast<long double>(count), 1.0L / exponent));
  return out;
}

// ---------------------------------------------------------------------------
// Nonnegativity

namespace {

struct Taylor {
  double value = 0.0;
  std::array<double, 2> grad{0.0, 0.0};
  std::array<std::array<double, 2>, 2> hess{};
};

Taylor taylor_from_phase(const Compiled& cp, const std::vector<Complex>& phase) {
  Taylor tl;
  for (std::size_t t = 0; t < phase.size(); ++t) {
    const Complex z = cp.coeff[t] * phase[t];
    tl.value += z.real();
    for (std::size_t j = 0; j < cp.rank; ++j) {
      const double fj = static_cast<double>(cp.freq[t][j]);
      tl.grad[j] -= kTwoPi * fj * z.imag();
      for (std::size_t k = 0; k <= j; ++k) {
        tl.hess[j][k] -= kTwoPi * kTwoPi * fj * static_cast<double>(cp.freq[t][k]) * z.real();
      }
    }
  }
  if (cp.rank == 2) tl.hess[0][1] = tl.hess[1][0];
  return tl;
}

// min over t in [-h, h] of a + g t + ½ c t²
double min_quadratic_1d(double a, double g, double c, double h) {
  double best = std::min(a - g * h + 0.5 * c * h * h, a + g * h + 0.5 * c * h * h);
  if (c > 0.0) {
    const double t = -g / c;
    if (std::abs(t) <= h) best = std::min(best, a + g * t + 0.5 * c * t * t);
  }
  return best;
}

// min over the box |t_j| <= h_j of value + grad·t + ½ tᵀ H t
double min_quadratic_box(const Taylor& tl, std::size_t rank, const std::array<double, 2>& h) {
  if (rank == 0) return tl.value;
  if (rank == 1) return min_quadratic_1d(tl.value, tl.grad[0], tl.hess[0][0], h[0]);
  double best = std::numeric_limits<double>::infinity();
  for (int s : {-1, 1}) {
    // t0 = s h0, free t1
    const double t0 = s * h[0];
    best = std::min(best, min_quadratic_1d(tl.value + tl.grad[0] * t0 + 0.5 * tl.hess[0][0] * t0 * t0,
                                           tl.grad[1] + tl.hess[1][0] * t0, tl.hess[1][1], h[1]));
    const double t1 = s * h[1];
    best = std::min(best, min_quadratic_1d(tl.value + tl.grad[1] * t1 + 0.5 * tl.hess[1][1] * t1 * t1,
                                           tl.grad[0] + tl.hess[0][1] * t1, tl.hess[0][0], h[0]));
  }
  const double det = tl.hess[0][0] * tl.hess[1][1] - tl.hess[0][1] * tl.hess[1][0];
  if (tl.hess[0][0] > 0.0 && det > 0.0) {
    const double t0 = -(tl.hess[1][1] * tl.grad[0] - tl.hess[0][1] * tl.grad[1]) / det;
    const double t1 = -(-tl.hess[1][0] * tl.grad[0] + tl.hess[0][0] * tl.grad[1]) / det;
    if (std::abs(t0) <= h[0] && std::abs(t1) <= h[1]) {
      best = std::min(best, tl.value + tl.grad[0] * t0 + tl.grad[1] * t1 +
                                0.5 * (tl.hess[0][0] * t0 * t0 + 2.0 * tl.hess[0][1] * t0 * t1 +
                                       tl.hess[1][1] * t1 * t1));
    }
  }
  return best;
}

struct Cell {
  std::array<std::int64_t, 2> num{0, 0};  // centre = num / den
  std::array<std::int64_t, 2> den{1, 1};  // half-width = 1 / den
  int depth = 0;
};

class CellBounder {
 public:
  CellBounder(const Compiled& cp, const std::vector<std::int64_t>& z) : cp_(cp) {
    torsion_turns_.resize(cp.coeff.size());
    for (std::size_t t = 0; t < cp.coeff.size(); ++t) {
      long double turns = 0.0L;
      for (std::size_t i = 0; i < z.size(); ++i) {
        const auto p = cp.moduli[i];
        turns += static_cast<long double>((static_cast<__int128>(cp.tau[t][i]) * z[i]) % p) /
                 static_cast<long double>(p);
      }
      torsion_turns_[t] = turns - std::floor(turns);
    }
    // Σ|c| |f_0|^a |f_1|^b for a + b = 3, used by the cubic remainder.
    for (std::size_t t = 0; t < cp.coeff.size(); ++t) {
      const double m = std::abs(cp.coeff[t]);
      const double f0 = std::abs(static_cast<double>(cp.freq[t][0]));
      const double f1 = std::abs(static_cast<double>(cp.freq[t][1]));
      cubic_[0] += m * f0 * f0 * f0;
      cubic_[1] += m * f0 * f0 * f1;
      cubic_[2] += m * f0 * f1 * f1;
      cubic_[3] += m * f1 * f1 * f1;
      fsum_ = std::max(fsum_, f0 + f1);
    }
  }

  Taylor taylor(const Cell& cell) const {
    std::vector<Complex> phase(cp_.coeff.size());
    for (std::size_t t = 0; t < phase.size(); ++t) {
      long double turns = torsion_turns_[t];
      for (std::size_t j = 0; j < cp_.rank; ++j) {
        const auto den = cell.den[j];
        const auto f = static_cast<__int128>(mod_floor(cp_.freq[t][j], den));
        turns += static_cast<long double>(static_cast<std::int64_t>((f * cell.num[j]) % den)) /
                 static_cast<long double>(den);
      }
      turns -= std::floor(turns);
      phase[t] = unit(static_cast<double>(turns));
    }
    return taylor_from_phase(cp_, phase);
  }

  double bound(const Cell& cell, const Taylor& tl) const {
    std::array<double, 2> h{0.0, 0.0};
    for (std::size_t j = 0; j < cp_.rank; ++j) h[j] = 1.0 / static_cast<double>(cell.den[j]);
    const double remainder = std::pow(kTwoPi, 3) / 6.0 *
                             (cubic_[0] * h[0] * h[0] * h[0] + 3.0 * cubic_[1] * h[0] * h[0] * h[1] +
                              3.0 * cubic_[2] * h[0] * h[1] * h[1] + cubic_[3] * h[1] * h[1] * h[1]);
    const double reach = kTwoPi * fsum_ * std::max(h[0], h[1]);
    const double rounding = 16.0 * static_cast<double>(cp_.coeff.size() + 4) * DBL_EPSILON *
                            cp_.coeff_l1 * (1.0 + reach + reach * reach);
    return min_quadratic_box(tl, cp_.rank, h) - remainder - rounding;
  }

 private:
  const Compiled& cp_;
  std::vector<long double> torsion_turns_;
  std::array<double, 4> cubic_{0.0, 0.0, 0.0, 0.0};
  double fsum_ = 0.0;
};

}  // namespace

NonnegativityCertificate is_nonnegative(const TrigPolynomial& p, const NonnegativityOptions& options) {
  check_multiplier(options.grid_multiplier);
  const auto& spec = p.spec();
  const double real_tol = 1e-12 * std::max(1.0, p.coefficient_l1());
  if (!p.is_real_valued(real_tol)) throw DomainError("nonnegativity needs a real-valued polynomial");

  NonnegativityCertificate out;
  out.tolerance = options.tolerance;
  if (p.empty()) {
    out.argmin = spec.point(std::vector<double>(spec.free_rank(), 0.0),
                            std::vector<std::int64_t>(spec.torsion_rank(), 0));
    out.lower_bound = 0.0;
    out.certified = true;
    return out;
  }

  if (spec.free_rank() > 2) {
    const auto pts = random_points(spec, std::min<std::size_t>(options.max_points, 1 << 16));
    out.min_sampled = std::numeric_limits<double>::infinity();
    for (const auto& x : pts) {
      const double v = p.evaluate(x).real();
      if (v < out.min_sampled) {
        out.min_sampled = v;
        out.argmin = x;
      }
    }
    out.certified = false;
    return out;
  }

  const auto cp = compile(p);
  std::array<std::int64_t, 2> grid{1, 1};
  for (std::size_t j = 0; j < cp.rank; ++j) {
    grid[j] = cp.fabs_max[j] > 0 ? options.grid_multiplier * cp.fabs_max[j] : 1;
    out.grid.push_back(grid[j]);
  }

  // Base pass: sample every grid centre, keep the cells that need refinement.
  struct Pending {
    std::vector<std::int64_t> z;
    Cell cell;
  };
  std::vector<Pending> pending;
  double certified_min = std::numeric_limits<double>::infinity();
  out.min_sampled = std::numeric_limits<double>::infinity();
  bool negative = false;
  std::map<std::vector<std::int64_t>, CellBounder> bounders;
  for_each_grid_point(cp, grid, options.max_points,
                      [&](const std::vector<std::int64_t>& z, const std::array<std::int64_t, 2>& k,
                          const std::vector<Complex>& phase) {
                        const auto tl = taylor_from_phase(cp, phase);
                        if (tl.value < out.min_sampled) {
                          out.min_sampled = tl.value;
                          out.argmin = grid_point(spec, z, k, grid);
                        }
                        Cell cell;
                        for (std::size_t j = 0; j < cp.rank; ++j) {
                          cell.den[j] = 2 * grid[j];
                          cell.num[j] = 2 * k[j];
                        }
                        auto it = bounders.find(z);
                        if (it == bounders.end()) it = bounders.emplace(z, CellBounder(cp, z)).first;
                        const double b = it->second.bound(cell, tl);
                        ++out.cells_examined;
                        if (b >= -options.tolerance) {
                          certified_min = std::min(certified_min, b);
                        } else {
                          if (tl.value < -options.tolerance) negative = true;
                          pending.push_back(Pending{z, cell});
                        }
                      });
  if (negative) return out;

  int depth_cap = options.max_depth;
  for (std::size_t j = 0; j < cp.rank; ++j) {
    int room = 0;
    for (auto d = 2 * grid[j]; d < (std::int64_t{1} << 61); d *= 2) ++room;
    depth_cap = std::min(depth_cap, room);
  }

  std::vector<Pending> stack;
  for (auto& item : pending) {
    const auto& bounder = bounders.at(item.z);
    stack.clear();
    stack.push_back(item);
    while (!stack.empty()) {
      auto cur = std::move(stack.back());
      stack.pop_back();
      if (cur.cell.depth >= depth_cap || out.cells_examined >= options.max_cells) {
        out.lower_bound.reset();
        return out;
      }
      // Bisect along every coordinate the polynomial depends on.
      std::vector<Cell> children{cur.cell};
      for (std::size_t j = 0; j < cp.rank; ++j) {
        if (cp.fabs_max[j] == 0) continue;
        std::vector<Cell> next;
        for (const auto& c : children) {
          for (int s : {-1, 1}) {
            Cell child = c;
            child.den[j] = 2 * c.den[j];
            child.num[j] = 2 * c.num[j] + s;
            next.push_back(child);
          }
        }
        children = std::move(next);
      }
      for (auto& child : children) {
        child.depth = cur.cell.depth + 1;
        out.max_depth_reached = std::max(out.max_depth_reached, child.depth);
        const auto tl = bounder.taylor(child);
        ++out.cells_examined;
        if (tl.value < out.min_sampled) out.min_sampled = tl.value;
        if (tl.value < -options.tolerance) return out;
        const double b = bounder.bound(child, tl);
        if (b >= -options.tolerance) {
          certified_min = std::min(certified_min, b);
        } else {
          stack.push_back(Pending{cur.z, child});
        }
      }
    }
  }
  out.lower_bound = certified_min;
  out.certified = true;
  return out;
}

// ---------------------------------------------------------------------------
// Peak polynomials

std::string to_string(PeakKind kind) { return kind == PeakKind::triangle ? "triangle" : "fejer"; }

PeakKind peak_kind_from_string(const std::string& name) {
  if (name == "triangle") return PeakKind::triangle;
  if (name == "fejer") return PeakKind::fejer;
  throw ConfigError("unknown peak construction '" + name + "' (expected triangle or fejer)");
}

double PeakPolynomial::coefficient(int m) const {
  if (m < -degree || m > degree) return 0.0;
  return coefficients[static_cast<std::size_t>(m + degree)];
}

TrigPolynomial PeakPolynomial::polynomial() const {
  const auto spec = GroupSpec::integers();
  std::vector<Term> terms;
  for (int m = -degree; m <= degree; ++m) terms.push_back(Term{spec.scalar(m), coefficient(m)});
  return TrigPolynomial::from_terms(spec, std::move(terms));
}

double triangle_coefficient(int n, long k) {
  if (k == 0) return 1.0;
  const double s = std::sin(std::numbers::pi * static_cast<double>(k) / n);
  const double d = std::numbers::pi * static_cast<double>(k);
  return static_cast<double>(n) * n * s * s / (d * d);
}

PeakPolynomial build_peak_polynomial(double epsilon, PeakKind kind) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("peak polynomial needs epsilon > 0");
  PeakPolynomial out;
  out.kind = kind;
  out.epsilon = epsilon;

  if (kind == PeakKind::fejer) {
    // 1 - 1/(N+1) >= 1/(1+ε)  <=>  N ε >= 1
    int n = std::max(1, static_cast<int>(std::floor(1.0 / epsilon)));
    while (n * epsilon < 1.0) ++n;
    out.degree = n;
    out.coefficients.resize(static_cast<std::size_t>(2 * n + 1));
    for (int m = -n; m <= n; ++m) {
      out.coefficients[static_cast<std::size_t>(m + n)] =
          static_cast<double>(n + 1 - std::abs(m)) / static_cast<double>(n + 1);
    }
    return out;
  }

  // (1-η)/(1+η) = 1/(1+ε)
  const double eta = epsilon / (2.0 + epsilon);
  // |e^{2πit} - 1| = 2|sin(πt)| < η/2 on [-1/n, 1/n]  <=>  π/n < asin(η/4)
  const int width = static_cast<int>(std::floor(std::numbers::pi / std::asin(eta / 4.0))) + 1;
  const double half_eta = eta / 2.0;
  // All f̂(k) >= 0 and Σ_k f̂(k) = f(0) = n, so the sup-norm truncation error
  // equals the discarded tail n - Σ_{|k|<=N} f̂(k).
  long double kept = 1.0L;
  int degree = 0;
  constexpr int kMaxDegree = 50'000'000;
  while (static_cast<long double>(width) - kept >= half_eta) {
    ++degree;
    if (degree > kMaxDegree) throw ResourceError("peak polynomial degree exceeds 5e7");
    kept += 2.0L * triangle_coefficient(width, degree);
  }
  out.degree = degree;
  out.eta = eta;
  out.triangle_width = width;
  out.tail_mass = static_cast<double>(static_cast<long double>(width) - kept);
  out.coefficients.resize(static_cast<std::size_t>(2 * degree + 1));
  const double norm = 1.0 + half_eta;  // q̂(0) = f̂(0) = 1
  for (int m = -degree; m <= degree; ++m) {
    out.coefficients[static_cast<std::size_t>(m + degree)] =
        m == 0 ? 1.0 : triangle_coefficient(width, std::abs(m)) / norm;
  }
  return out;
}

TrigPolynomial relation_product(const GroupSpec& spec, std::span<const GroupElement> elements, int n, double weight,
                                const MultiplyOptions& options) {
  if (n < 1) throw DomainError("relation degree must be >= 1");
  auto product = TrigPolynomial::constant(spec, 1.0);
  for (const auto& g : canonical_set(elements)) {
    std::vector<Term> terms{Term{spec.identity(), 1.0}};
    for (int k = 1; k <= n; ++k) {
      terms.push_back(Term{spec.power(g, k), weight});
      terms.push_back(Term{spec.power(g, -k), weight});
    }
    product = multiply(product, TrigPolynomial::from_terms(spec, std::move(terms)), options);
  }
  return product;
}

}  // namespace sidonlab
