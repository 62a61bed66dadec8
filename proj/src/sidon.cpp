#include "sidonlab/sidon.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "sidonlab/errors.hpp"
#include "sidonlab/parallel.hpp"
#include "sidonlab/random.hpp"

namespace sidonlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Scored {
  double ratio = 0.0;
  std::vector<Complex> a;
  SupNormBound sup;
  bool certified = false;
};

class LowerObjective {
 public:
  LowerObjective(const GroupSpec& spec, const std::vector<GroupElement>& elements, const LowerBoundOptions& options)
      : spec_(spec), elements_(elements), grid_{options.grid_multiplier, options.max_points} {}

  Scored score(std::vector<Complex> a) const {
    std::vector<Term> terms;
    double mass = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == Complex(0.0)) continue;
      terms.push_back(Term{elements_[i], a[i]});
      mass += std::abs(a[i]);
    }
    Scored s;
    s.a = std::move(a);
    if (terms.empty()) return s;
    s.sup = sup_norm_bounds(TrigPolynomial::from_terms(spec_, std::move(terms)), grid_);
    s.certified = s.sup.certified;
    s.ratio = s.sup.upper > 0.0 ? mass / s.sup.upper : 0.0;
    return s;
  }

 private:
  const GroupSpec& spec_;
  const std::vector<GroupElement>& elements_;
  GridOptions grid_;
};

bool better(const Scored& a, const Scored& b) { return a.ratio > b.ratio; }

Scored descend(const LowerObjective& objective, Scored start, std::size_t rounds) {
  double phase_step = 0.4, mag_step = 0.3;
  for (std::size_t round = 0; round < rounds && phase_step > 1e-5; ++round) {
    bool improved = false;
    for (std::size_t i = 0; i < start.a.size(); ++i) {
      const Complex moves[] = {std::polar(1.0, phase_step), std::polar(1.0, -phase_step), Complex(1.0 + mag_step),
                               Complex(1.0 - mag_step)};
      for (const auto& mv : moves) {
        if (start.a[i] == Complex(0.0)) break;
        auto b = start.a;
        b[i] *= mv;
        auto s = objective.score(std::move(b));
        if (s.ratio > start.ratio * (1.0 + 1e-14)) {
          start = std::move(s);
          improved = true;
        }
      }
    }
    if (!improved) {
      phase_step /= 2.0;
      mag_step /= 2.0;
    }
  }
  return start;
}

}  // namespace

SidonEstimate sidon_lower_bound(const GroupSpec& spec, std::span<const GroupElement> elements,
                                const LowerBoundOptions& options) {
  SidonEstimate out;
  out.method = "certified grid search";
  out.elements = canonical_set(elements);
  for (const auto& g : out.elements) spec.check(g);
  const std::size_t size = out.elements.size();
  if (size == 0) return out;

  std::vector<std::vector<Complex>> candidates;
  {
    std::vector<Complex> indicator(size, 0.0);
    indicator[0] = 1.0;
    candidates.push_back(std::move(indicator));
  }
  if (size <= options.max_sign_elements) {
    const std::size_t count = std::size_t{1} << (size - 1);  // a and -a are equivalent
    for (std::size_t mask = 0; mask < count; ++mask) {
      std::vector<Complex> a(size);
      for (std::size_t i = 0; i < size; ++i) a[i] = (i > 0 && (mask >> (i - 1) & 1U)) ? -1.0 : 1.0;
      candidates.push_back(std::move(a));
    }
  }
  for (std::size_t t = 0; t < options.trials; ++t) {
    Rng rng(options.seed, t);
    std::vector<Complex> a(size);
    for (auto& v : a) v = rng.unimodular();
    candidates.push_back(std::move(a));
  }
  for (const auto& w : options.witness_pool) {
    std::vector<Complex> a(size, 0.0);
    for (const auto& term : w) {
      const auto it = std::lower_bound(out.elements.begin(), out.elements.end(), term.element);
      if (it == out.elements.end() || !(*it == term.element)) {
        throw StructuralError("witness element " + term.element.to_string() + " is not in the set");
      }
      a[static_cast<std::size_t>(it - out.elements.begin())] += term.coefficient;
    }
    candidates.push_back(std::move(a));
  }

  const LowerObjective objective(spec, out.elements, options);
  std::vector<Scored> scored(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t i) { scored[i] = objective.score(candidates[i]); });
  out.candidates_evaluated = scored.size();

  std::vector<std::size_t> order(scored.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return better(scored[x], scored[y]); });
  const std::size_t starts = std::min(options.descent_starts, order.size());
  std::vector<Scored> refined(starts);
  parallel_for(starts, [&](std::size_t j) {
    refined[j] = descend(objective, scored[order[j]], options.descent_rounds);
  });

  Scored best = scored[order[0]];
  for (auto& r : refined) {
    if (better(r, best)) best = std::move(r);
  }
  out.lower = best.ratio;
  out.lower_certified = best.certified;
  out.witness = best.a;
  out.witness_sup = best.sup;
  return out;
}

namespace {

SidonEstimate from_family(FamilyCertificate fam) {
  SidonEstimate out;
  out.elements = fam.elements;
  out.upper = fam.bound;
  out.upper_exhaustive = fam.exhaustive_signs;
  out.residual_max = fam.max_residual;
  out.method = fam.construction == "classic" ? "classic Riesz product family" : "peak Riesz product family";
  out.family = std::move(fam);
  return out;
}

}  // namespace

SidonEstimate sidon_upper_bound_via_riesz(const GroupSpec& spec, std::span<const GroupElement> elements,
                                          double epsilon, const FamilyOptions& options, PeakKind kind) {
  return from_family(certify_family(spec, elements, build_peak_polynomial(epsilon, kind), options));
}

SidonEstimate sidon_upper_bound_classic(const GroupSpec& spec, std::span<const GroupElement> elements,
                                        const FamilyOptions& options) {
  return from_family(certify_classic_family(spec, elements, options));
}

SecBound two_element_constant_mod_p(std::int64_t p, int r_steps, int theta_steps) {
  if (p < 2) throw DomainError("two_element_constant_mod_p needs p >= 2");
  if (r_steps < 1 || theta_steps < 1) throw ConfigError("grid steps must be positive");
  const double pd = static_cast<double>(p);
  const auto value = [&](double r, double theta) {
    double worst = 0.0;
    for (std::int64_t k = 0; k < p; ++k) {
      worst = std::max(worst, std::abs(1.0 + std::polar(r, theta + kTwoPi * static_cast<double>(k) / pd)));
    }
    return worst > 0.0 ? (1.0 + r) / worst : 0.0;
  };
  SecBound out;
  out.p = p;
  out.bound = 1.0 / std::cos(std::numbers::pi / (2.0 * pd));
  const double period = kTwoPi / pd;
  for (int i = 0; i <= r_steps; ++i) {
    const double r = static_cast<double>(i) / r_steps;
    for (int j = 0; j < theta_steps; ++j) {
      const double theta = period * j / theta_steps;
      const double v = value(r, theta);
      if (v > out.value) {
        out.value = v;
        out.r = r;
        out.theta = theta;
      }
    }
  }
  double dr = 1.0 / r_steps, dt = period / theta_steps;
  while (dr > 1e-13) {
    bool moved = false;
    constexpr std::array<std::pair<int, int>, 4> kMoves{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    for (const auto& [sr, st] : kMoves) {
      const double r = std::clamp(out.r + sr * dr, 0.0, 1.0);
      const double theta = out.theta + st * dt;
      const double v = value(r, theta);
      if (v > out.value) {
        out.value = v;
        out.r = r;
        out.theta = theta;
        moved = true;
      }
    }
    if (!moved) {
      dr /= 2.0;
      dt /= 2.0;
    }
  }
  out.theta = std::fmod(std::fmod(out.theta, period) + period, period);
  out.holds = out.value >= out.bound - 1e-6;
  return out;
}

PowerSetCheck power_set_constant_check(const GroupSpec& spec, std::span<const GroupElement> elements, std::int64_t m,
                                       std::size_t trials, std::uint64_t seed, int grid_multiplier) {
  if (spec.torsion_rank() > 0) throw DomainError("power set check needs a torsion-free group");
  if (m < 1) throw DomainError("power set check needs m >= 1");
  const auto base = canonical_set(elements);
  std::vector<GroupElement> powered;
  for (const auto& g : base) powered.push_back(spec.power(g, m));
  PowerSetCheck out;
  out.m = m;
  out.trials = trials;
  out.grid_multiplier = grid_multiplier;
  const GridOptions grid{grid_multiplier};
  std::vector<std::array<double, 4>> rows(trials);
  parallel_for(trials, [&](std::size_t t) {
    Rng rng(seed, t);
    std::vector<Term> f, fm;
    double mass = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      const Complex a = (0.1 + rng.uniform()) * rng.unimodular();
      f.push_back({base[i], a});
      fm.push_back({powered[i], a});
      mass += std::abs(a);
    }
    const auto b1 = sup_norm_bounds(TrigPolynomial::from_terms(spec, std::move(f)), grid);
    const auto b2 = sup_norm_bounds(TrigPolynomial::from_terms(spec, std::move(fm)), grid);
    rows[t] = {mass / b1.upper, mass / b2.upper, b1.upper, b2.upper};
  });
  for (const auto& r : rows) {
    out.max_ratio_discrepancy = std::max(out.max_ratio_discrepancy, std::abs(r[0] - r[1]));
    out.max_upper_discrepancy = std::max(out.max_upper_discrepancy, std::abs(r[2] - r[3]) / r[2]);
    out.best_ratio = std::max(out.best_ratio, r[0]);
    out.best_ratio_power = std::max(out.best_ratio_power, r[1]);
  }
  return out;
}

ExpMomentCheck exp_moment_check(const GroupSpec& spec, std::span<const GroupElement> elements,
                                std::span<const double> a, std::size_t points, std::uint64_t seed) {
  if (elements.size() != a.size()) throw StructuralError("coefficient vector does not match the set");
  for (const auto& g : elements) spec.check(g);
  ExpMomentCheck out;
  for (double v : a) out.sum_squares += v * v;

  const auto exponent = [&](const DualPoint& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < elements.size(); ++i) s += a[i] * spec.evaluate(elements[i], x).real();
    return s;
  };

  std::size_t torsion_total = 1;
  for (auto p : spec.moduli()) {
    if (torsion_total > (std::size_t{1} << 24) / static_cast<std::size_t>(p)) {
      throw ResourceError("torsion part too large for exhaustive summation");
    }
    torsion_total *= static_cast<std::size_t>(p);
  }
  const auto torsion_point = [&](std::size_t index) {
    std::vector<std::int64_t> z(spec.torsion_rank());
    for (std::size_t i = 0; i < z.size(); ++i) {
      const auto p = static_cast<std::size_t>(spec.moduli()[i]);
      z[i] = static_cast<std::int64_t>(index % p);
      index /= p;
    }
    return z;
  };

  long double acc = 0.0L;
  if (spec.free_rank() <= 1) {
    std::size_t q = 1;
    if (spec.free_rank() == 1) {
      Integer top = 0;
      for (const auto& g : elements) top = std::max(top, Integer(abs(g.free()[0])));
      if (top > Integer(1) << 20) throw ResourceError("frequency too large for quadrature");
      q = points > 0 ? points : 1024 + 32 * top.convert_to<std::size_t>();
      out.mode = "quadrature";
    } else {
      out.mode = "exact";
    }
    if (q * torsion_total > (std::size_t{1} << 26)) throw ResourceError("quadrature grid exceeds point cap");
    for (std::size_t t = 0; t < torsion_total; ++t) {
      const auto z = torsion_point(t);
      for (std::size_t k = 0; k < q; ++k) {
        std::vector<double> free;
        if (spec.free_rank() == 1) free.push_back(static_cast<double>(k) / static_cast<double>(q));
        acc += std::exp(static_cast<long double>(exponent(spec.point(std::move(free), z))));
      }
    }
    out.points = q * torsion_total;
  } else {
    out.mode = "monte-carlo";
    const std::size_t q = points > 0 ? points : std::size_t{1} << 16;
    Rng rng(seed);
    for (std::size_t k = 0; k < q; ++k) {
      std::vector<double> free(spec.free_rank());
      for (auto& v : free) v = rng.uniform();
      std::vector<std::int64_t> z(spec.torsion_rank());
      for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(spec.moduli()[i]));
      }
      acc += std::exp(static_cast<long double>(exponent(spec.point(std::move(free), std::move(z)))));
    }
    out.points = q;
  }
  out.lhs = static_cast<double>(acc / static_cast<long double>(out.points));
  if (out.sum_squares > 0.0) out.fitted_k = std::log(out.lhs) / out.sum_squares;
  return out;
}

double product_integral(const GroupSpec& spec, std::span<const GroupElement> elements, int n, double lambda,
                        const MultiplyOptions& options) {
  if (n < 1) throw DomainError("product_integral needs n >= 1");
  if (!(lambda > 0.0 && lambda < 1.0 / n)) throw DomainError("product_integral needs lambda in (0, 1/n)");
  for (const auto& g : elements) {
    spec.check(g);
    const auto order = spec.element_order(g);
    if (order && *order <= n) {
      throw DomainError("element " + g.to_string() + " has order " + order->str() + " <= n = " + std::to_string(n));
    }
  }
  return relation_product(spec, elements, n, lambda / 2.0, options).coefficient(spec.identity()).real();
}

LambdaPCheck lambda_p_check(const GroupSpec& spec, std::span<const GroupElement> elements, double S, int p,
                            std::size_t trials, std::uint64_t seed) {
  if (p < 2 || p % 2 != 0) throw DomainError("lambda_p_check needs an even p >= 2");
  if (!(S > 0.0)) throw DomainError("lambda_p_check needs S > 0");
  const auto set = canonical_set(elements);
  LambdaPCheck out;
  out.S = S;
  out.p = p;
  out.trials = trials;
  if (set.empty()) return out;
  Integer spread = 0;
  for (std::size_t j = 0; j < spec.free_rank(); ++j) {
    Integer lo = set[0].free()[j], hi = lo;
    for (const auto& g : set) {
      lo = std::min(lo, g.free()[j]);
      hi = std::max(hi, g.free()[j]);
    }
    spread = std::max(spread, Integer(hi - lo));
  }
  if (spread > Integer(1) << 24) throw ResourceError("frequency spread too large for quadrature");
  out.points = p * spread.convert_to<std::int64_t>() + 1;
  std::vector<double> ratios(trials);
  parallel_for(trials, [&](std::size_t t) {
    Rng rng(seed, t);
    std::vector<Term> terms;
    for (const auto& g : set) terms.push_back({g, Complex(rng.normal(), rng.normal())});
    const auto f = TrigPolynomial::from_terms(spec, std::move(terms));
    ratios[t] = lp_norm(f, p, out.points).value / f.l2_norm();
  });
  for (double r : ratios) out.worst_norm_ratio = std::max(out.worst_norm_ratio, r);
  out.worst_ratio = out.worst_norm_ratio / (2.0 * S * std::sqrt(static_cast<double>(p)));
  return out;
}

}  // namespace sidonlab
