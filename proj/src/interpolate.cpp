#include "sidonlab/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>

#include "sidonlab/errors.hpp"
#include "sidonlab/parallel.hpp"
#include "sidonlab/random.hpp"

namespace sidonlab {

namespace {

struct Aligned {
  std::vector<GroupElement> elements;
  std::vector<Complex> phi;
};

Aligned align(std::span<const GroupElement> elements, std::span<const Complex> phi) {
  if (elements.size() != phi.size()) {
    throw StructuralError("phi has " + std::to_string(phi.size()) + " values for " +
                          std::to_string(elements.size()) + " elements");
  }
  std::vector<std::size_t> order(elements.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return elements[a] < elements[b]; });
  Aligned out;
  for (auto i : order) {
    if (!out.elements.empty() && out.elements.back() == elements[i]) {
      throw StructuralError("duplicate element " + elements[i].to_string() + " in interpolation set");
    }
    out.elements.push_back(elements[i]);
    out.phi.push_back(phi[i]);
  }
  return out;
}

double sup_abs(std::span<const Complex> phi) {
  double r = 0.0;
  for (const auto& v : phi) r = std::max(r, std::abs(v));
  return r;
}

void require_orders_above(const GroupSpec& spec, std::span<const GroupElement> elements, int bound) {
  for (const auto& g : elements) {
    spec.check(g);
    if (g.is_identity()) throw DomainError("interpolation set contains the identity");
    const auto order = spec.element_order(g);
    if (order && *order <= bound) {
      throw DomainError("element " + g.to_string() + " has order " + order->str() + ", need > " +
                        std::to_string(bound));
    }
  }
}

void require_independent(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                         const RelationOptions& relations) {
  if (auto xi = find_relation(spec, elements, n, relations)) {
    throw DomainError("set is not " + std::to_string(n) + "-degree independent: relation " + xi->to_string());
  }
}

std::int64_t auto_l1_points(const TrigPolynomial& p) {
  Integer spread = 0;
  for (std::size_t j = 0; j < p.spec().free_rank(); ++j) {
    Integer lo = 0, hi = 0;
    bool first = true;
    for (const auto& t : p.terms()) {
      const auto& v = t.element.free()[j];
      if (first || v < lo) lo = v;
      if (first || v > hi) hi = v;
      first = false;
    }
    spread = std::max(spread, Integer(hi - lo));
  }
  if (spread > Integer(1) << 40) throw ResourceError("frequency spread too large for quadrature");
  return 8 * spread.convert_to<std::int64_t>() + 1;
}

}  // namespace

NonnegativityCertificate factored_nonnegativity(std::span<const TrigPolynomial> univariate_factors,
                                                const NonnegativityOptions& options) {
  NonnegativityCertificate out;
  out.tolerance = options.tolerance;
  auto inner = options;
  inner.tolerance = options.tolerance * 1e-3;
  double lo = 1.0, hi = 1.0, magnitude = 1.0;
  bool complete = true;
  out.min_sampled = std::numeric_limits<double>::infinity();
  for (const auto& g : univariate_factors) {
    const auto c = is_nonnegative(g, inner);
    out.cells_examined += c.cells_examined;
    out.max_depth_reached = std::max(out.max_depth_reached, c.max_depth_reached);
    if (c.min_sampled < out.min_sampled) {
      out.min_sampled = c.min_sampled;
      out.argmin = c.argmin;
    }
    if (!c.lower_bound) {
      complete = false;
      continue;
    }
    const double flo = *c.lower_bound, fhi = g.coefficient_l1();
    const double cands[] = {lo * flo, lo * fhi, hi * flo, hi * fhi};
    lo = *std::min_element(std::begin(cands), std::end(cands));
    hi = *std::max_element(std::begin(cands), std::end(cands));
    magnitude *= fhi;
  }
  if (univariate_factors.empty()) out.min_sampled = 1.0;
  if (complete) {
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() *
                         static_cast<double>(univariate_factors.size() + 1) * magnitude;
    out.lower_bound = lo - slack;
    out.certified = *out.lower_bound >= -options.tolerance;
  }
  return out;
}

namespace {

InterpolationCertificate certify(const TrigPolynomial& p, std::span<const GroupElement> elements,
                                 std::span<const Complex> phi, const InterpolationTolerances& tolerances,
                                 std::optional<double> scale, std::optional<NonnegativityCertificate> factored) {
  auto aligned = align(elements, phi);
  const auto& spec = p.spec();
  InterpolationCertificate cert;
  for (std::size_t i = 0; i < aligned.elements.size(); ++i) {
    spec.check(aligned.elements[i]);
    cert.residual = std::max(cert.residual, std::abs(p.coefficient(aligned.elements[i]) - aligned.phi[i]));
  }
  cert.mass_at_identity = p.coefficient(spec.identity());
  cert.real_valued = p.is_real_valued(1e-12 * std::max(1.0, p.coefficient_l1()));
  if (cert.real_valued) {
    if (factored) {
      cert.nonneg = std::move(factored);
      cert.nonneg_method = "factored";
    } else {
      cert.nonneg = is_nonnegative(p, tolerances.nonnegativity);
      cert.nonneg_method = "direct";
    }
  }

  if (cert.nonneg_certified()) {
    cert.l1_mass = cert.mass_at_identity.real();
    cert.l1_is_estimate = false;
  } else if (spec.free_rank() <= 2) {
    try {
      const auto points = tolerances.l1_points > 0 ? tolerances.l1_points : auto_l1_points(p);
      cert.l1_mass = lp_norm(p, 1.0, points).value;
    } catch (const ResourceError&) {
      cert.l1_mass = p.coefficient_l1();
    }
  } else {
    cert.l1_mass = p.coefficient_l1();
  }

  const double r = sup_abs(aligned.phi);
  cert.scale = scale ? *scale : (r > 0.0 ? 1.0 / r : 0.0);
  if (cert.nonneg_certified() && cert.scale > 0.0 && cert.scale * cert.residual < 1.0) {
    cert.implied_sidon_bound = cert.scale * cert.l1_mass / (1.0 - cert.scale * cert.residual);
  }
  cert.elements = std::move(aligned.elements);
  cert.target = std::move(aligned.phi);
  return cert;
}

}  // namespace

InterpolationCertificate verify_interpolation(const TrigPolynomial& p, std::span<const GroupElement> elements,
                                              std::span<const Complex> phi,
                                              const InterpolationTolerances& tolerances,
                                              std::optional<double> scale) {
  return certify(p, elements, phi, tolerances, scale, std::nullopt);
}

namespace {

TrigPolynomial classic_product(const GroupSpec& spec, std::span<const GroupElement> elements,
                               std::span<const Complex> phi, const RelationOptions& relations,
                               const MultiplyOptions& multiply_options, std::vector<TrigPolynomial>* univariate) {
  const auto aligned = align(elements, phi);
  if (sup_abs(aligned.phi) > 0.5) throw DomainError("classic Riesz product needs |phi| <= 1/2");
  require_orders_above(spec, aligned.elements, 2);
  require_independent(spec, aligned.elements, 2, relations);
  auto product = TrigPolynomial::constant(spec, 1.0);
  for (std::size_t i = 0; i < aligned.elements.size(); ++i) {
    const auto& g = aligned.elements[i];
    if (aligned.phi[i] == Complex(0.0)) continue;
    if (univariate) {
      const auto z = GroupSpec::integers();
      univariate->push_back(TrigPolynomial::from_terms(
          z, {Term{z.scalar(0), 1.0}, Term{z.scalar(1), aligned.phi[i]}, Term{z.scalar(-1), std::conj(aligned.phi[i])}}));
    }
    auto factor = TrigPolynomial::from_terms(
        spec, {Term{spec.identity(), 1.0}, Term{g, aligned.phi[i]}, Term{spec.inverse(g), std::conj(aligned.phi[i])}});
    product = multiply(product, factor, multiply_options);
  }
  return product;
}

// The factor's coefficients as a polynomial in one variable y, P_γ(x) = g(γ(x)).
TrigPolynomial univariate_factor(Complex phi, const PeakPolynomial& peak) {
  const auto z = GroupSpec::integers();
  return factor_polynomial(z, z.scalar(1), phi, peak);
}

}  // namespace

TrigPolynomial classic_riesz_product(const GroupSpec& spec, std::span<const GroupElement> elements,
                                     std::span<const Complex> phi, const RelationOptions& relations,
                                     const MultiplyOptions& multiply_options) {
  return classic_product(spec, elements, phi, relations, multiply_options, nullptr);
}

TrigPolynomial factor_polynomial(const GroupSpec& spec, const GroupElement& gamma, Complex phi,
                                 const PeakPolynomial& peak) {
  spec.check(gamma);
  const double modulus = std::abs(phi);
  if (modulus == 0.0) return TrigPolynomial::constant(spec, 1.0);
  const double p1 = peak.coefficient(1);
  if (modulus > p1 * (1.0 + 1e-12)) {
    throw DomainError("|phi| = " + std::to_string(modulus) + " exceeds peak coefficient " + std::to_string(p1));
  }
  const double t = std::min(1.0, modulus / p1);
  const Complex u = phi / modulus;
  std::vector<Term> terms;
  terms.reserve(static_cast<std::size_t>(2 * peak.degree + 1));
  Complex um = 1.0;  // u^m for m >= 0
  for (int m = 0; m <= peak.degree; ++m) {
    if (m == 0) {
      terms.push_back(Term{spec.identity(), 1.0 + t * (peak.coefficient(0) - 1.0)});
    } else if (m == 1) {
      terms.push_back(Term{gamma, phi});
      terms.push_back(Term{spec.inverse(gamma), std::conj(phi)});
    } else {
      const Complex c = t * peak.coefficient(m) * um;
      terms.push_back(Term{spec.power(gamma, m), c});
      terms.push_back(Term{spec.power(gamma, -m), std::conj(c)});
    }
    um *= u;
  }
  return TrigPolynomial::from_terms(spec, std::move(terms));
}

RieszInterpolation riesz_interpolate(const GroupSpec& spec, std::span<const GroupElement> elements,
                                     std::span<const Complex> phi, const PeakPolynomial& peak,
                                     const InterpolationTolerances& tolerances, const RelationOptions& relations,
                                     const MultiplyOptions& multiply_options) {
  const auto aligned = align(elements, phi);
  if (sup_abs(aligned.phi) > peak.coefficient(1) * (1.0 + 1e-12)) throw DomainError("|phi| exceeds the peak coefficient p(1)");
  require_orders_above(spec, aligned.elements, peak.degree + 1);
  require_independent(spec, aligned.elements, peak.degree + 1, relations);

  long double expected = 1.0L;
  for (const auto& v : aligned.phi) {
    if (v != Complex(0.0)) expected *= 2.0L * peak.degree + 1.0L;
  }
  if (expected > static_cast<long double>(multiply_options.max_terms)) {
    throw ResourceError("Riesz product would have about " + std::to_string(static_cast<double>(expected)) +
                        " terms, above the cap of " + std::to_string(multiply_options.max_terms));
  }

  auto product = TrigPolynomial::constant(spec, 1.0);
  std::vector<TrigPolynomial> univariate;
  for (std::size_t i = 0; i < aligned.elements.size(); ++i) {
    if (aligned.phi[i] == Complex(0.0)) continue;
    product = multiply(product, factor_polynomial(spec, aligned.elements[i], aligned.phi[i], peak), multiply_options);
    univariate.push_back(univariate_factor(aligned.phi[i], peak));
  }
  auto cert = certify(product, aligned.elements, aligned.phi, tolerances, 1.0 + peak.epsilon,
                      factored_nonnegativity(univariate, tolerances.nonnegativity));
  return {std::move(product), std::move(cert)};
}

namespace {

struct Target {
  std::string kind;
  std::size_t index;
  std::vector<Complex> phi;
};

std::vector<Target> family_targets(std::size_t size, double magnitude, const FamilyOptions& options,
                                   std::size_t& sign_patterns, bool& exhaustive) {
  std::vector<Target> out;
  exhaustive = size <= options.max_sign_elements;
  if (exhaustive) {
    const std::size_t count = std::size_t{1} << size;
    for (std::size_t mask = 0; mask < count; ++mask) {
      std::vector<Complex> phi(size);
      for (std::size_t i = 0; i < size; ++i) phi[i] = (mask >> i & 1U) ? -magnitude : magnitude;
      out.push_back({"signs", mask, std::move(phi)});
    }
  } else {
    out.push_back({"signs", 0, std::vector<Complex>(size, magnitude)});
    out.push_back({"signs", 1, std::vector<Complex>(size, -magnitude)});
  }
  sign_patterns = out.size();
  for (std::size_t r = 0; r < options.random_count; ++r) {
    Rng rng(options.seed, r);
    std::vector<Complex> phi(size);
    for (auto& v : phi) v = magnitude * rng.unimodular();
    out.push_back({"random", r, std::move(phi)});
  }
  return out;
}

template <class Build>
FamilyCertificate run_family(FamilyCertificate fam, const FamilyOptions& options, double magnitude, Build&& build) {
  const auto targets =
      family_targets(fam.elements.size(), magnitude, options, fam.sign_patterns, fam.exhaustive_signs);
  fam.random_members = options.random_count;
  std::vector<InterpolationCertificate> certs(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) { certs[i] = build(targets[i].phi); });

  bool complete = true;
  double bound = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& c = certs[i];
    FamilyMember m;
    m.kind = targets[i].kind;
    m.index = targets[i].index;
    m.residual = c.residual;
    m.mass_at_identity = c.mass_at_identity.real();
    m.nonneg_certified = c.nonneg_certified();
    if (c.nonneg) m.lower_bound = c.nonneg->lower_bound;
    m.implied_sidon_bound = c.implied_sidon_bound;
    fam.max_residual = std::max(fam.max_residual, c.residual);
    fam.max_mass_deviation = std::max(fam.max_mass_deviation, std::abs(c.mass_at_identity - Complex(1.0)));
    fam.all_nonneg = fam.all_nonneg && m.nonneg_certified;
    if (c.implied_sidon_bound) {
      bound = std::max(bound, *c.implied_sidon_bound);
    } else {
      complete = false;
    }
    fam.members.push_back(std::move(m));
  }
  if (complete) fam.bound = fam.elements.empty() ? 1.0 : bound;
  return fam;
}

}  // namespace

FamilyCertificate certify_family(const GroupSpec& spec, std::span<const GroupElement> elements,
                                 const PeakPolynomial& peak, const FamilyOptions& options) {
  FamilyCertificate fam;
  fam.construction = "peak";
  fam.elements = canonical_set(elements);
  fam.epsilon = peak.epsilon;
  fam.degree = peak.degree;
  fam.scale = 1.0 + peak.epsilon;
  // Fail fast on the shared preconditions instead of once per member.
  require_orders_above(spec, fam.elements, peak.degree + 1);
  require_independent(spec, fam.elements, peak.degree + 1, options.relations);
  const auto els = fam.elements;
  return run_family(std::move(fam), options, 1.0 / (1.0 + peak.epsilon), [&](const std::vector<Complex>& phi) {
    return riesz_interpolate(spec, els, phi, peak, options.tolerances, options.relations, options.multiply)
        .certificate;
  });
}

FamilyCertificate certify_classic_family(const GroupSpec& spec, std::span<const GroupElement> elements,
                                         const FamilyOptions& options) {
  FamilyCertificate fam;
  fam.construction = "classic";
  fam.elements = canonical_set(elements);
  fam.scale = 2.0;
  require_orders_above(spec, fam.elements, 2);
  require_independent(spec, fam.elements, 2, options.relations);
  const auto els = fam.elements;
  return run_family(std::move(fam), options, 0.5, [&](const std::vector<Complex>& phi) {
    std::vector<TrigPolynomial> univariate;
    auto p = classic_product(spec, els, phi, options.relations, options.multiply, &univariate);
    return certify(p, els, phi, options.tolerances, 2.0,
                   factored_nonnegativity(univariate, options.tolerances.nonnegativity));
  });
}

}  // namespace sidonlab
