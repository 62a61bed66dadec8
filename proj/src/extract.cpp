#include "sidonlab/extract.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sidonlab/errors.hpp"
#include "sidonlab/parallel.hpp"
#include "sidonlab/random.hpp"

namespace sidonlab {

namespace {

// log2 of a positive integer, accurate to double precision.
double log2_integer(const Integer& v) {
  if (v <= 0) return -std::numeric_limits<double>::infinity();
  const auto bits = static_cast<long>(msb(v));
  if (bits < 1000) return std::log2(v.convert_to<double>());
  const long drop = bits - 60;
  return std::log2((v >> drop).convert_to<double>()) + static_cast<double>(drop);
}

bool relation_gate(const Integer& count, std::size_t size, double alpha) {
  return log2_integer(count) <= 1.0 + alpha * static_cast<double>(size);
}

RelationOptions counting_only(RelationOptions options) {
  options.sample_cap = 0;
  return options;
}

}  // namespace

double ExtractionParams::effective_lambda() const { return lambda ? *lambda : 1.0 / (4.0 * n); }

void ExtractionParams::validate() const {
  if (n < 1) throw DomainError("extraction degree must be >= 1");
  const double l = effective_lambda();
  if (!(l > 0.0 && l < 1.0 / n)) throw DomainError("lambda must lie in (0, 1/n)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
}

std::vector<GroupElement> random_thin(std::span<const GroupElement> elements, double lambda, std::uint64_t seed) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("thinning needs lambda in (0, 1)");
  Rng rng(seed);
  std::vector<GroupElement> out;
  for (const auto& g : elements) {
    if (rng.bernoulli(lambda / 2.0)) out.push_back(g);
  }
  return out;
}

double expected_relation_count(const GroupSpec& spec, std::span<const GroupElement> elements, int n, double lambda,
                               const MultiplyOptions& options) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("thinning needs lambda in (0, 1)");
  return relation_product(spec, elements, n, lambda / 2.0, options).coefficient(spec.identity()).real();
}

ExtractionResult extract_independent_subset(const GroupSpec& spec, std::span<const GroupElement> elements,
                                            const ExtractionParams& params) {
  params.validate();
  const auto input = canonical_set(elements);
  for (const auto& g : input) {
    spec.check(g);
    if (g.is_identity()) throw DomainError("extraction input contains the identity");
  }
  ExtractionResult out;
  out.params = params;
  out.input_size = input.size();
  if (input.empty()) return out;

  const double lambda = params.effective_lambda();
  const auto attempts = static_cast<std::size_t>(params.max_attempts);
  const auto counting = counting_only(params.relations);
  std::vector<std::vector<GroupElement>> thinned(attempts);
  out.attempts.resize(attempts);
  parallel_for(attempts, [&](std::size_t i) {
    thinned[i] = random_thin(input, lambda, substream_seed(params.seed, i));
    auto& rec = out.attempts[i];
    rec.index = i;
    rec.thinned_size = thinned[i].size();
    rec.relation_count = count_relations(spec, thinned[i], params.n, counting).count;
    rec.size_gate = static_cast<double>(rec.thinned_size) > lambda * static_cast<double>(input.size()) / 4.0;
    rec.relation_gate = relation_gate(rec.relation_count, rec.thinned_size, params.alpha);
  });

  std::vector<std::size_t> accepted;
  for (std::size_t i = 0; i < attempts; ++i) {
    if (out.attempts[i].passed_gates()) accepted.push_back(i);
  }
  if (accepted.empty()) {
    out.gates_failed = true;
    std::size_t best = 0;
    for (std::size_t i = 1; i < attempts; ++i) {
      const auto& a = out.attempts[i];
      const auto& b = out.attempts[best];
      if (a.thinned_size > b.thinned_size ||
          (a.thinned_size == b.thinned_size && a.relation_count < b.relation_count)) {
        best = i;
      }
    }
    accepted.push_back(best);
  }

  std::vector<std::vector<GroupElement>> residuals(accepted.size());
  parallel_for(accepted.size(), [&](std::size_t j) {
    residuals[j] = independent_residual(spec, thinned[accepted[j]], params.n, params.rule, params.relations).elements;
  });
  for (std::size_t j = 0; j < accepted.size(); ++j) {
    out.attempts[accepted[j]].residual_size = residuals[j].size();
    if (!out.chosen_attempt || residuals[j].size() > out.H.size()) {
      out.H = residuals[j];
      out.chosen_attempt = accepted[j];
    }
  }
  if (params.include_unthinned) {
    auto direct = independent_residual(spec, input, params.n, params.rule, params.relations).elements;
    if (direct.size() > out.H.size()) {
      out.H = std::move(direct);
      out.chosen_attempt.reset();
      out.from_unthinned = true;
    }
  }
  out.achieved_ratio = static_cast<double>(out.H.size()) / static_cast<double>(input.size());
  return out;
}

double binomial_entropy_exponent(double theta) {
  const double u = 1.0 - theta;
  if (u <= 0.0) return 0.0;
  return u / 2.0 * std::log2(2.0 * std::numbers::e / u);
}

BinomialGateReport binomial_gate_check(std::span<const int> sizes, std::span<const double> thetas) {
  using Float = boost::multiprecision::cpp_bin_float_50;
  BinomialGateReport report;
  for (int m : sizes) {
    if (m < 0) throw DomainError("binomial gate sizes must be >= 0");
    for (double theta : thetas) {
      if (!(theta >= 0.0 && theta < 1.0)) throw DomainError("binomial gate theta must lie in [0, 1)");
      BinomialGateRow row;
      row.m = m;
      row.theta = theta;
      const Float u = Float(1) - Float(theta);
      // θ is a double (0.9 sits just above 9/10); the guard keeps exact integers from flooring down
      row.k = static_cast<int>(boost::multiprecision::floor(Float(m) * u / 2 + Float(1e-9)).convert_to<long>());
      Integer b = 1;
      for (int i = 0; i < row.k; ++i) b = b * (m - i) / (i + 1);
      row.binomial = b;
      const Float s = u / 2 * boost::multiprecision::log2(Float(2) * boost::math::constants::e<Float>() / u);
      row.exponent = static_cast<double>(s * m);
      row.holds = Float(b) <= boost::multiprecision::pow(Float(2), s * m);
      report.all_hold = report.all_hold && row.holds;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

CosetSplit split_coset(const GroupSpec& spec, std::span<const GroupElement> elements, int N) {
  if (N < 0) throw DomainError("split_coset needs N >= 0");
  const auto& moduli = spec.moduli();
  std::size_t head = 0;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (moduli[i] <= N + 1) head = i + 1;
  }
  if (spec.free_rank() == 0 && head == moduli.size()) {
    throw DomainError("moduli do not tend past N+1 = " + std::to_string(N + 1));
  }
  CosetSplit out;
  out.head = head;
  for (std::size_t i = 0; i < head; ++i) out.head_order *= moduli[i];

  const auto tail_zero = [&](const GroupElement& g) {
    std::vector<std::int64_t> t(g.torsion().begin(), g.torsion().end());
    for (std::size_t i = head; i < t.size(); ++i) t[i] = 0;
    return GroupElement(std::vector<Integer>(spec.free_rank()), std::move(t));
  };
  std::map<GroupElement, std::vector<GroupElement>> fibers;
  for (const auto& g : canonical_set(elements)) {
    spec.check(g);
    fibers[tail_zero(g)].push_back(g);
  }
  out.gamma = spec.identity();
  std::size_t best = 0;
  for (const auto& [key, members] : fibers) {
    out.fibers.push_back({key, members.size()});
    if (members.size() > best) {
      best = members.size();
      out.gamma = key;
    }
  }
  if (best > 0) {
    const auto back = spec.inverse(out.gamma);
    out.Y = canonical_set(translate_set(spec, fibers[out.gamma], back));
  }
  return out;
}

SmallConstantResult extract_small_constant_subset(const GroupSpec& spec, std::span<const GroupElement> elements,
                                                  double epsilon, ExtractionParams params,
                                                  const SmallConstantOptions& options) {
  SmallConstantResult out;
  out.peak = build_peak_polynomial(epsilon, options.kind);
  params.n = out.peak.degree + 1;
  std::vector<GroupElement> work = canonical_set(elements);
  GroupElement gamma = spec.identity();
  if (spec.torsion_rank() > 0) {
    out.split = split_coset(spec, work, out.peak.degree);
    gamma = out.split->gamma;
    work = out.split->Y;
  }
  const auto identity = spec.identity();
  const auto it = std::find(work.begin(), work.end(), identity);
  if (it != work.end()) {
    work.erase(it);
    out.dropped_identity = true;
  }
  // Tail elements of small order cannot carry a degree-N factor.
  if (spec.torsion_rank() > 0) {
    std::erase_if(work, [&](const GroupElement& g) {
      const auto order = spec.element_order(g);
      return order && *order <= out.peak.degree + 1;
    });
  }
  out.extraction = extract_independent_subset(spec, work, params);
  out.extraction.input_size = elements.size();
  out.extraction.achieved_ratio =
      elements.empty() ? 0.0 : static_cast<double>(out.extraction.H.size()) / static_cast<double>(elements.size());
  out.certificate = certify_family(spec, out.extraction.H, out.peak, options.family);
  out.H = canonical_set(translate_set(spec, out.extraction.H, gamma));
  return out;
}

ThinningValidation validate_thinning(const GroupSpec& spec, std::span<const GroupElement> elements, int n,
                                     double lambda, std::size_t seeds, std::uint64_t base_seed, double alpha,
                                     int extract_attempts, const RelationOptions& relations) {
  if (seeds < 2) throw ConfigError("validation needs at least two seeds");
  const auto input = canonical_set(elements);
  ThinningValidation out;
  out.seeds = seeds;
  out.set_size = input.size();
  out.n = n;
  out.lambda = lambda;
  out.alpha = alpha;
  const double size = static_cast<double>(input.size());
  out.expected_size = lambda * size / 2.0;
  out.expected_variance = size * (lambda / 2.0 - lambda * lambda / 4.0);
  out.expected_count = expected_relation_count(spec, input, n, lambda);
  out.chebyshev_bound = 8.0 / (lambda * size);

  std::vector<double> sizes(seeds), counts(seeds);
  std::vector<char> both(seeds), failure(seeds);
  const auto counting = counting_only(relations);
  parallel_for(seeds, [&](std::size_t s) {
    const auto seed = substream_seed(base_seed, s);
    const auto thin = random_thin(input, lambda, seed);
    const auto count = count_relations(spec, thin, n, counting).count;
    sizes[s] = static_cast<double>(thin.size());
    counts[s] = count.convert_to<double>();
    both[s] = sizes[s] > lambda * size / 4.0 && relation_gate(count, thin.size(), alpha);
    if (extract_attempts > 0) {
      ExtractionParams params;
      params.n = n;
      params.lambda = lambda;
      params.alpha = alpha;
      params.seed = seed;
      params.max_attempts = extract_attempts;
      params.relations = relations;
      const auto result = extract_independent_subset(spec, input, params);
      failure[s] = !is_n_degree_independent(spec, result.H, n, relations);
    }
  });

  const double k = static_cast<double>(seeds);
  double sum_size = 0, sum_count = 0;
  for (std::size_t s = 0; s < seeds; ++s) {
    sum_size += sizes[s];
    sum_count += counts[s];
    out.p_size_small += sizes[s] <= lambda * size / 4.0 ? 1.0 : 0.0;
    out.p_count_large += counts[s] > 2.0 * out.expected_count ? 1.0 : 0.0;
    out.p_both_gates += both[s] ? 1.0 : 0.0;
    out.extraction_failures += failure[s] ? 1 : 0;
  }
  out.mean_size = sum_size / k;
  out.mean_count = sum_count / k;
  double var_size = 0, var_count = 0;
  for (std::size_t s = 0; s < seeds; ++s) {
    var_size += (sizes[s] - out.mean_size) * (sizes[s] - out.mean_size);
    var_count += (counts[s] - out.mean_count) * (counts[s] - out.mean_count);
  }
  out.variance_size = var_size / (k - 1.0);
  out.size_stderr = std::sqrt(out.variance_size / k);
  out.count_stderr = std::sqrt(var_count / (k - 1.0) / k);
  out.p_size_small /= k;
  out.p_count_large /= k;
  out.p_both_gates /= k;
  out.extractions = extract_attempts > 0 ? seeds : 0;
  return out;
}

}  // namespace sidonlab
