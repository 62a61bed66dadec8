#include "sidonlab/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "sidonlab/errors.hpp"
#include "sidonlab/json_io.hpp"

namespace sidonlab {

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::uint64_t workcap = RelationOptions{}.work_cap;
  std::optional<int> grid_mult;
  std::string out;
};

Json report(const std::string& command, const std::string& ref, const Globals& g, Json params, Json result) {
  params["seed"] = g.seed;
  params["workcap"] = g.workcap;
  if (g.grid_mult) params["grid_mult"] = *g.grid_mult;
  return {{"schema", kSchema}, {"command", command}, {"ref", ref}, {"params", params}, {"result", result}};
}

RelationOptions relation_options(const Globals& g, std::size_t samples = RelationOptions{}.sample_cap) {
  RelationOptions r;
  r.work_cap = g.workcap;
  r.sample_cap = samples;
  return r;
}

InterpolationTolerances tolerances(const Globals& g) {
  InterpolationTolerances t;
  if (g.grid_mult) t.nonnegativity.grid_multiplier = *g.grid_mult;
  return t;
}

Json tolerance_params(const InterpolationTolerances& t) {
  return {{"nonneg_tolerance", t.nonnegativity.tolerance}, {"nonneg_grid_multiplier", t.nonnegativity.grid_multiplier}};
}

std::vector<GroupElement> elements_of(int first, int last, const GroupSpec& spec, const std::function<long(int)>& f) {
  std::vector<GroupElement> out;
  for (int k = first; k <= last; ++k) out.push_back(spec.scalar(f(k)));
  return out;
}

void write(const Json& doc, const Globals& g, std::ostream& out) {
  const auto text = dump(doc);
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw IoError("cannot write " + g.out);
  file << text;
  if (!file) throw IoError("failed writing " + g.out);
}

int fail(std::ostream& err, const char* kind, const std::string& message, int code) {
  err << Json{{"error", kind}, {"message", message}}.dump() << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relation counting, Riesz-product interpolation and Sidon-constant bounds", "sidonlab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "sidonlab 0.1.0");
  Globals g;
  app.add_option("--seed", g.seed, "PRNG seed");
  app.add_option("--workcap", g.workcap, "work cap for relation searches");
  app.add_option("--grid-mult", g.grid_mult, "grid multiplier for sup-norm and nonnegativity grids")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "write the JSON report here instead of stdout");

  std::function<Json()> action;

  // check / count
  std::string set_arg;
  int degree = 1;
  bool length = false;
  std::size_t samples = RelationOptions{}.sample_cap;
  auto* check = app.add_subcommand("check", "n-degree (or n-length) independence");
  check->add_option("--set", set_arg, "set JSON (inline or path)")->required();
  check->add_option("--degree", degree, "n")->check(CLI::PositiveNumber);
  check->add_flag("--length", length, "test n-length independence instead");
  check->callback([&] {
    action = [&] {
      const auto set = parse_set(load_json_argument(set_arg));
      Json params = {{"degree", degree}, {"length", length}};
      if (length) {
        const auto li = is_n_length_independent(set.spec, set.elements, degree, relation_options(g));
        return report("check", "n-length independence", g, params,
                      {{"independent", li.independent},
                       {"vacuous", li.vacuous},
                       {"witness", li.witness ? to_json(*li.witness) : Json()}});
      }
      const auto r = count_relations(set.spec, set.elements, degree, relation_options(g, 1));
      return report("check", "n-degree independence", g, params,
                    {{"independent", r.independent()},
                     {"count", to_json(r.count)},
                     {"trivial_count", to_json(r.trivial_count)},
                     {"witness", r.sample_relations.empty() ? Json() : to_json(r.sample_relations.front())}});
    };
  });

  auto* count = app.add_subcommand("count", "count relations C_n(F)");
  count->add_option("--set", set_arg, "set JSON (inline or path)")->required();
  count->add_option("--degree", degree, "n")->check(CLI::PositiveNumber);
  count->add_option("--samples", samples, "nontrivial relations to list");
  count->callback([&] {
    action = [&] {
      const auto set = parse_set(load_json_argument(set_arg));
      const auto r = count_relations(set.spec, set.elements, degree, relation_options(g, samples));
      return report("count", "relation count C_n(F)", g, {{"degree", degree}, {"samples", samples}}, to_json(r));
    };
  });

  // extract
  std::optional<double> lambda;
  int attempts = ExtractionParams{}.max_attempts;
  double alpha = ExtractionParams{}.alpha;
  std::string rule = to_string(RemovalRule::most_sampled);
  bool direct = false;
  const auto extraction_params = [&] {
    ExtractionParams p;
    p.n = degree;
    p.lambda = lambda;
    p.max_attempts = attempts;
    p.seed = g.seed;
    p.alpha = alpha;
    p.rule = removal_rule_from_string(rule);
    p.relations = relation_options(g);
    p.include_unthinned = direct;
    return p;
  };
  const auto add_extract_options = [&](CLI::App* sub) {
    sub->add_option("--set", set_arg, "set JSON (inline or path)")->required();
    sub->add_option("--lambda", lambda, "thinning parameter, keep probability lambda/2");
    sub->add_option("--attempts", attempts, "thinning attempts")->check(CLI::PositiveNumber);
    sub->add_option("--alpha", alpha, "relation gate exponent");
    sub->add_option("--rule", rule, "removal rule")
        ->check(CLI::IsMember({"most_sampled", "first_in_support", "last_in_support"}));
    sub->add_flag("--direct", direct, "also consider the unthinned set");
  };
  auto* extract = app.add_subcommand("extract", "randomized extraction of an n-degree independent subset");
  add_extract_options(extract);
  extract->add_option("--degree", degree, "n")->check(CLI::PositiveNumber);
  extract->callback([&] {
    action = [&] {
      const auto set = parse_set(load_json_argument(set_arg));
      const auto r = extract_independent_subset(set.spec, set.elements, extraction_params());
      return report("extract", "randomized thinning with size and relation gates", g, {{"degree", degree}},
                    to_json(r));
    };
  });

  double epsilon = 0.5;
  std::string peak = to_string(PeakKind::fejer);
  std::optional<std::size_t> trials;
  const auto family_options = [&] {
    FamilyOptions f;
    if (trials) f.random_count = *trials;
    f.seed = g.seed;
    f.tolerances = tolerances(g);
    f.relations = relation_options(g);
    return f;
  };
  const auto family_params = [&](const FamilyOptions& f) {
    Json p = tolerance_params(f.tolerances);
    p["random_members"] = f.random_count;
    p["max_sign_elements"] = f.max_sign_elements;
    return p;
  };
  auto* extract_sidon = app.add_subcommand("extract-sidon", "subset with Sidon constant at most 1+epsilon");
  add_extract_options(extract_sidon);
  extract_sidon->add_option("--epsilon", epsilon, "target 1+epsilon")->check(CLI::PositiveNumber);
  extract_sidon->add_option("--peak", peak, "peak polynomial")->check(CLI::IsMember({"fejer", "triangle"}));
  extract_sidon->add_option("--trials", trials, "random unimodular certificate targets");
  extract_sidon->callback([&] {
    action = [&] {
      const auto set = parse_set(load_json_argument(set_arg));
      SmallConstantOptions options{peak_kind_from_string(peak), family_options()};
      const auto r = extract_small_constant_subset(set.spec, set.elements, epsilon, extraction_params(), options);
      Json params = family_params(options.family);
      params["epsilon"] = epsilon;
      params["peak"] = peak;
      return report("extract-sidon", "proportional subsets with Sidon constant at most 1+epsilon", g, params,
                    to_json(r));
    };
  });

  // interpolate
  std::string phi_arg;
  bool classic = false;
  bool verify_direct = false;
  auto* interpolate = app.add_subcommand("interpolate", "Riesz-product interpolation of phi on H");
  interpolate->add_option("--set", set_arg, "set JSON (inline or path)")->required();
  interpolate->add_option("--phi", phi_arg, "phi JSON: numbers or [re, im] pairs aligned with elems")->required();
  interpolate->add_option("--epsilon", epsilon, "peak polynomial epsilon")->check(CLI::PositiveNumber);
  interpolate->add_option("--peak", peak, "peak polynomial")->check(CLI::IsMember({"fejer", "triangle"}));
  interpolate->add_flag("--classic", classic, "classic product for dissociate sets, |phi| <= 1/2");
  interpolate->add_flag("--verify-direct", verify_direct, "also certify the expanded product directly");
  interpolate->callback([&] {
    action = [&] {
      const auto set = parse_set(load_json_argument(set_arg));
      const auto phi = parse_phi(load_json_argument(phi_arg));
      const auto tol = tolerances(g);
      Json params = tolerance_params(tol);
      params["classic"] = classic;
      std::optional<TrigPolynomial> poly;
      Json result;
      if (classic) {
        poly = classic_riesz_product(set.spec, set.elements, phi, relation_options(g));
        result["certificate"] = to_json(verify_interpolation(*poly, set.elements, phi, tol, 2.0));
      } else {
        const auto pk = build_peak_polynomial(epsilon, peak_kind_from_string(peak));
        auto r = riesz_interpolate(set.spec, set.elements, phi, pk, tol, relation_options(g));
        params["epsilon"] = epsilon;
        params["peak"] = peak;
        result["peak"] = to_json(pk, false);
        result["certificate"] = to_json(r.certificate);
        poly = std::move(r.polynomial);
      }
      if (verify_direct) {
        result["direct_certificate"] =
            to_json(verify_interpolation(*poly, set.elements, phi, tol, classic ? 2.0 : 1.0 + epsilon));
      }
      result["polynomial"] = to_json(*poly);
      return report("interpolate", classic ? "classic Riesz product interpolation" : "peak Riesz product interpolation",
                    g, params, result);
    };
  });

  // constant
  bool lower = false, upper = false;
  auto* constant = app.add_subcommand("constant", "certified Sidon constant bounds");
  constant->add_option("--set", set_arg, "set JSON (inline or path)")->required();
  constant->add_flag("--lower", lower, "certified lower bound (default)");
  constant->add_flag("--upper", upper, "upper bound from the peak Riesz family");
  constant->add_flag("--classic", classic, "upper bound from the classic Riesz family");
  constant->add_option("--epsilon", epsilon, "epsilon for --upper")->check(CLI::PositiveNumber);
  constant->add_option("--peak", peak, "peak polynomial")->check(CLI::IsMember({"fejer", "triangle"}));
  constant->add_option("--trials", trials, "random candidates / certificate targets");
  constant->callback([&] {
    action = [&] {
      const auto set = parse_set(load_json_argument(set_arg));
      if (upper || classic) {
        const auto f = family_options();
        Json params = family_params(f);
        params["classic"] = classic;
        if (classic) {
          return report("constant", "Sidon constant upper bound, classic Riesz family", g, params,
                        to_json(sidon_upper_bound_classic(set.spec, set.elements, f)));
        }
        params["epsilon"] = epsilon;
        params["peak"] = peak;
        return report("constant", "Sidon constant upper bound, peak Riesz family", g, params,
                      to_json(sidon_upper_bound_via_riesz(set.spec, set.elements, epsilon, f,
                                                          peak_kind_from_string(peak))));
      }
      LowerBoundOptions o;
      if (trials) o.trials = *trials;
      o.seed = g.seed;
      if (g.grid_mult) o.grid_multiplier = *g.grid_mult;
      return report("constant", "Sidon constant lower bound from certified sup norms", g,
                    {{"trials", o.trials}, {"grid_multiplier", o.grid_multiplier},
                     {"max_sign_elements", o.max_sign_elements}},
                    to_json(sidon_lower_bound(set.spec, set.elements, o)));
    };
  });

  // secbound
  std::int64_t p = 0;
  int r_steps = 200, theta_steps = 200;
  auto* secbound = app.add_subcommand("secbound", "two-element constant in Z_p against sec(pi/(2p))");
  secbound->add_option("--p", p, "modulus")->required();
  secbound->add_option("--r-steps", r_steps, "grid steps in r")->check(CLI::PositiveNumber);
  secbound->add_option("--theta-steps", theta_steps, "grid steps in theta")->check(CLI::PositiveNumber);
  secbound->callback([&] {
    action = [&] {
      return report("secbound", "two-element sets in Z_p: secant lower bound", g,
                    {{"p", p}, {"r_steps", r_steps}, {"theta_steps", theta_steps}},
                    to_json(two_element_constant_mod_p(p, r_steps, theta_steps)));
    };
  });

  // gatecheck
  int max_m = 64;
  std::vector<double> thetas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  auto* gatecheck = app.add_subcommand("gatecheck", "binom(m, m(1-theta)/2) <= 2^(s(theta) m) for even m");
  gatecheck->add_option("--max-m", max_m, "largest even m")->check(CLI::NonNegativeNumber);
  gatecheck->add_option("--thetas", thetas, "theta grid");
  gatecheck->callback([&] {
    action = [&] {
      std::vector<int> sizes;
      for (int m = 2; m <= max_m; m += 2) sizes.push_back(m);
      return report("gatecheck", "binomial entropy bound", g, {{"max_m", max_m}, {"thetas", thetas}},
                    to_json(binomial_gate_check(sizes, thetas)));
    };
  });

  // demo
  std::string subject;
  std::size_t seeds = 10'000;
  int demo_attempts = 8;
  auto* demo = app.add_subcommand("demo", "fixed worked examples: lacunary, pipeline, thinning");
  demo->add_option("subject", subject, "demo name")
      ->required()
      ->check(CLI::IsMember({"lacunary", "pipeline", "thinning"}));
  demo->add_option("--epsilon", epsilon, "pipeline epsilon")->check(CLI::PositiveNumber);
  demo->add_option("--trials", trials, "random certificate targets");
  demo->add_option("--seeds", seeds, "thinning replicas")->check(CLI::Range(std::size_t{2}, std::size_t{100'000'000}));
  demo->add_option("--attempts", demo_attempts, "extraction attempts per thinning replica");
  demo->callback([&] {
    action = [&] {
      const auto z = GroupSpec::integers();
      if (subject == "lacunary") {
        const auto E = elements_of(1, 4, z, [](int k) { return static_cast<long>(std::pow(3, k)); });
        const auto f = family_options();
        const std::vector<Complex> half(E.size(), 0.5);
        const auto poly = classic_riesz_product(z, E, half, f.relations);
        const auto direct = verify_interpolation(poly, E, half, f.tolerances, 2.0);
        const auto fam = certify_classic_family(z, E, f);
        return report("demo", "classic Riesz product on powers of three", g, family_params(f),
                      {{"elements", to_json(E)},
                       {"dissociate", is_dissociate(z, E, f.relations)},
                       {"example", {{"phi", 0.5}, {"polynomial", to_json(poly)}, {"certificate", to_json(direct)}}},
                       {"family", to_json(fam)},
                       {"upper", fam.bound ? Json(*fam.bound) : Json()}});
      }
      if (subject == "pipeline") {
        const auto H = elements_of(1, 4, z, [](int k) { return static_cast<long>(std::pow(5, k)); });
        const auto f = family_options();
        const auto pk = build_peak_polynomial(epsilon, PeakKind::fejer);
        const auto relations = count_relations(z, H, pk.degree + 1, f.relations);
        const auto est = sidon_upper_bound_via_riesz(z, H, epsilon, f, PeakKind::fejer);
        Json params = family_params(f);
        params["epsilon"] = epsilon;
        return report("demo", "1+epsilon certificate on powers of five", g, params,
                      {{"peak", to_json(pk)}, {"relations", to_json(relations)}, {"estimate", to_json(est)}});
      }
      std::vector<GroupElement> F = elements_of(1, 40, z, [](int k) { return static_cast<long>(k); });
      const int n = 1;
      const double lam = lambda ? *lambda : 0.25;
      const auto v = validate_thinning(z, F, n, lam, seeds, g.seed, alpha, demo_attempts, relation_options(g));
      Json result = to_json(v);
      result["size_z"] = (v.mean_size - v.expected_size) / v.size_stderr;
      result["count_z"] = v.count_stderr > 0 ? Json((v.mean_count - v.expected_count) / v.count_stderr) : Json();
      return report("demo", "Monte-Carlo validation of the thinning step", g,
                    {{"n", n}, {"lambda", lam}, {"alpha", alpha}, {"seeds", seeds}, {"attempts", demo_attempts}},
                    result);
    };
  });
  demo->add_option("--lambda", lambda, "thinning lambda");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("sidonlab");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitDomain;
  }

  try {
    write(action(), g, out);
    return kExitOk;
  } catch (const ResourceError& e) {
    return fail(err, "resource", e.what(), kExitResource);
  } catch (const IoError& e) {
    return fail(err, "io", e.what(), kExitIo);
  } catch (const DomainError& e) {
    return fail(err, "domain", e.what(), kExitDomain);
  } catch (const StructuralError& e) {
    return fail(err, "structural", e.what(), kExitDomain);
  } catch (const ConfigError& e) {
    return fail(err, "config", e.what(), kExitDomain);
  } catch (const Json::exception& e) {
    return fail(err, "structural", e.what(), kExitDomain);
  } catch (const std::exception& e) {
    return fail(err, "internal", e.what(), kExitInternal);
  }
}

}  // namespace sidonlab
