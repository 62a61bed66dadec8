#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sidonlab/cli.hpp"
#include "sidonlab/errors.hpp"
#include "sidonlab/json_io.hpp"

namespace py = pybind11;
using namespace sidonlab;

namespace {

ElementSet load_set(const std::string& text) { return parse_set(Json::parse(text)); }

std::vector<Complex> load_phi(const std::string& text) { return parse_phi(Json::parse(text)); }

RelationOptions relation_options(std::uint64_t workcap) {
  RelationOptions o;
  o.work_cap = workcap;
  return o;
}

FamilyOptions family_options(std::size_t trials, std::uint64_t seed) {
  FamilyOptions f;
  f.random_count = trials;
  f.seed = seed;
  return f;
}

Json interpolation(const TrigPolynomial& p, const InterpolationCertificate& c) {
  return {{"polynomial", to_json(p)}, {"certificate", to_json(c)}};
}

}  // namespace

PYBIND11_MODULE(_sidonlab, m) {
  m.doc() = "Sidon set computations: relations, Riesz products, extraction, constant bounds";

  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));

  m.def(
      "count_relations",
      [](const std::string& set, int n, std::uint64_t workcap) {
        const auto s = load_set(set);
        return dump(to_json(count_relations(s.spec, s.elements, n, relation_options(workcap))));
      },
      py::arg("set"), py::arg("n"), py::arg("workcap") = RelationOptions{}.work_cap);

  m.def(
      "is_independent",
      [](const std::string& set, int n, std::uint64_t workcap) {
        const auto s = load_set(set);
        return is_n_degree_independent(s.spec, s.elements, n, relation_options(workcap));
      },
      py::arg("set"), py::arg("n"), py::arg("workcap") = RelationOptions{}.work_cap);

  m.def(
      "expected_relation_count",
      [](const std::string& set, int n, double lambda) {
        const auto s = load_set(set);
        return expected_relation_count(s.spec, s.elements, n, lambda);
      },
      py::arg("set"), py::arg("n"), py::arg("lambda_"));

  m.def(
      "classic_riesz_product",
      [](const std::string& set, const std::string& phi) {
        const auto s = load_set(set);
        const auto f = load_phi(phi);
        const auto p = classic_riesz_product(s.spec, s.elements, f);
        return dump(interpolation(p, verify_interpolation(p, s.elements, f)));
      },
      py::arg("set"), py::arg("phi"));

  m.def(
      "riesz_interpolate",
      [](const std::string& set, const std::string& phi, double epsilon, const std::string& peak) {
        const auto s = load_set(set);
        const auto pk = build_peak_polynomial(epsilon, peak_kind_from_string(peak));
        const auto r = riesz_interpolate(s.spec, s.elements, load_phi(phi), pk);
        return dump(interpolation(r.polynomial, r.certificate));
      },
      py::arg("set"), py::arg("phi"), py::arg("epsilon"), py::arg("peak") = "fejer");

  m.def(
      "extract_independent_subset",
      [](const std::string& set, int n, std::optional<double> lambda, int attempts, std::uint64_t seed, bool direct) {
        const auto s = load_set(set);
        ExtractionParams p;
        p.n = n;
        p.lambda = lambda;
        p.max_attempts = attempts;
        p.seed = seed;
        p.include_unthinned = direct;
        py::gil_scoped_release release;
        return dump(to_json(extract_independent_subset(s.spec, s.elements, p)));
      },
      py::arg("set"), py::arg("n") = 1, py::arg("lambda_") = py::none(), py::arg("attempts") = 32,
      py::arg("seed") = 0, py::arg("direct") = false);

  m.def(
      "extract_small_constant_subset",
      [](const std::string& set, double epsilon, std::uint64_t seed, std::size_t trials, bool direct) {
        const auto s = load_set(set);
        ExtractionParams p;
        p.seed = seed;
        p.include_unthinned = direct;
        SmallConstantOptions o;
        o.family = family_options(trials, seed);
        py::gil_scoped_release release;
        return dump(to_json(extract_small_constant_subset(s.spec, s.elements, epsilon, p, o)));
      },
      py::arg("set"), py::arg("epsilon"), py::arg("seed") = 0, py::arg("trials") = 100, py::arg("direct") = false);

  m.def(
      "sidon_lower_bound",
      [](const std::string& set, std::size_t trials, std::uint64_t seed) {
        const auto s = load_set(set);
        LowerBoundOptions o;
        o.trials = trials;
        o.seed = seed;
        py::gil_scoped_release release;
        return dump(to_json(sidon_lower_bound(s.spec, s.elements, o)));
      },
      py::arg("set"), py::arg("trials") = 200, py::arg("seed") = 0);

  m.def(
      "sidon_upper_bound",
      [](const std::string& set, std::optional<double> epsilon, std::size_t trials, std::uint64_t seed) {
        const auto s = load_set(set);
        const auto f = family_options(trials, seed);
        py::gil_scoped_release release;
        const auto e = epsilon ? sidon_upper_bound_via_riesz(s.spec, s.elements, *epsilon, f)
                               : sidon_upper_bound_classic(s.spec, s.elements, f);
        return dump(to_json(e));
      },
      py::arg("set"), py::arg("epsilon") = py::none(), py::arg("trials") = 100, py::arg("seed") = 0);

  m.def(
      "two_element_constant_mod_p",
      [](std::int64_t p, int r_steps, int theta_steps) {
        return dump(to_json(two_element_constant_mod_p(p, r_steps, theta_steps)));
      },
      py::arg("p"), py::arg("r_steps") = 200, py::arg("theta_steps") = 200);

  m.def(
      "product_integral",
      [](const std::string& set, int n, double lambda) {
        const auto s = load_set(set);
        return product_integral(s.spec, s.elements, n, lambda);
      },
      py::arg("set"), py::arg("n"), py::arg("lambda_"));

  m.def(
      "binomial_gate_check",
      [](const std::vector<int>& sizes, const std::vector<double>& thetas) {
        return dump(to_json(binomial_gate_check(sizes, thetas)));
      },
      py::arg("sizes"), py::arg("thetas"));
}
