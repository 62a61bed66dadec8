#include "sidonlab/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sidonlab/errors.hpp"

namespace sidonlab {

namespace {

Integer parse_integer(const Json& v) {
  if (v.is_number_integer()) return Integer(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return Integer(v.get<std::uint64_t>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    const auto digits = s.find_first_not_of("+-");
    if (s.empty() || digits > 1 || digits == std::string::npos ||
        s.find_first_not_of("0123456789", digits) != std::string::npos) {
      throw StructuralError("not an integer: \"" + s + "\"");
    }
    return Integer(s[0] == '+' ? s.substr(1) : s);
  }
  throw StructuralError("expected an integer, got " + v.dump());
}

std::int64_t parse_residue(const Json& v) {
  const auto i = parse_integer(v);
  if (i > std::numeric_limits<std::int64_t>::max() || i < std::numeric_limits<std::int64_t>::min()) {
    throw StructuralError("torsion residue out of range: " + i.str());
  }
  return i.convert_to<std::int64_t>();
}

GroupElement parse_element(const GroupSpec& spec, const Json& v) {
  if (v.is_object()) {
    std::vector<Integer> free;
    std::vector<std::int64_t> torsion;
    if (v.contains("free")) {
      for (const auto& x : v.at("free")) free.push_back(parse_integer(x));
    }
    if (v.contains("torsion")) {
      for (const auto& x : v.at("torsion")) torsion.push_back(parse_residue(x));
    }
    return spec.element(std::move(free), std::move(torsion));
  }
  return spec.scalar(parse_integer(v));
}

}  // namespace

ElementSet parse_set(const Json& doc) {
  if (!doc.is_object() || !doc.contains("spec") || !doc.contains("elems")) {
    throw StructuralError("set JSON needs \"spec\" and \"elems\"");
  }
  const auto& s = doc.at("spec");
  const auto rank = s.value("free_rank", 0);
  if (rank < 0) throw StructuralError("free_rank must be >= 0");
  std::vector<std::int64_t> moduli;
  if (s.contains("moduli")) {
    for (const auto& m : s.at("moduli")) moduli.push_back(parse_residue(m));
  }
  ElementSet out{GroupSpec(static_cast<std::size_t>(rank), std::move(moduli)), {}};
  if (!doc.at("elems").is_array()) throw StructuralError("\"elems\" must be an array");
  for (const auto& e : doc.at("elems")) out.elements.push_back(parse_element(out.spec, e));
  return out;
}

Json load_json_argument(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return Json::parse(text);
    std::ifstream in(text);
    if (!in) throw IoError("cannot read " + text);
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw StructuralError(std::string("invalid JSON: ") + e.what());
  }
}

std::vector<Complex> parse_phi(const Json& doc) {
  const Json& list = doc.is_object() ? doc.at("phi") : doc;
  if (!list.is_array()) throw StructuralError("phi must be an array");
  std::vector<Complex> out;
  for (const auto& v : list) {
    if (v.is_number()) {
      out.emplace_back(v.get<double>(), 0.0);
    } else if (v.is_array() && v.size() == 2) {
      out.emplace_back(v[0].get<double>(), v[1].get<double>());
    } else {
      throw StructuralError("phi entries are numbers or [re, im] pairs, got " + v.dump());
    }
  }
  return out;
}

Json to_json(const GroupSpec& spec) { return {{"free_rank", spec.free_rank()}, {"moduli", spec.moduli()}}; }

Json to_json(const Integer& v) {
  if (v <= std::numeric_limits<std::int64_t>::max() && v >= std::numeric_limits<std::int64_t>::min()) {
    return v.convert_to<std::int64_t>();
  }
  return v.str();
}

Json to_json(const GroupElement& g) {
  if (g.free().size() == 1 && g.torsion().empty()) return to_json(g.free()[0]);
  if (g.free().empty() && g.torsion().size() == 1) return g.torsion()[0];
  Json free = Json::array();
  for (const auto& v : g.free()) free.push_back(to_json(v));
  return {{"free", free}, {"torsion", g.torsion()}};
}

Json to_json(std::span<const GroupElement> elements) {
  Json out = Json::array();
  for (const auto& g : elements) out.push_back(to_json(g));
  return out;
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const DualPoint& x) { return {{"free", x.free}, {"torsion", x.torsion}}; }

Json to_json(const ExponentVector& xi) {
  return {{"elements", to_json(xi.elements)}, {"exponents", xi.exponents}, {"bound", xi.bound}};
}

Json to_json(const RelationReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.sample_relations) samples.push_back(to_json(s));
  return {{"elements", to_json(r.elements)},
          {"degree", r.degree},
          {"count", to_json(r.count)},
          {"trivial_count", to_json(r.trivial_count)},
          {"independent", r.independent()},
          {"contains_identity", r.contains_identity},
          {"method", r.method},
          {"estimated_work", r.estimated_work},
          {"sample_relations", samples}};
}

Json to_json(const TrigPolynomial& p) {
  Json terms = Json::array();
  for (const auto& t : p.terms()) terms.push_back({{"element", to_json(t.element)}, {"coefficient", to_json(t.coefficient)}});
  return {{"spec", to_json(p.spec())}, {"terms", terms}};
}

Json to_json(const SupNormBound& b) {
  return {{"lower", b.lower},       {"upper", b.upper},
          {"witness", to_json(b.witness)}, {"grid", b.grid},
          {"grid_size", b.grid_size}, {"half_spread", b.half_spread},
          {"certified", b.certified}};
}

Json to_json(const NonnegativityCertificate& c) {
  return {{"min_sampled", c.min_sampled},
          {"argmin", to_json(c.argmin)},
          {"lower_bound", c.lower_bound ? Json(*c.lower_bound) : Json()},
          {"certified", c.certified},
          {"tolerance", c.tolerance},
          {"grid", c.grid},
          {"cells_examined", c.cells_examined},
          {"max_depth_reached", c.max_depth_reached}};
}

Json to_json(const PeakPolynomial& p, bool with_coefficients) {
  Json out = {{"kind", to_string(p.kind)},
              {"epsilon", p.epsilon},
              {"degree", p.degree},
              {"p0", p.coefficient(0)},
              {"p1", p.coefficient(1)},
              {"eta", p.eta ? Json(*p.eta) : Json()},
              {"triangle_width", p.triangle_width ? Json(*p.triangle_width) : Json()},
              {"tail_mass", p.tail_mass ? Json(*p.tail_mass) : Json()}};
  if (with_coefficients) out["coefficients"] = p.coefficients;
  return out;
}

Json to_json(const InterpolationCertificate& c) {
  Json target = Json::array();
  for (const auto& v : c.target) target.push_back(to_json(v));
  return {{"elements", to_json(c.elements)},
          {"target", target},
          {"residual", c.residual},
          {"mass_at_identity", to_json(c.mass_at_identity)},
          {"real_valued", c.real_valued},
          {"nonneg", c.nonneg ? to_json(*c.nonneg) : Json()},
          {"nonneg_method", c.nonneg_method},
          {"l1_mass", c.l1_mass},
          {"l1_is_estimate", c.l1_is_estimate},
          {"scale", c.scale},
          {"implied_sidon_bound", c.implied_sidon_bound ? Json(*c.implied_sidon_bound) : Json()}};
}

Json to_json(const FamilyCertificate& f) {
  Json members = Json::array();
  for (const auto& m : f.members) {
    members.push_back({{"kind", m.kind},
                       {"index", m.index},
                       {"residual", m.residual},
                       {"mass_at_identity", m.mass_at_identity},
                       {"nonneg_certified", m.nonneg_certified},
                       {"lower_bound", m.lower_bound ? Json(*m.lower_bound) : Json()},
                       {"implied_sidon_bound", m.implied_sidon_bound ? Json(*m.implied_sidon_bound) : Json()}});
  }
  return {{"construction", f.construction},
          {"elements", to_json(f.elements)},
          {"epsilon", f.epsilon},
          {"degree", f.degree},
          {"scale", f.scale},
          {"sign_patterns", f.sign_patterns},
          {"random_members", f.random_members},
          {"exhaustive_signs", f.exhaustive_signs},
          {"max_residual", f.max_residual},
          {"max_mass_deviation", f.max_mass_deviation},
          {"all_nonneg", f.all_nonneg},
          {"bound", f.bound ? Json(*f.bound) : Json()},
          {"members", members}};
}

Json to_json(const ExtractionResult& r) {
  Json attempts = Json::array();
  for (const auto& a : r.attempts) {
    attempts.push_back({{"index", a.index},
                        {"thinned_size", a.thinned_size},
                        {"relation_count", to_json(a.relation_count)},
                        {"size_gate", a.size_gate},
                        {"relation_gate", a.relation_gate},
                        {"passed_gates", a.passed_gates()},
                        {"residual_size", a.residual_size ? Json(*a.residual_size) : Json()}});
  }
  const auto& p = r.params;
  return {{"H", to_json(r.H)},
          {"attempts", attempts},
          {"input_size", r.input_size},
          {"achieved_ratio", r.achieved_ratio},
          {"gates_failed", r.gates_failed},
          {"chosen_attempt", r.chosen_attempt ? Json(*r.chosen_attempt) : Json()},
          {"from_unthinned", r.from_unthinned},
          {"params",
           {{"n", p.n},
            {"lambda", p.effective_lambda()},
            {"max_attempts", p.max_attempts},
            {"seed", p.seed},
            {"alpha", p.alpha},
            {"rule", to_string(p.rule)},
            {"work_cap", p.relations.work_cap},
            {"include_unthinned", p.include_unthinned}}}};
}

Json to_json(const CosetSplit& s) {
  Json fibers = Json::array();
  for (const auto& f : s.fibers) fibers.push_back({{"key", to_json(f.key)}, {"size", f.size}});
  return {{"head", s.head},
          {"head_order", to_json(s.head_order)},
          {"gamma", to_json(s.gamma)},
          {"Y", to_json(s.Y)},
          {"fibers", fibers}};
}

Json to_json(const SmallConstantResult& r) {
  return {{"H", to_json(r.H)},
          {"peak", to_json(r.peak, false)},
          {"split", r.split ? to_json(*r.split) : Json()},
          {"dropped_identity", r.dropped_identity},
          {"extraction", to_json(r.extraction)},
          {"certificate", to_json(r.certificate)}};
}

Json to_json(const SidonEstimate& e) {
  Json witness = Json::array();
  for (const auto& v : e.witness) witness.push_back(to_json(v));
  return {{"elements", to_json(e.elements)},
          {"lower", e.lower ? Json(*e.lower) : Json()},
          {"lower_certified", e.lower_certified},
          {"witness", witness},
          {"witness_sup", e.witness_sup ? to_json(*e.witness_sup) : Json()},
          {"candidates_evaluated", e.candidates_evaluated},
          {"upper", e.upper ? Json(*e.upper) : Json()},
          {"upper_exhaustive", e.upper_exhaustive},
          {"residual_max", e.residual_max ? Json(*e.residual_max) : Json()},
          {"family", e.family ? to_json(*e.family) : Json()},
          {"method", e.method}};
}

Json to_json(const SecBound& s) {
  return {{"p", s.p}, {"value", s.value}, {"bound", s.bound}, {"r", s.r}, {"theta", s.theta}, {"holds", s.holds}};
}

Json to_json(const BinomialGateReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"m", row.m},
                    {"theta", row.theta},
                    {"k", row.k},
                    {"binomial", to_json(row.binomial)},
                    {"exponent", row.exponent},
                    {"holds", row.holds}});
  }
  return {{"rows", rows}, {"all_hold", r.all_hold}};
}

Json to_json(const ThinningValidation& v) {
  return {{"seeds", v.seeds},
          {"set_size", v.set_size},
          {"n", v.n},
          {"lambda", v.lambda},
          {"alpha", v.alpha},
          {"mean_size", v.mean_size},
          {"size_stderr", v.size_stderr},
          {"expected_size", v.expected_size},
          {"variance_size", v.variance_size},
          {"expected_variance", v.expected_variance},
          {"mean_count", v.mean_count},
          {"count_stderr", v.count_stderr},
          {"expected_count", v.expected_count},
          {"p_size_small", v.p_size_small},
          {"chebyshev_bound", v.chebyshev_bound},
          {"p_count_large", v.p_count_large},
          {"p_both_gates", v.p_both_gates},
          {"extractions", v.extractions},
          {"extraction_failures", v.extraction_failures}};
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace sidonlab
