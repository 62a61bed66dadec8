#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sidonlab/extract.hpp"
#include "sidonlab/sidon.hpp"

namespace sidonlab {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "sidonlab/1";

struct ElementSet {
  GroupSpec spec{1, {}};
  std::vector<GroupElement> elements;  // as written in the input
};

/// {"spec":{"free_rank":d,"moduli":[...]},"elems":[...]}. An element is an
/// integer (or decimal string) in a one-coordinate group, or
/// {"free":[...],"torsion":[...]}.
ElementSet parse_set(const Json& doc);
/// Inline JSON when `text` starts with '{', otherwise a file path.
Json load_json_argument(const std::string& text);

/// A list of numbers or [re, im] pairs, bare or under "phi".
std::vector<Complex> parse_phi(const Json& doc);

Json to_json(const GroupSpec& spec);
Json to_json(const GroupElement& g);
Json to_json(std::span<const GroupElement> elements);
Json to_json(const Integer& v);
Json to_json(Complex z);
Json to_json(const DualPoint& x);
Json to_json(const ExponentVector& xi);
Json to_json(const RelationReport& r);
Json to_json(const TrigPolynomial& p);
Json to_json(const SupNormBound& b);
Json to_json(const NonnegativityCertificate& c);
Json to_json(const PeakPolynomial& p, bool with_coefficients = true);
Json to_json(const InterpolationCertificate& c);
Json to_json(const FamilyCertificate& f);
Json to_json(const ExtractionResult& r);
Json to_json(const CosetSplit& s);
Json to_json(const SmallConstantResult& r);
Json to_json(const SidonEstimate& e);
Json to_json(const SecBound& s);
Json to_json(const BinomialGateReport& r);
Json to_json(const ThinningValidation& v);

/// Deterministic text: sorted keys, shortest round-trip floats, newline.
std::string dump(const Json& doc);

}  // namespace sidonlab
