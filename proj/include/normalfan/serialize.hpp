#pragma once

// JSON forms of the library types. Rationals travel as strings ("p/q" or
// "p"); integers are accepted on input.

#include "normalfan/harness.hpp"
#include "normalfan/identity.hpp"
#include "normalfan/polyhedron.hpp"

#include <json.hpp>

#include <string>

namespace normalfan {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);
Json to_json(const RVector& v);
Json to_json(const std::vector<RVector>& rows);
Rational rational_from_json(const Json& j);
RVector vector_from_json(const Json& j);

/// {"d": int, "A": [[...]], "b": [...], "eqs": {"A": [[...]], "b": [...]}}; "eqs" optional.
HPolyhedron polyhedron_from_json(const Json& j);
Json to_json(const HPolyhedron& P);
/// Throws ParseError on malformed text.
Json parse_json(const std::string& text);

Json to_json(const LinearSystem& s);
Json face_json(const Face& F, std::size_t id);
Json to_json(const VCone& C);
Json to_json(const PhiReport& r);
Json to_json(const VerifyReport& r);
Json to_json(const LinealityDecomposition& dec);
Json to_json(const CoverWitness& w);
Json to_json(const Stratum& s);
Json to_json(const LocalCone& lc);
Json to_json(const GenSpec& spec);
GenSpec genspec_from_json(const Json& j);

/// "2,1/2" -> (2, 1/2)
RVector parse_point(const std::string& text);

} // namespace normalfan
