#pragma once

// JSON forms of the library's values. Matrices are row-major nested
// arrays, words are strings in the owning alphabet.
//
//   group     {"degree": n, "generators": [[images], ...]} or a catalog name
//   atlas     {"charts": [{"id", "group", "symbols", "geometry"?, "action"?,
//              "signs"?}], "gluings": [{"i", "j", "elements"}],
//              "products": [{"i", "j", "k", "left", "right", "result"}],
//              "free_signs"?: {"x": -1}}
//   covering  {"presentation": "<a,b | aa, bb>", "action": {"a": [...], ...},
//              "basepoint": 0}

#include <string>

#include "json.hpp"
#include "orbicover/atlas.hpp"
#include "orbicover/covering.hpp"
#include "orbicover/deformation.hpp"
#include "orbicover/group_core.hpp"
#include "orbicover/rep_variety.hpp"

namespace orbicover {

using Json = nlohmann::json;

Json to_json(const Matrix3& m);
Matrix3 matrix_from_json(const Json& j);

Json group_to_json(const FiniteGroup& g);
/// A catalog name or the {degree, generators} object.
GroupPtr group_from_json(const Json& j);

Json atlas_to_json(const OrbifoldAtlas& a);
/// Throws DomainError on malformed input; the result is not validated.
OrbifoldAtlas atlas_from_json(const Json& j);

Json covering_to_json(const MonodromyCovering& c);
MonodromyCovering covering_from_json(const Json& j);

Json representation_to_json(const Representation& r);
Json tangent_report_to_json(const TangentReport& t);
Json structure_to_json(const GeometricStructure& s);
Json roundtrip_report_to_json(const RoundtripReport& r);

/// Reads and parses a JSON file; DomainError if it is unreadable or
/// malformed.
Json read_json_file(const std::string& path);

/// Shortlex word of a group element over the symbols g1, g2, ...
std::string element_word(const FiniteGroup& g, ElementId e);

}  // namespace orbicover
