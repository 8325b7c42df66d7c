#pragma once

#include <string>

#include <json.hpp>

#include "orbicover/covers.hpp"
#include "orbicover/coxeter.hpp"
#include "orbicover/invariants.hpp"
#include "orbicover/orbicomplex.hpp"

namespace orbi {

using Json = nlohmann::ordered_json;

// Every from_json throws Error(parse) on malformed input; cross references
// are by id.

Json to_json(const DefiningGraph& g);
DefiningGraph defining_graph_from_json(const Json& j);

Json to_json(const GroupPresentation& p);
GroupPresentation presentation_from_json(const Json& j);

Json to_json(const MarkedGraph& g);
MarkedGraph marked_graph_from_json(const Json& j);

Json to_json(const Orbicomplex& c);
Orbicomplex orbicomplex_from_json(const Json& j);

/// Source and target are embedded in full.
Json to_json(const CoveringMap& f);
CoveringMap covering_map_from_json(const Json& j);

Json to_json(const Branch& b);
Json to_json(const AbelianInvariants& a);
Json to_json(const VerifyReport& r);
Json to_json(const NormalForm& nf);
Json to_json(const CompareReport& r);
Json to_json(const TwoTorsionLabeling& phi);

std::string to_string(const Rational& r);

/// Parses text, mapping syntax errors to Error(parse).
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace orbi
