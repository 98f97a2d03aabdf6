#pragma once

#include <json.hpp>

#include "mksys/core/morphism.hpp"

namespace mksys {

using Json = nlohmann::json;

Json object_to_json(const FiniteObject& x);
FiniteObject object_from_json(const Json& j);

// {"kind": "det"|"stoch"|"poss", "dom": ..., "cod": ..., "rows": ...}.
// det rows are target indices, stoch rows dense "p/q" strings, poss rows
// dense 0/1 arrays.
Json morphism_rows_to_json(const Morphism& f);
Morphism morphism_from_rows(const FiniteObject& dom, const FiniteObject& cod, Kind kind, const Json& rows);
Kind kind_from_name(const std::string& name);

Json morphism_to_json(const Morphism& f);
Morphism morphism_from_json(const Json& j);

}  // namespace mksys
