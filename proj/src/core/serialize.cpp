#include "mksys/core/serialize.hpp"

#include "mksys/core/errors.hpp"

namespace mksys {

Json object_to_json(const FiniteObject& x) {
  Json factors = Json::array();
  for (std::size_t k = 0; k < x.rank(); ++k) factors.push_back(x.factor_labels(k));
  return Json{{"factors", factors}};
}

FiniteObject object_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("factors") || !j["factors"].is_array())
    throw ParseError("object needs a \"factors\" array");
  std::vector<FiniteObject> parts;
  for (const auto& f : j["factors"]) {
    if (!f.is_array() || f.empty()) throw ParseError("each factor is a nonempty label array");
    parts.emplace_back(f.get<std::vector<std::string>>());
  }
  return FiniteObject::product(parts);
}

Kind kind_from_name(const std::string& name) {
  if (name == "det") return Kind::Det;
  if (name == "stoch") return Kind::Stoch;
  if (name == "poss") return Kind::Poss;
  throw ParseError("unknown kernel kind \"" + name + "\"");
}

Json morphism_rows_to_json(const Morphism& f) {
  Json rows = Json::array();
  const auto n = f.cod().size();
  for (Index a = 0; a < f.dom().size(); ++a) {
    const auto& r = f.row(a);
    if (f.kind() == Kind::Det) {
      rows.push_back(r.at(0).col);
    } else if (f.kind() == Kind::Stoch) {
      std::vector<std::string> dense(n, "0/1");
      for (const auto& e : r) dense[e.col] = to_string(e.w);
      rows.push_back(dense);
    } else {
      std::vector<int> dense(n, 0);
      for (const auto& e : r) dense[e.col] = 1;
      rows.push_back(dense);
    }
  }
  return rows;
}

Morphism morphism_from_rows(const FiniteObject& dom, const FiniteObject& cod, Kind kind, const Json& rows) {
  if (!rows.is_array()) throw ParseError("rows must be an array");
  if (rows.size() != dom.size())
    throw InvalidKernel("expected " + std::to_string(dom.size()) + " rows, got " + std::to_string(rows.size()));
  if (kind == Kind::Det) {
    std::vector<Index> map;
    for (const auto& r : rows) {
      if (!r.is_number_unsigned()) throw ParseError("function rows are target indices");
      map.push_back(r.get<Index>());
      if (map.back() >= cod.size()) throw InvalidKernel("row " + std::to_string(map.size() - 1) + " targets an index out of range");
    }
    return Morphism::function(dom, cod, map);
  }
  if (kind == Kind::Stoch) {
    std::vector<std::vector<Rational>> dense;
    for (const auto& r : rows) {
      if (!r.is_array()) throw ParseError("stochastic rows are arrays of \"p/q\" strings");
      std::vector<Rational> row;
      for (const auto& e : r) {
        if (!e.is_string()) throw ParseError("stochastic entries are \"p/q\" strings");
        row.push_back(parse_rational(e.get<std::string>()));
      }
      dense.push_back(std::move(row));
    }
    return Morphism::stochastic(dom, cod, dense);
  }
  std::vector<std::vector<bool>> dense;
  for (const auto& r : rows) {
    if (!r.is_array()) throw ParseError("relation rows are 0/1 arrays");
    std::vector<bool> row;
    for (const auto& e : r) row.push_back(e.get<int>() != 0);
    dense.push_back(std::move(row));
  }
  return Morphism::possibilistic(dom, cod, dense);
}

Json morphism_to_json(const Morphism& f) {
  return Json{{"kind", kind_name(f.kind())},
              {"dom", object_to_json(f.dom())},
              {"cod", object_to_json(f.cod())},
              {"rows", morphism_rows_to_json(f)}};
}

Morphism morphism_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("kernel must be a JSON object");
  for (const char* key : {"kind", "dom", "cod", "rows"})
    if (!j.contains(key)) throw ParseError(std::string("kernel is missing \"") + key + "\"");
  return morphism_from_rows(object_from_json(j["dom"]), object_from_json(j["cod"]),
                            kind_from_name(j["kind"].get<std::string>()), j["rows"]);
}

}  // namespace mksys
