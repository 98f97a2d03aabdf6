#include "mksys/time/system.hpp"

namespace mksys {

namespace {

Json kernel_list(const std::vector<Morphism>& ks) {
  Json j = Json::array();
  for (const auto& k : ks) j.push_back(morphism_to_json(k));
  return j;
}

std::vector<Morphism> kernels_from(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of kernels");
  std::vector<Morphism> out;
  for (const auto& k : j) out.push_back(morphism_from_json(k));
  return out;
}

}  // namespace

Json indexed_to_json(const IndexedObject& x) {
  Json at = Json::array(), coords = Json::array();
  for (std::size_t n = 0; n < x.at.size(); ++n) {
    at.push_back(object_to_json(x.at[n]));
    coords.push_back(x.coordinate_names(n));
  }
  return {{"at", at}, {"restrict", kernel_list(x.restrict)}, {"coords", coords}};
}

IndexedObject indexed_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("at") || !j.contains("restrict"))
    throw ParseError("indexed object needs \"at\" and \"restrict\"");
  IndexedObject x;
  for (const auto& o : j["at"]) x.at.push_back(object_from_json(o));
  x.restrict = kernels_from(j["restrict"]);
  if (j.contains("coords")) x.coords = j["coords"].get<std::vector<std::vector<std::string>>>();
  if (x.at.empty() || x.restrict.size() + 1 != x.at.size())
    throw ParseError("indexed object needs one restriction per edge");
  return x;
}

Json system_to_json(const GSystem& sys) {
  return {{"kind", "indexed"},
          {"S", indexed_to_json(sys.S)},
          {"I", indexed_to_json(sys.I)},
          {"O", indexed_to_json(sys.O)},
          {"expose", kernel_list(sys.expose)},
          {"update", kernel_list(sys.update)}};
}

GSystem system_from_json(const Json& j) {
  for (const char* key : {"S", "I", "O", "expose", "update"})
    if (!j.contains(key)) throw ParseError(std::string("indexed system is missing \"") + key + "\"");
  return {indexed_from_json(j["S"]), indexed_from_json(j["I"]), indexed_from_json(j["O"]), kernels_from(j["expose"]),
          kernels_from(j["update"])};
}

Json wiring_to_json(const SystemWiring& w) {
  Json lenses = Json::array();
  for (const auto& l : w.lens) lenses.push_back(lens_to_json(l));
  return {{"kind", "indexed"},
          {"I2", indexed_to_json(w.I2)},
          {"O2", indexed_to_json(w.O2)},
          {"lens", lenses},
          {"last_f", morphism_to_json(w.last_f)}};
}

SystemWiring wiring_from_json(const Json& j) {
  for (const char* key : {"I2", "O2", "lens", "last_f"})
    if (!j.contains(key)) throw ParseError(std::string("indexed wiring is missing \"") + key + "\"");
  SystemWiring w{indexed_from_json(j["I2"]), indexed_from_json(j["O2"]), {}, morphism_from_json(j["last_f"])};
  for (const auto& l : j["lens"]) w.lens.push_back(lens_from_json(l));
  return w;
}

Json policy_to_json(const InputPolicy& p) { return {{"kind", "per_edge"}, {"kernels", kernel_list(p)}}; }

InputPolicy policy_from_json(const Json& j) {
  if (!j.contains("kernels")) throw ParseError("per-edge policy needs \"kernels\"");
  return kernels_from(j["kernels"]);
}

}  // namespace mksys
