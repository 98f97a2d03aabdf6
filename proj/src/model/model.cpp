#include "mksys/model/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mksys {

namespace {

const std::vector<std::string> kExtraKeys{"schema_version", "notes", "replay"};

std::string where(const std::string& section, const std::string& name) { return section + "/" + name; }

[[noreturn]] void dangling(const std::string& entity, const std::string& section, const std::string& name) {
  throw ParseError(entity + ": unknown " + section + " entry '" + name + "'");
}

const Json& field(const Json& j, const char* key, const std::string& entity) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(entity + ": missing \"" + key + "\"");
  return j[key];
}

std::string kind_of(const Json& j, const std::string& entity) {
  const auto& k = field(j, "kind", entity);
  if (!k.is_string()) throw ParseError(entity + ": \"kind\" must be a string");
  return k.get<std::string>();
}

}  // namespace

const std::vector<std::string>& Model::sections() {
  static const std::vector<std::string> s{"objects", "kernels",  "lenses",   "charts", "squares",
                                          "sys_squares", "systems", "policies", "wirings", "mealy"};
  return s;
}

Model::Model() : doc_({{"schema_version", schema_version}}) {}

Model::Model(Json doc) : doc_(std::move(doc)) {
  if (!doc_.is_object()) throw ParseError("model file must be a JSON object");
  if (!doc_.contains("schema_version") || doc_["schema_version"] != schema_version)
    throw ParseError("model file needs \"schema_version\": " + std::to_string(schema_version));
  for (const auto& [key, value] : doc_.items()) {
    const bool known = std::find(sections().begin(), sections().end(), key) != sections().end();
    if (!known && std::find(kExtraKeys.begin(), kExtraKeys.end(), key) == kExtraKeys.end())
      throw ParseError("unknown section \"" + key + "\"");
    if (known && !value.is_object()) throw ParseError("section \"" + key + "\" must map names to entries");
  }
  check_references();
}

Model Model::parse(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return Model(std::move(j));
}

Model Model::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Model::dump() const { return doc_.dump(2) + "\n"; }

void Model::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << dump();
}

std::vector<std::string> Model::names(const std::string& section) const {
  std::vector<std::string> out;
  if (doc_.contains(section))
    for (const auto& [k, v] : doc_[section].items()) out.push_back(k);
  return out;
}

bool Model::has(const std::string& section, const std::string& name) const {
  return doc_.contains(section) && doc_[section].contains(name);
}

const Json& Model::entry(const std::string& section, const std::string& name) const {
  if (!has(section, name)) throw ParseError("no " + section + " entry named '" + name + "'");
  return doc_[section][name];
}

void Model::put(const std::string& section, const std::string& name, Json value) {
  if (std::find(sections().begin(), sections().end(), section) == sections().end())
    throw ParseError("unknown section \"" + section + "\"");
  doc_[section][name] = std::move(value);
}

void Model::check_references() const {
  auto need = [&](const Json& v, const std::string& section, const std::string& entity) {
    if (v.is_string() && !has(section, v.get<std::string>())) dangling(entity, section, v.get<std::string>());
  };
  for (const auto& name : names("kernels")) {
    const auto entity = where("kernels", name);
    const auto& k = entry("kernels", name);
    need(field(k, "dom", entity), "objects", entity);
    need(field(k, "cod", entity), "objects", entity);
  }
  for (const auto& name : names("policies")) {
    const auto entity = where("policies", name);
    const auto& p = entry("policies", name);
    const auto kind = kind_of(p, entity);
    if (kind == "markov") {
      need(field(p, "step", entity), "kernels", entity);
    } else if (kind == "exogenous") {
      need(field(p, "dist", entity), "kernels", entity);
    } else if (kind == "per_edge") {
      for (const auto& k : field(p, "kernels", entity)) need(k, "kernels", entity);
    } else {
      throw ParseError(entity + ": unknown policy kind \"" + kind + "\"");
    }
  }
  for (const auto& name : names("systems")) {
    const auto entity = where("systems", name);
    const auto& s = entry("systems", name);
    const auto kind = kind_of(s, entity);
    if (kind == "open_markov") {
      for (const char* key : {"state", "input", "output"}) need(field(s, key, entity), "objects", entity);
      for (const char* key : {"expose", "update"}) need(field(s, key, entity), "kernels", entity);
      field(s, "horizon", entity);
    } else if (kind != "indexed" && kind != "clock") {
      throw ParseError(entity + ": unknown system kind \"" + kind + "\"");
    }
    if (s.contains("initial")) need(s["initial"], "kernels", entity);
    if (s.contains("policy")) need(s["policy"], "policies", entity);
  }
  for (const auto& name : names("wirings")) {
    const auto entity = where("wirings", name);
    const auto& w = entry("wirings", name);
    const auto kind = kind_of(w, entity);
    if (kind == "lift") {
      need(field(w, "lens", entity), "lenses", entity);
    } else if (kind != "identity" && kind != "indexed") {
      throw ParseError(entity + ": unknown wiring kind \"" + kind + "\"");
    }
    if (w.contains("couplings"))
      for (const auto& k : w["couplings"]) need(k, "kernels", entity);
  }
}

FiniteObject Model::resolve_object(const Json& j) const {
  return j.is_string() ? object(j.get<std::string>()) : object_from_json(j);
}

Morphism Model::resolve_kernel(const Json& j) const {
  if (j.is_string()) return kernel(j.get<std::string>());
  for (const char* key : {"kind", "dom", "cod", "rows"})
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("kernel is missing \"") + key + "\"");
  return morphism_from_rows(resolve_object(j["dom"]), resolve_object(j["cod"]),
                            kind_from_name(j["kind"].get<std::string>()), j["rows"]);
}

FiniteObject Model::object(const std::string& name) const { return object_from_json(entry("objects", name)); }

Morphism Model::kernel(const std::string& name) const {
  try {
    return resolve_kernel(entry("kernels", name));
  } catch (const InvalidKernel& e) {
    throw InvalidKernel(where("kernels", name) + ": " + e.what());
  }
}

DetLens Model::lens(const std::string& name) const { return lens_from_json(entry("lenses", name)); }
Chart Model::chart(const std::string& name) const { return chart_from_json(entry("charts", name)); }
XYSquare Model::square(const std::string& name) const { return xy_from_json(entry("squares", name)); }
SysXYSquare Model::sys_square(const std::string& name) const { return sys_xy_from_json(entry("sys_squares", name)); }
GMealy Model::mealy(const std::string& name) const { return mealy_from_json(entry("mealy", name)); }

InputPolicy Model::resolve_policy(const Json& j, const FiniteObject& O, const FiniteObject& I, std::size_t horizon,
                                  bool one_step) const {
  const Json& p = j.is_string() ? entry("policies", j.get<std::string>()) : j;
  const auto kind = kind_of(p, "policy");
  if (kind == "per_edge") {
    InputPolicy out;
    for (const auto& k : p["kernels"]) out.push_back(resolve_kernel(k));
    if (out.size() < horizon) throw ShapeMismatch("per-edge policy has fewer kernels than the horizon");
    out.resize(horizon);
    return out;
  }
  if (!one_step) throw ParseError("a " + kind + " policy needs a one-step system");
  if (kind == "markov") return markov_policy(resolve_kernel(p["step"]), O, I, horizon);
  if (kind == "exogenous") return exogenous_policy(resolve_kernel(p["dist"]), O, horizon);
  throw ParseError("unknown policy kind \"" + kind + "\"");
}

ModelSystem Model::system(const std::string& name, std::optional<std::size_t> horizon) const {
  const auto& s = entry("systems", name);
  const auto entity = where("systems", name);
  const auto kind = kind_of(s, entity);
  ModelSystem out;
  bool one_step = false;
  FiniteObject O, I;
  if (kind == "open_markov") {
    one_step = true;
    const auto T = horizon.value_or(field(s, "horizon", entity).get<std::size_t>());
    const auto S = resolve_object(s["state"]);
    I = resolve_object(s["input"]);
    O = resolve_object(s["output"]);
    out.sys = make_open_markov_system(S, I, O, resolve_kernel(s["expose"]), resolve_kernel(s["update"]), T);
  } else if (kind == "clock") {
    out.sys = clock_system(horizon.value_or(field(s, "horizon", entity).get<std::size_t>()));
  } else {
    out.sys = system_from_json(s);
    if (horizon && *horizon > out.sys.horizon())
      throw ShapeMismatch(entity + ": requested horizon exceeds the stored horizon " +
                          std::to_string(out.sys.horizon()));
  }
  const auto T = out.sys.horizon();
  if (s.contains("initial")) out.initial = resolve_kernel(s["initial"]);
  else if (out.sys.S.at[0].is_unit()) out.initial = Morphism::dirac(FiniteObject::unit(), 0);
  if (s.contains("policy")) out.policy = resolve_policy(s["policy"], O, I, T, one_step);
  return out;
}

SystemWiring Model::wiring(const std::string& name, const GSystem& sys) const {
  const auto& w = entry("wirings", name);
  const auto kind = kind_of(w, where("wirings", name));
  if (kind == "identity") return identity_wiring(sys);
  if (kind == "lift") {
    const auto& l = w["lens"];
    return lift_lens(l.is_string() ? lens(l.get<std::string>()) : lens_from_json(l), sys.horizon());
  }
  return wiring_from_json(w);
}

std::optional<std::vector<Morphism>> Model::couplings(const std::string& name) const {
  const auto& w = entry("wirings", name);
  if (!w.contains("couplings")) return std::nullopt;
  std::vector<Morphism> out;
  for (const auto& k : w["couplings"]) out.push_back(resolve_kernel(k));
  return out;
}

std::vector<Finding> check_model(const Model& m) {
  std::vector<Finding> out;
  auto guard = [&](const std::string& section, const std::string& name, auto&& fn) {
    const auto entity = where(section, name);
    try {
      if (auto c = fn(); !c) out.push_back({entity, c.law, c.detail});
    } catch (const InvalidKernel& e) {
      out.push_back({entity, "kernel", e.what()});
    } catch (const Error& e) {
      out.push_back({entity, "construction", e.what()});
    }
  };
  for (const auto& n : m.names("objects")) guard("objects", n, [&] { return (m.object(n), Check::pass()); });
  for (const auto& n : m.names("kernels")) guard("kernels", n, [&] { return (m.kernel(n), Check::pass()); });
  for (const auto& n : m.names("lenses")) guard("lenses", n, [&] { return validate_lens(m.lens(n)); });
  for (const auto& n : m.names("charts")) guard("charts", n, [&] { return validate_chart(m.chart(n)); });
  for (const auto& n : m.names("squares")) guard("squares", n, [&] { return validate_xy(m.square(n)); });
  for (const auto& n : m.names("sys_squares"))
    guard("sys_squares", n, [&] { return validate_sys_xy(m.sys_square(n)); });
  for (const auto& n : m.names("mealy")) guard("mealy", n, [&] { return validate_mealy(m.mealy(n)); });
  for (const auto& n : m.names("systems"))
    guard("systems", n, [&] {
      const auto s = m.system(n);
      if (auto c = validate_system(s.sys); !c) return c;
      if (!s.initial) return Check::pass();
      const auto traj = unroll_trajectory(s.sys, *s.initial, s.policy);
      return validate_trajectory(s.sys, traj);
    });
  for (const auto& n : m.names("wirings"))
    guard("wirings", n, [&] {
      const auto& w = m.entry("wirings", n);
      if (kind_of(w, n) == "lift") {
        const auto& l = w["lens"];
        return validate_lens(l.is_string() ? m.lens(l.get<std::string>()) : lens_from_json(l));
      }
      if (kind_of(w, n) == "indexed") {
        for (const auto& l : wiring_from_json(w).lens)
          if (auto c = validate_lens(l); !c) return c;
      }
      if (w.contains("couplings")) m.couplings(n);
      return Check::pass();
    });
  return out;
}

}  // namespace mksys
