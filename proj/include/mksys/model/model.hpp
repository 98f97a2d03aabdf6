#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mksys/mealy/mealy.hpp"

namespace mksys {

// A system entry resolved against its model: the system itself plus the
// optional initial law and input policy used by unroll.
struct ModelSystem {
  GSystem sys;
  std::optional<Morphism> initial;
  InputPolicy policy;
};

struct Finding {
  std::string entity;  // "section/name"
  std::string law;
  std::string detail;
};

// A model file: canonical JSON whose sections hold named entities that refer
// to each other by name. Construction checks structure and that every
// reference resolves; the module validators run in check_model.
class Model {
 public:
  static constexpr int schema_version = 1;
  static const std::vector<std::string>& sections();

  Model();
  explicit Model(Json doc);
  static Model parse(std::string_view text);
  static Model load(const std::string& path);

  // Sorted keys, two-space indent, trailing newline.
  std::string dump() const;
  void save(const std::string& path) const;
  const Json& doc() const { return doc_; }

  std::vector<std::string> names(const std::string& section) const;
  bool has(const std::string& section, const std::string& name) const;
  const Json& entry(const std::string& section, const std::string& name) const;
  void put(const std::string& section, const std::string& name, Json value);

  FiniteObject object(const std::string& name) const;
  Morphism kernel(const std::string& name) const;
  DetLens lens(const std::string& name) const;
  Chart chart(const std::string& name) const;
  XYSquare square(const std::string& name) const;
  SysXYSquare sys_square(const std::string& name) const;
  GMealy mealy(const std::string& name) const;
  // horizon overrides the stored horizon of one-step system descriptions.
  ModelSystem system(const std::string& name, std::optional<std::size_t> horizon = {}) const;
  SystemWiring wiring(const std::string& name, const GSystem& sys) const;
  // Per-edge couplings stored with a wiring, if any.
  std::optional<std::vector<Morphism>> couplings(const std::string& wiring) const;

  // Values that are either a name in the given section or an inline entity.
  FiniteObject resolve_object(const Json& j) const;
  Morphism resolve_kernel(const Json& j) const;

 private:
  void check_references() const;
  InputPolicy resolve_policy(const Json& j, const FiniteObject& O, const FiniteObject& I, std::size_t horizon,
                             bool one_step) const;

  Json doc_;
};

// Builds and validates every entity; empty when the model is sound.
std::vector<Finding> check_model(const Model& m);

}  // namespace mksys
