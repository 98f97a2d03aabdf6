#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mksys/core/markov.hpp"

namespace mksys {

// Builds a string-diagram composite wire by wire. Wires are named groups of
// factors; apply() feeds some wires to a kernel and names its outputs, and
// result() permutes, copies or discards the surviving wires. Internally the
// permutations are deterministic index maps applied to the sparse rows.
class Circuit {
 public:
  using Port = std::pair<std::string, FiniteObject>;

  explicit Circuit(const std::vector<Port>& inputs);

  Circuit& apply(const Morphism& f, const std::vector<std::string>& in, const std::vector<Port>& out);
  Circuit& copy(const std::string& from, const std::string& to);
  Circuit& rename(const std::string& from, const std::string& to);

  const FiniteObject& object(const std::string& name) const;
  Morphism result(const std::vector<std::string>& out) const;

 private:
  struct Wire {
    std::string name;
    FiniteObject obj;
    std::size_t first;  // first factor position in the current codomain
  };
  std::size_t find(const std::string& name) const;
  std::vector<std::size_t> positions(const std::vector<std::string>& names) const;
  void relayout();

  FiniteObject dom_;
  std::vector<Wire> wires_;
  std::vector<std::size_t> shape_;
  std::vector<Row> rows_;
  Kind kind_ = Kind::Det;
};

}  // namespace mksys
