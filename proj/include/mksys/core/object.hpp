#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mksys {

using Index = std::size_t;

// A finite set presented as a list of atomic factors. Elements are tuples,
// encoded row-major: the last factor varies fastest. Factors of size one are
// dropped on construction, so the unit is the empty product and tensoring is
// strictly associative and unital.
class FiniteObject {
 public:
  FiniteObject() = default;
  explicit FiniteObject(std::vector<std::string> labels);

  static FiniteObject unit() { return {}; }
  static FiniteObject range(std::size_t n, const std::string& prefix = "");
  static FiniteObject product(const std::vector<FiniteObject>& parts);

  FiniteObject tensor(const FiniteObject& other) const;
  FiniteObject power(std::size_t n) const;

  std::size_t size() const;
  std::size_t rank() const { return factors_.size(); }
  bool is_unit() const { return factors_.empty(); }
  std::size_t factor_size(std::size_t i) const { return factors_.at(i)->size(); }
  const std::vector<std::string>& factor_labels(std::size_t i) const { return *factors_.at(i); }
  std::vector<std::size_t> shape() const;

  FiniteObject factor(std::size_t i) const;
  FiniteObject select(std::span<const std::size_t> positions) const;
  FiniteObject slice(std::size_t first, std::size_t count) const;

  Index encode(std::span<const Index> tuple) const;
  std::vector<Index> decode(Index i) const;
  std::string label(Index i) const;

  // Shape equality; labels are presentation only.
  bool operator==(const FiniteObject& o) const;
  bool same_labels(const FiniteObject& o) const;

  std::string describe() const;

 private:
  using Labels = std::shared_ptr<const std::vector<std::string>>;
  std::vector<Labels> factors_;
};

inline FiniteObject operator*(const FiniteObject& a, const FiniteObject& b) { return a.tensor(b); }

// Mixed-radix index arithmetic between a source shape and a selection of its
// factors (repeats copy, omissions discard).
class FactorMap {
 public:
  FactorMap(const std::vector<std::size_t>& shape, std::span<const std::size_t> positions);
  Index operator()(Index i) const;
  std::size_t target_size() const { return target_size_; }

 private:
  struct Step {
    Index stride, size, out_stride;
  };
  std::vector<Step> steps_;
  std::size_t target_size_ = 1;
};

}  // namespace mksys
