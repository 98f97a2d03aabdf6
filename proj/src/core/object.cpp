#include "mksys/core/object.hpp"

#include <sstream>

#include "mksys/core/errors.hpp"

namespace mksys {

FiniteObject::FiniteObject(std::vector<std::string> labels) {
  if (labels.empty()) throw ObjectMismatch("empty finite object");
  if (labels.size() > 1) factors_.push_back(std::make_shared<const std::vector<std::string>>(std::move(labels)));
}

FiniteObject FiniteObject::range(std::size_t n, const std::string& prefix) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return FiniteObject(std::move(labels));
}

FiniteObject FiniteObject::product(const std::vector<FiniteObject>& parts) {
  FiniteObject out;
  for (const auto& p : parts) out.factors_.insert(out.factors_.end(), p.factors_.begin(), p.factors_.end());
  return out;
}

FiniteObject FiniteObject::tensor(const FiniteObject& other) const { return product({*this, other}); }

FiniteObject FiniteObject::power(std::size_t n) const {
  FiniteObject out;
  for (std::size_t i = 0; i < n; ++i) out.factors_.insert(out.factors_.end(), factors_.begin(), factors_.end());
  return out;
}

std::size_t FiniteObject::size() const {
  std::size_t n = 1;
  for (const auto& f : factors_) n *= f->size();
  return n;
}

std::vector<std::size_t> FiniteObject::shape() const {
  std::vector<std::size_t> s;
  s.reserve(factors_.size());
  for (const auto& f : factors_) s.push_back(f->size());
  return s;
}

FiniteObject FiniteObject::factor(std::size_t i) const {
  if (i >= factors_.size()) throw BadFactorSelection("factor " + std::to_string(i) + " out of range");
  FiniteObject out;
  out.factors_.push_back(factors_[i]);
  return out;
}

FiniteObject FiniteObject::select(std::span<const std::size_t> positions) const {
  FiniteObject out;
  for (auto p : positions) {
    if (p >= factors_.size()) throw BadFactorSelection("factor " + std::to_string(p) + " out of range");
    out.factors_.push_back(factors_[p]);
  }
  return out;
}

FiniteObject FiniteObject::slice(std::size_t first, std::size_t count) const {
  if (first + count > factors_.size()) throw BadFactorSelection("factor slice out of range");
  FiniteObject out;
  out.factors_.assign(factors_.begin() + first, factors_.begin() + first + count);
  return out;
}

Index FiniteObject::encode(std::span<const Index> tuple) const {
  if (tuple.size() != factors_.size()) throw BadFactorSelection("tuple length does not match rank");
  Index i = 0;
  for (std::size_t k = 0; k < tuple.size(); ++k) {
    if (tuple[k] >= factors_[k]->size()) throw BadFactorSelection("tuple entry out of range");
    i = i * factors_[k]->size() + tuple[k];
  }
  return i;
}

std::vector<Index> FiniteObject::decode(Index i) const {
  std::vector<Index> t(factors_.size());
  for (std::size_t k = factors_.size(); k-- > 0;) {
    t[k] = i % factors_[k]->size();
    i /= factors_[k]->size();
  }
  return t;
}

std::string FiniteObject::label(Index i) const {
  if (factors_.empty()) return "*";
  auto t = decode(i);
  if (t.size() == 1) return (*factors_[0])[t[0]];
  std::string s = "(";
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k) s += ",";
    s += (*factors_[k])[t[k]];
  }
  return s + ")";
}

bool FiniteObject::operator==(const FiniteObject& o) const {
  if (factors_.size() != o.factors_.size()) return false;
  for (std::size_t k = 0; k < factors_.size(); ++k)
    if (factors_[k]->size() != o.factors_[k]->size()) return false;
  return true;
}

bool FiniteObject::same_labels(const FiniteObject& o) const {
  if (!(*this == o)) return false;
  for (std::size_t k = 0; k < factors_.size(); ++k)
    if (factors_[k] != o.factors_[k] && *factors_[k] != *o.factors_[k]) return false;
  return true;
}

std::string FiniteObject::describe() const {
  if (factors_.empty()) return "unit";
  std::ostringstream os;
  for (std::size_t k = 0; k < factors_.size(); ++k) os << (k ? "x" : "") << factors_[k]->size();
  return os.str();
}

FactorMap::FactorMap(const std::vector<std::size_t>& shape, std::span<const std::size_t> positions) {
  std::vector<Index> stride(shape.size());
  Index s = 1;
  for (std::size_t k = shape.size(); k-- > 0;) {
    stride[k] = s;
    s *= shape[k];
  }
  steps_.resize(positions.size());
  Index out = 1;
  for (std::size_t q = positions.size(); q-- > 0;) {
    auto p = positions[q];
    if (p >= shape.size()) throw BadFactorSelection("factor " + std::to_string(p) + " out of range");
    steps_[q] = {stride[p], shape[p], out};
    out *= shape[p];
  }
  target_size_ = out;
}

Index FactorMap::operator()(Index i) const {
  Index out = 0;
  for (const auto& st : steps_) out += ((i / st.stride) % st.size) * st.out_stride;
  return out;
}

}  // namespace mksys
