#include "mksys/core/circuit.hpp"

#include <algorithm>

namespace mksys {

namespace detail {
void merge_row(Row& r, Kind kind);
}

Circuit::Circuit(const std::vector<Port>& inputs) {
  std::vector<FiniteObject> objs;
  for (const auto& [name, obj] : inputs) {
    wires_.push_back({name, obj, 0});
    objs.push_back(obj);
  }
  dom_ = FiniteObject::product(objs);
  relayout();
  rows_.resize(dom_.size());
  for (Index i = 0; i < rows_.size(); ++i) rows_[i].push_back({i, 1});
}

void Circuit::relayout() {
  shape_.clear();
  for (auto& w : wires_) {
    w.first = shape_.size();
    auto s = w.obj.shape();
    shape_.insert(shape_.end(), s.begin(), s.end());
  }
}

std::size_t Circuit::find(const std::string& name) const {
  for (std::size_t k = 0; k < wires_.size(); ++k)
    if (wires_[k].name == name) return k;
  throw BadFactorSelection("circuit has no wire named " + name);
}

std::vector<std::size_t> Circuit::positions(const std::vector<std::string>& names) const {
  std::vector<std::size_t> pos;
  for (const auto& n : names) {
    const auto& w = wires_[find(n)];
    for (std::size_t k = 0; k < w.obj.rank(); ++k) pos.push_back(w.first + k);
  }
  return pos;
}

const FiniteObject& Circuit::object(const std::string& name) const { return wires_[find(name)].obj; }

Circuit& Circuit::apply(const Morphism& f, const std::vector<std::string>& in, const std::vector<Port>& out) {
  std::vector<FiniteObject> in_objs, out_objs;
  std::vector<bool> used(wires_.size(), false);
  for (const auto& n : in) {
    auto k = find(n);
    if (used[k]) throw BadFactorSelection("wire " + n + " fed twice");
    used[k] = true;
    in_objs.push_back(wires_[k].obj);
  }
  for (const auto& p : out) out_objs.push_back(p.second);
  if (!(FiniteObject::product(in_objs) == f.dom()))
    throw ObjectMismatch("circuit: inputs " + FiniteObject::product(in_objs).describe() + " do not match domain " +
                         f.dom().describe());
  if (!(FiniteObject::product(out_objs) == f.cod()))
    throw ObjectMismatch("circuit: outputs do not match codomain " + f.cod().describe());

  std::vector<std::string> rest;
  for (std::size_t k = 0; k < wires_.size(); ++k)
    if (!used[k]) rest.push_back(wires_[k].name);
  const FactorMap fin(shape_, positions(in));
  const FactorMap frest(shape_, positions(rest));
  const Index nrest = frest.target_size();
  kind_ = join_kind(kind_, f.kind());
  const bool weighted = kind_ == Kind::Stoch;

  for (auto& r : rows_) {
    Row acc;
    acc.reserve(r.size());
    for (const auto& [col, w] : r) {
      const Index i = fin(col), rr = frest(col);
      for (const auto& [c, v] : f.row(i)) acc.push_back({c * nrest + rr, weighted ? Rational(w * v) : Rational(1)});
    }
    detail::merge_row(acc, kind_);
    r = std::move(acc);
  }

  std::vector<Wire> next;
  for (const auto& p : out) next.push_back({p.first, p.second, 0});
  for (const auto& n : rest) next.push_back(wires_[find(n)]);
  for (std::size_t a = 0; a < next.size(); ++a)
    for (std::size_t b = a + 1; b < next.size(); ++b)
      if (next[a].name == next[b].name) throw BadFactorSelection("duplicate wire name " + next[a].name);
  wires_ = std::move(next);
  relayout();
  return *this;
}

Circuit& Circuit::copy(const std::string& from, const std::string& to) {
  const FiniteObject obj = object(from);
  return apply(mksys::copy(obj), {from}, {{from, obj}, {to, obj}});
}

Circuit& Circuit::rename(const std::string& from, const std::string& to) {
  wires_[find(from)].name = to;
  return *this;
}

Morphism Circuit::result(const std::vector<std::string>& out) const {
  std::vector<FiniteObject> objs;
  for (const auto& n : out) objs.push_back(object(n));
  const FactorMap fm(shape_, positions(out));
  std::vector<Row> rows(rows_.size());
  for (std::size_t a = 0; a < rows_.size(); ++a) {
    Row acc;
    acc.reserve(rows_[a].size());
    for (const auto& [col, w] : rows_[a]) acc.push_back({fm(col), w});
    detail::merge_row(acc, kind_);
    rows[a] = std::move(acc);
  }
  return Morphism(dom_, FiniteObject::product(objs), kind_, std::move(rows), Morphism::Unchecked{});
}

}  // namespace mksys
