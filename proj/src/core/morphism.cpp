#include "mksys/core/morphism.hpp"

#include <algorithm>
#include <sstream>

#include "mksys/core/errors.hpp"

namespace mksys {

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    mpz_class num(s.substr(0, slash), 10);
    mpz_class den(slash == std::string::npos ? std::string("1") : s.substr(slash + 1), 10);
    if (den == 0) throw ParseError("zero denominator in \"" + s + "\"");
    Rational q(num, den);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ParseError("not a rational: \"" + s + "\"");
  }
}

std::string to_decimal(const Rational& q, int digits) {
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  mpz_class num = q.get_num() * scale;
  mpz_class den = q.get_den();
  bool neg = num < 0;
  if (neg) num = -num;
  mpz_class r = (2 * num + den) / (2 * den);
  std::string s = r.get_str();
  if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  return (neg ? "-" : "") + s;
}

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::Det: return "det";
    case Kind::Stoch: return "stoch";
    case Kind::Poss: return "poss";
  }
  return "?";
}

Morphism::Morphism(FiniteObject dom, FiniteObject cod, Kind kind, std::vector<Row> rows)
    : dom_(std::move(dom)), cod_(std::move(cod)), kind_(kind), rows_(std::move(rows)) {
  validate();
}

Morphism::Morphism(FiniteObject dom, FiniteObject cod, Kind kind, std::vector<Row> rows, Unchecked)
    : dom_(std::move(dom)), cod_(std::move(cod)), kind_(kind), rows_(std::move(rows)) {}

void Morphism::validate() const {
  if (rows_.size() != dom_.size())
    throw InvalidKernel("expected " + std::to_string(dom_.size()) + " rows, got " + std::to_string(rows_.size()));
  const auto n = cod_.size();
  for (std::size_t a = 0; a < rows_.size(); ++a) {
    const auto& r = rows_[a];
    auto where = [&] { return " in row " + std::to_string(a) + " (" + dom_.label(a) + ")"; };
    if (r.empty()) throw InvalidKernel("empty row" + where());
    Rational sum = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r[k].col >= n) throw InvalidKernel("column out of range" + where());
      if (k && r[k].col <= r[k - 1].col) throw InvalidKernel("unsorted or repeated column" + where());
      if (kind_ == Kind::Stoch) {
        if (sgn(r[k].w) <= 0) throw InvalidKernel("nonpositive stored entry" + where());
      } else if (r[k].w != 1) {
        throw InvalidKernel("relation or function entry must have weight 1" + where());
      }
      sum += r[k].w;
    }
    if (kind_ == Kind::Stoch && sum != 1) throw InvalidKernel("row sums to " + to_string(sum) + where());
    if (kind_ == Kind::Det && r.size() != 1) throw InvalidKernel("function row is not a point" + where());
  }
}

Morphism Morphism::function(FiniteObject dom, FiniteObject cod, const std::vector<Index>& map) {
  std::vector<Row> rows(map.size());
  for (std::size_t a = 0; a < map.size(); ++a) rows[a].push_back({map[a], 1});
  return Morphism(std::move(dom), std::move(cod), Kind::Det, std::move(rows));
}

Morphism Morphism::function(FiniteObject dom, FiniteObject cod, const std::function<Index(Index)>& fn) {
  std::vector<Index> map(dom.size());
  for (Index a = 0; a < map.size(); ++a) map[a] = fn(a);
  return function(std::move(dom), std::move(cod), map);
}

Morphism Morphism::stochastic(FiniteObject dom, FiniteObject cod, const std::vector<std::vector<Rational>>& dense) {
  std::vector<Row> rows(dense.size());
  for (std::size_t a = 0; a < dense.size(); ++a) {
    if (dense[a].size() != cod.size())
      throw InvalidKernel("row " + std::to_string(a) + " has " + std::to_string(dense[a].size()) + " columns, expected " +
                          std::to_string(cod.size()));
    for (std::size_t c = 0; c < dense[a].size(); ++c) {
      if (sgn(dense[a][c]) < 0) throw InvalidKernel("negative entry in row " + std::to_string(a));
      if (sgn(dense[a][c]) > 0) rows[a].push_back({c, dense[a][c]});
    }
  }
  return Morphism(std::move(dom), std::move(cod), Kind::Stoch, std::move(rows));
}

Morphism Morphism::possibilistic(FiniteObject dom, FiniteObject cod, const std::vector<std::vector<bool>>& dense) {
  std::vector<Row> rows(dense.size());
  for (std::size_t a = 0; a < dense.size(); ++a) {
    if (dense[a].size() != cod.size()) throw InvalidKernel("row " + std::to_string(a) + " has the wrong width");
    for (std::size_t c = 0; c < dense[a].size(); ++c)
      if (dense[a][c]) rows[a].push_back({c, 1});
  }
  return Morphism(std::move(dom), std::move(cod), Kind::Poss, std::move(rows));
}

Morphism Morphism::distribution(FiniteObject cod, const std::vector<Rational>& weights) {
  return stochastic(FiniteObject::unit(), std::move(cod), {weights});
}

Morphism Morphism::dirac(FiniteObject cod, Index point) {
  return function(FiniteObject::unit(), std::move(cod), std::vector<Index>{point});
}

Rational Morphism::at(Index a, Index c) const {
  const auto& r = rows_.at(a);
  auto it = std::lower_bound(r.begin(), r.end(), c, [](const Entry& e, Index v) { return e.col < v; });
  if (it != r.end() && it->col == c) return it->w;
  return 0;
}

Index Morphism::image(Index a) const {
  const auto& r = rows_.at(a);
  if (r.size() != 1 || r[0].w != 1) throw InvalidKernel("row " + std::to_string(a) + " is not a point");
  return r[0].col;
}

bool Morphism::rows_are_points() const {
  for (const auto& r : rows_)
    if (r.size() != 1 || r[0].w != 1) return false;
  return true;
}

std::vector<Index> Morphism::as_function() const {
  std::vector<Index> m(rows_.size());
  for (Index a = 0; a < m.size(); ++a) m[a] = image(a);
  return m;
}

bool Morphism::operator==(const Morphism& o) const {
  return dom_ == o.dom_ && cod_ == o.cod_ && rows_ == o.rows_;
}

long Morphism::first_difference(const Morphism& o) const {
  if (!(dom_ == o.dom_) || !(cod_ == o.cod_)) return 0;
  for (std::size_t a = 0; a < rows_.size(); ++a)
    if (rows_[a] != o.rows_[a]) return static_cast<long>(a);
  return -1;
}

}  // namespace mksys
