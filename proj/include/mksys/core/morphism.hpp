#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mksys/core/object.hpp"
#include "mksys/core/rational.hpp"

namespace mksys {

// Det: total functions. Stoch: exact-rational stochastic matrices.
// Poss: relations with nonempty images (Kleisli category of nonempty subsets).
enum class Kind { Det, Stoch, Poss };

std::string kind_name(Kind k);

struct Entry {
  Index col;
  Rational w;
  bool operator==(const Entry& o) const { return col == o.col && w == o.w; }
};
using Row = std::vector<Entry>;

// All three instances share one sparse representation: each row lists its
// support in increasing column order. Stochastic rows carry their
// probabilities; possibilistic and deterministic rows carry weight 1.
class Morphism {
 public:
  struct Unchecked {};

  Morphism() = default;
  Morphism(FiniteObject dom, FiniteObject cod, Kind kind, std::vector<Row> rows);
  Morphism(FiniteObject dom, FiniteObject cod, Kind kind, std::vector<Row> rows, Unchecked);

  static Morphism function(FiniteObject dom, FiniteObject cod, const std::vector<Index>& map);
  static Morphism function(FiniteObject dom, FiniteObject cod, const std::function<Index(Index)>& fn);
  static Morphism stochastic(FiniteObject dom, FiniteObject cod,
                             const std::vector<std::vector<Rational>>& dense);
  static Morphism possibilistic(FiniteObject dom, FiniteObject cod,
                                const std::vector<std::vector<bool>>& dense);
  static Morphism distribution(FiniteObject cod, const std::vector<Rational>& weights);
  static Morphism dirac(FiniteObject cod, Index point);

  const FiniteObject& dom() const { return dom_; }
  const FiniteObject& cod() const { return cod_; }
  Kind kind() const { return kind_; }
  const Row& row(Index a) const { return rows_[a]; }
  const std::vector<Row>& rows() const { return rows_; }

  // Weight of cell (a, c); zero when outside the support.
  Rational at(Index a, Index c) const;
  // For rows that are a single point.
  Index image(Index a) const;
  bool rows_are_points() const;
  std::vector<Index> as_function() const;

  // Same shape and same weighted rows; the instance tag only matters through
  // the weights, so a 0/1 stochastic kernel equals the function it encodes.
  bool operator==(const Morphism& o) const;

  // Row index of the first difference, or -1.
  long first_difference(const Morphism& o) const;

 private:
  void validate() const;

  FiniteObject dom_, cod_;
  Kind kind_ = Kind::Det;
  std::vector<Row> rows_;
};

}  // namespace mksys
