#pragma once

#include <optional>

#include "mksys/time/system.hpp"

namespace mksys {

// Inverse-CDF partition of (0, 1] for each row of a stochastic kernel.
// Interval j of a cell is (breaks[j], breaks[j+1]] and maps to target j, in
// codomain label order; zero-mass targets keep an empty interval.
struct IntervalPartition {
  FiniteObject dom, cod;
  std::vector<std::vector<Rational>> breaks;  // per cell, |cod| + 1 points

  bool operator==(const IntervalPartition& o) const { return dom == o.dom && cod == o.cod && breaks == o.breaks; }
};

IntervalPartition uniformize(const Morphism& f);
Check validate_partition(const IntervalPartition& p);

// G(x, u) for u in (0, 1].
Index evaluate(const IntervalPartition& p, Index cell, const Rational& u);
// Lebesgue measure of {u : G(x, u) <= t}.
Rational cumulative(const IntervalPartition& p, Index cell, Index t);
// Interval lengths as a stochastic kernel.
Morphism to_kernel(const IntervalPartition& p);
// The function when every cell is a single full interval.
std::optional<Morphism> as_function(const IntervalPartition& p);

// The finite form of the uniform parameter: atoms of the common refinement
// of all cells, their lengths, and a deterministic G : dom⊗Ω -> cod with
// (id ⊗ lambda) ; G = f.
struct UniformParameter {
  FiniteObject omega;
  Morphism lambda;
  Morphism g;
  std::vector<Rational> cuts;  // refinement breakpoints, 0 .. 1
};

UniformParameter uniform_parameter(const IntervalPartition& p);

Json partition_to_json(const IntervalPartition& p);
IntervalPartition partition_from_json(const Json& j);

// A system whose update reads a Knightian choice from Ω0 on every step:
// update^n : S(n)⊗I(n+1)⊗Ω0 -> S(n+1), deterministic.
struct KnightSystem {
  FiniteObject omega;
  IndexedObject S, I, O, Omega;  // Omega(n) = Ω0^n, the choices made so far
  std::vector<Morphism> expose, update;

  std::size_t horizon() const { return S.horizon(); }
};

Check validate_knight(const KnightSystem& k);
// Unit state and interface; the only data is the choice object.
KnightSystem knight_system(const FiniteObject& omega0, std::size_t horizon);
// History system whose step is g : S⊗I⊗Ω0 -> S.
KnightSystem make_knight_system(const FiniteObject& S, const FiniteObject& I, const FiniteObject& O,
                                const Morphism& expose, const Morphism& g, const FiniteObject& omega0,
                                std::size_t horizon);
// The underlying system with Ω0 forgotten (Ω0 must be unit) or averaged by lambda.
GSystem knight_underlying(const KnightSystem& k);
GSystem randomize(const KnightSystem& k, const Morphism& lambda);

// Trajectory family indexed by choice lists: phi^n : Ω(n) -> S(n),
// s^n, p^n : Ω(n) -> ....
struct KnightBehavior {
  std::vector<Morphism> phi, s, p;
};

KnightBehavior knight_unroll(const KnightSystem& k, const Morphism& initial, const InputPolicy& policy = {});
// x-composite with the i.i.d. choice trajectory lambda^⊗n.
GTrajectory mix_behavior(const KnightBehavior& b, const Morphism& lambda);

}  // namespace mksys
