#pragma once

#include <array>
#include <cstdint>

#include "mksys/knight/uniformize.hpp"
#include "mksys/mealy/mealy.hpp"

namespace mksys {

// SplitMix64: tiny, portable, and identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  std::size_t below(std::size_t n);
  std::size_t between(std::size_t lo, std::size_t hi);  // inclusive
  bool chance(std::size_t num, std::size_t den) { return below(den) < num; }
  // Independent stream for case `index` of a run seeded with `seed`.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

 private:
  std::uint64_t state_;
};

FiniteObject random_object(Rng& rng, std::size_t lo, std::size_t hi, const std::string& prefix = "");
Interface random_interface(Rng& rng, std::size_t lo, std::size_t hi);

// Small positive integer weights, normalized; `sparse` allows zeros.
std::vector<Rational> random_weights(Rng& rng, std::size_t n, bool sparse = true);
Morphism random_distribution(Rng& rng, const FiniteObject& x, bool sparse = true);
Morphism random_stochastic(Rng& rng, const FiniteObject& a, const FiniteObject& x, bool sparse = true);
Morphism random_possibilistic(Rng& rng, const FiniteObject& a, const FiniteObject& x);
Morphism random_function(Rng& rng, const FiniteObject& a, const FiniteObject& x);
Morphism random_injection(Rng& rng, const FiniteObject& a, const FiniteObject& x);
Morphism random_surjection(Rng& rng, const FiniteObject& a, const FiniteObject& x);
Morphism random_bijection(Rng& rng, const FiniteObject& a, const FiniteObject& x);
// Row kernel c⊗b -> a whose restriction to each c is onto a.
Morphism random_onto_rows(Rng& rng, const FiniteObject& c, const FiniteObject& b, const FiniteObject& a);
// Law on the cells of `into` supported on the listed candidates.
std::vector<std::pair<Index, Rational>> random_support_law(Rng& rng, const std::vector<Index>& candidates);

Chart random_chart(Rng& rng, const Interface& src, const Interface& dst, const Interface& residual);

// A lens into a fresh interface at least as large as `src`, with injective
// forward map and onto backward rows, so squares can be lifted along it.
DetLens random_liftable_lens(Rng& rng, const Interface& src, std::size_t max_size);

// Given the top chart and the three lenses, builds s and the bottom chart.
// Needs left.f injective and the backward rows of right and residual onto.
XYSquare lift_square(Rng& rng, const Chart& top, const DetLens& left, const DetLens& right, const DetLens& residual);

// System lens on S with S̃ = S⊗a⊗N, f♯(s, a) = (s, a, noise).
SysYMor noisy_sys_lens(Rng& rng, const FiniteObject& S, const Morphism& f, const FiniteObject& a,
                       const FiniteObject& noise);
SysYMor random_noisy_sys_lens(Rng& rng, const FiniteObject& S, std::size_t max_size);
// Square over two noisy system lenses; left.f must be injective.
SysXYSquare lift_sys_square(Rng& rng, const SysYMor& left, const SysYMor& right, const Interface& residual);

struct ArenaGrid {
  XYSquare s, t, u, v;  // s t over u v
};
struct SysGrid {
  SysXYSquare s, t;
  XYSquare u, v;
};
ArenaGrid random_arena_grid(Rng& rng, std::size_t max_size);
SysGrid random_sys_grid(Rng& rng, std::size_t max_size);
std::array<XYSquare, 3> random_y_column(Rng& rng, std::size_t max_size);
struct SysColumn {
  SysXYSquare s;
  XYSquare t, u;
};
SysColumn random_sys_column(Rng& rng, std::size_t max_size);

struct NablaInstance {
  SysXYSquare s1, s2;
  Chart g012;
};
NablaInstance random_nabla_instance(Rng& rng, std::size_t max_size);

struct OpenSystem {
  FiniteObject S, I, O;
  Morphism expose, update, initial;
  Morphism step;  // one-step input kernel O -> I; unset when closed
  GSystem sys;
  InputPolicy policy;
};
// Closed when I is unit; otherwise inputs come from an exogenous law or a
// feedback policy on the last output.
OpenSystem random_open_system(Rng& rng, std::size_t max_size, std::size_t horizon, bool injective_expose = false);

struct LiftedComposite {
  GSystem sys;
  SystemWiring wiring;
  GTrajectory traj, lifted;
};
// Inner system with exogenous inputs, a lens whose backward map reads only
// the outer input, and injective expose, so both factorization hypotheses hold.
LiftedComposite random_lifted_composite(Rng& rng, std::size_t max_size, std::size_t horizon);

// Time-varying stochastic Mealy machine with history state S(n) = X^(n+1).
GMealy random_history_mealy(Rng& rng, const IndexedObject& A, const IndexedObject& B, std::size_t max_size);

}  // namespace mksys
