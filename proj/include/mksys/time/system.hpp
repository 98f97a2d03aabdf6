#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mksys/arenasys/arenasys.hpp"

namespace mksys {

struct ChainGraph {
  std::size_t horizon = 1;  // nodes 0..T, edges n -> n+1
};

// A functor from the chain (reversed) into deterministic maps: objects A(n)
// for n = 0..T and restrictions A(n+1) -> A(n). coords[n] names the factors
// of A(n) for table headers.
struct IndexedObject {
  std::vector<FiniteObject> at;
  std::vector<Morphism> restrict;
  std::vector<std::vector<std::string>> coords;

  std::size_t horizon() const { return at.size() - 1; }
  // Composite restriction A(from) -> A(to), from >= to.
  Morphism restriction(std::size_t from, std::size_t to) const;
  std::vector<std::string> coordinate_names(std::size_t n) const;

  static IndexedObject constant(const FiniteObject& x, std::size_t horizon, const std::string& name = "x");
  // A(n) = x^(n + offset); restrictions drop the last copy.
  static IndexedObject history(const FiniteObject& x, std::size_t horizon, std::size_t offset,
                               const std::string& name = "x");
};

Check validate_indexed(const IndexedObject& a);

// Moore system over the chain: expose^n : S(n) -> O(n) at nodes and
// update^n : S(n) ⊗ I(n+1) -> S(n+1) along edges.
struct GSystem {
  IndexedObject S, I, O;
  std::vector<Morphism> expose;
  std::vector<Morphism> update;

  std::size_t horizon() const { return S.horizon(); }
  SystemObject state_object(std::size_t n) const { return {S.at[n + 1], S.at[n], S.restrict[n]}; }
  Interface interface(std::size_t n) const { return {I.at[n + 1], O.at[n]}; }
  SysYMor lens(std::size_t n) const { return {state_object(n), interface(n), expose[n], update[n]}; }
};

Check validate_system(const GSystem& sys);

GSystem make_open_markov_system(const FiniteObject& S, const FiniteObject& I, const FiniteObject& O,
                                const Morphism& expose, const Morphism& update, std::size_t horizon);
GSystem clock_system(std::size_t horizon);

// Per-edge lenses (I1(n+1) // O1(n)) ⇄ (I2(n+1) // O2(n)) with the outer
// interface objects. The last node has no outgoing edge, so its output map
// O1(T) -> O2(T) is carried separately.
struct SystemWiring {
  IndexedObject I2, O2;
  std::vector<DetLens> lens;
  Morphism last_f;
};

Check validate_wiring(const GSystem& sys, const SystemWiring& w);
SystemWiring identity_wiring(const GSystem& sys);
// A one-step lens applied coordinatewise to input and output histories.
SystemWiring lift_lens(const DetLens& step, std::size_t horizon);
SystemWiring compose_wirings(const SystemWiring& w1, const SystemWiring& w2);
GSystem compose_system_with_lens(const GSystem& sys, const SystemWiring& w);

// p^n : * -> O(n) ⊗ I(n+1), phi^n : * -> S(n), s^n : * -> S(n) ⊗ I(n+1).
struct GTrajectory {
  std::vector<Morphism> p, phi, s;
  bool operator==(const GTrajectory& o) const { return p == o.p && phi == o.phi && s == o.s; }
};

SysXYSquare trajectory_square(const GSystem& sys, const GTrajectory& traj, std::size_t n);
Check validate_trajectory(const GSystem& sys, const GTrajectory& traj);

// Per-edge kernels O(n) ⊗ I(n) -> I(n+1) extending the input history;
// empty means the system is closed.
using InputPolicy = std::vector<Morphism>;

// Appends step(o_n) to the input history; step : O -> I.
InputPolicy markov_policy(const Morphism& step, const FiniteObject& O, const FiniteObject& I, std::size_t horizon);
// Appends an independent draw from dist : * -> I.
InputPolicy exogenous_policy(const Morphism& dist, const FiniteObject& O, std::size_t horizon);

GTrajectory unroll_trajectory(const GSystem& sys, const Morphism& initial, const InputPolicy& policy = {});

// Cells over a wiring built from p^n by choosing, for each (o1, i1), a
// distribution on the inputs i2 with w♯(o1, i2) = i1.
std::vector<XYSquare> wiring_cells(const GSystem& sys, const GTrajectory& traj, const SystemWiring& w,
                                   const std::vector<Morphism>& choice);
XYSquare wiring_cell(const Chart& top, const DetLens& w, const Morphism& coupling);

GTrajectory lift_trajectory(const GSystem& sys, const GTrajectory& traj, const SystemWiring& w,
                            const std::vector<XYSquare>& cells);

// i2(n+1) ⊥ s(n) given (o1(n), i1(n+1)) at every edge of a lifted trajectory.
bool lift_displays_independence(const GSystem& sys, const SystemWiring& w, const GTrajectory& lifted);

struct CoherenceReport {
  std::vector<bool> edges;  // edge n compares s^(n+1) restricted with s^n
  bool ok() const;
  std::optional<std::size_t> first_failure() const;
};

CoherenceReport check_time_coherence(const GSystem& sys, const GTrajectory& traj);

struct FactorizationEdge {
  bool t_valid = false, t12_valid = false;
  bool generated = false;    // t' generated from its 0-marginal by updates
  bool independent = false;  // i2(n+1) ⊥ s(0) given o1(n)
  bool equal = false;        // t' = t/t12
  std::string detail;
};

struct FactorizationReport {
  std::vector<FactorizationEdge> edges;
  // Every edge whose hypotheses hold has t' = t/t12.
  bool ok() const;
};

FactorizationReport factorization_check(const GTrajectory& tprime, const GSystem& sys, const SystemWiring& w);

// For each (o1, i1), the uniform law on {i2 : w♯(o1, i2) = i1}; all of I2
// when that fibre is empty.
std::vector<Morphism> fibre_uniform_choice(const GSystem& sys, const SystemWiring& w);

Json indexed_to_json(const IndexedObject& x);
IndexedObject indexed_from_json(const Json& j);
// Full per-node data; no validation beyond shapes.
Json system_to_json(const GSystem& sys);
GSystem system_from_json(const Json& j);
Json wiring_to_json(const SystemWiring& w);
SystemWiring wiring_from_json(const Json& j);
Json policy_to_json(const InputPolicy& p);
InputPolicy policy_from_json(const Json& j);

// Joint tables with path-tuple headers; probabilities as "p/q" followed by
// a rounded decimal.
void emit_csv(std::ostream& os, const GSystem& sys, const GTrajectory& traj, std::size_t upto);
Json emit_json(const GSystem& sys, const GTrajectory& traj, std::size_t upto);

}  // namespace mksys
