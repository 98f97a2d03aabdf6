#pragma once

#include "mksys/time/system.hpp"

namespace mksys {

// Chain-indexed Mealy machine A -> B with state S:
// f[n] : A(n+1)⊗S(n) -> B(n+1)⊗S(n+1).
struct GMealy {
  IndexedObject A, B, S;
  std::vector<Morphism> f;

  std::size_t horizon() const { return S.horizon(); }
  bool operator==(const GMealy& o) const;
};

// f[n] : A(n+1)⊗Ω(n+1)⊗S(n) -> B(n+1)⊗S(n+1).
struct GParaMealy {
  IndexedObject A, B, S, Omega;
  std::vector<Morphism> f;

  std::size_t horizon() const { return S.horizon(); }
  bool operator==(const GParaMealy& o) const;
};

// Same objects and maps; restrictions and labels are compared through ==.
bool same_indexed(const IndexedObject& x, const IndexedObject& y);

Check validate_mealy(const GMealy& m);
Check validate_para_mealy(const GParaMealy& m);

GMealy mealy_identity(const IndexedObject& A);
// Unit-state machine running k[n] : A(n+1) -> B(n+1).
GMealy mealy_stateless(const IndexedObject& A, const IndexedObject& B, const std::vector<Morphism>& k);
GMealy mealy_compose(const GMealy& f, const GMealy& g);
GMealy mealy_tensor(const GMealy& f, const GMealy& g);
// Swaps the two factors of an input A⊗A'.
GMealy mealy_symmetry(const IndexedObject& A, const IndexedObject& A2);

// Relabels the state along per-node bijections iso[n] : S(n) -> S2(n).
GMealy mealy_transport(const GMealy& m, const IndexedObject& S2, const std::vector<Morphism>& iso);

// A Mealy machine read with unit parameter. The result is a valid parametric
// machine only when consecutive steps agree under restriction.
GParaMealy para_from_mealy(const GMealy& m);
GParaMealy para_mealy_compose(const GParaMealy& f, const GParaMealy& g);
GParaMealy para_mealy_tensor(const GParaMealy& f, const GParaMealy& g);

// B(n+1) = O(n) with B(0) the unit; f[n](i, s) = (expose^n(s), update^n(s, i)).
IndexedObject shifted_outputs(const IndexedObject& O);
GMealy moore_to_mealy(const GSystem& sys);
// A lens whose backward map ignores the inner output, as the stateless pair
// (I2 -> I1, O1 -> O2) placed around a machine.
std::pair<GMealy, GMealy> feedback_free_wiring(const GSystem& sys, const SystemWiring& w);

Json mealy_to_json(const GMealy& m);
GMealy mealy_from_json(const Json& j);

}  // namespace mksys
