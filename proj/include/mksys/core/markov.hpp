#pragma once

#include <vector>

#include "mksys/core/errors.hpp"
#include "mksys/core/morphism.hpp"

namespace mksys {

// Kind of f;g and f⊗g. Det promotes into either nondeterministic instance.
Kind join_kind(Kind a, Kind b);

Morphism compose(const Morphism& f, const Morphism& g);
Morphism compose(std::initializer_list<Morphism> chain);
Morphism tensor(const Morphism& f, const Morphism& g);
Morphism tensor(std::initializer_list<Morphism> parts);

Morphism identity(const FiniteObject& x);
Morphism copy(const FiniteObject& x);
Morphism discard(const FiniteObject& x);
Morphism swap(const FiniteObject& x, const FiniteObject& y);

// Deterministic X -> X.select(positions); positions may repeat or omit factors.
Morphism wire(const FiniteObject& x, const std::vector<std::size_t>& positions);

Morphism marginal(const Morphism& p, const std::vector<std::size_t>& keep);
// Keeps factors [first, first+count) of the codomain.
Morphism marginal_range(const Morphism& p, std::size_t first, std::size_t count);

bool is_deterministic(const Morphism& f);

// The dirac row a of f as a morphism unit -> cod(f).
Morphism restrict_row(const Morphism& f, Index a);

enum class ZeroMass { Uniform, FirstPoint };

// phi: A -> X⊗Y with X the first x_rank factors of cod(phi); returns
// phi|X : A⊗X -> Y.
Morphism conditional(const Morphism& phi, std::size_t x_rank, ZeroMass fill = ZeroMass::Uniform);

// A -> copy -> A⊗A -> A⊗X -> copy X -> A⊗X⊗X -> X⊗(cond) -> X⊗Y.
Morphism reconstruct(const Morphism& marginal_x, const Morphism& cond);

// f: A -> X⊗Y and g: A -> Y⊗Z where Y is the last y_rank factors of cod(f)
// and the first y_rank factors of cod(g). Returns f ⊗_Y g : A -> X⊗Y⊗Z.
Morphism conditional_product(const Morphism& f, const Morphism& g, std::size_t y_rank,
                             ZeroMass fill = ZeroMass::Uniform);

// dom(p) must be the unit. xs, ys, zs are factor positions of cod(p);
// unlisted factors are marginalized.
bool displays_cond_indep(const Morphism& p, const std::vector<std::size_t>& xs,
                         const std::vector<std::size_t>& ys, const std::vector<std::size_t>& zs);

// Same check after pushing p forward along deterministic maps u, v, w.
bool displays_cond_indep(const Morphism& p, const Morphism& u, const Morphism& v, const Morphism& w);

bool almost_surely_equal(const Morphism& phi, const Morphism& f, const Morphism& g);

}  // namespace mksys
