#pragma once

#include <utility>

#include "mksys/arena/arena.hpp"

namespace mksys {

// (S̃, S, r : S̃ -> S) with r deterministic.
struct SystemObject {
  FiniteObject stilde, s;
  Morphism r;
  bool operator==(const SystemObject& o) const { return stilde == o.stilde && s == o.s && r == o.r; }
  static SystemObject trivial() { return {{}, {}, identity(FiniteObject::unit())}; }
};

Check validate_system_object(const SystemObject& x);
SystemObject operator*(const SystemObject& x, const SystemObject& y);

// x-morphism: a commuting square f♭ ; r2 = r1 ; f.
struct SysXMor {
  SystemObject src, dst;
  Morphism fflat, f;
  bool operator==(const SysXMor& o) const { return src == o.src && dst == o.dst && fflat == o.fflat && f == o.f; }
};

Check validate_sys_xmor(const SysXMor& m);
SysXMor sys_xmor_compose(const SysXMor& u, const SysXMor& v);

// Relaxed validation lets the output map be nondeterministic; it exists to
// exhibit what breaks in that setting and is never the default.
enum class LensPolicy { Strict, Relaxed };

// y-morphism (S̃, S) ⇄ (a, c): deterministic f : S -> c and a kernel
// f♯ : S⊗a -> S̃ with f♯ ; r = π_S.
struct SysYMor {
  SystemObject src;
  Interface dst;
  Morphism f, fsharp;
  bool operator==(const SysYMor& o) const { return src == o.src && dst == o.dst && f == o.f && fsharp == o.fsharp; }
};

Check validate_sys_ymor(const SysYMor& l, LensPolicy policy = LensPolicy::Strict);
SysYMor sys_ymor_trivial();
SysYMor sys_ymor_tensor(const SysYMor& l1, const SysYMor& l2);
// The system lens followed by an arena lens.
SysYMor sys_lens_compose(const SysYMor& l, const DetLens& w);

// Corners: top x-morphism 1 -> 2, left/right system lenses, bottom chart
// 3 -> 4, s : S1⊗a3 -> S2⊗c34⊗a34⊗a4.
struct SysXYSquare {
  SysXMor top;
  Chart bottom;
  SysYMor left, right;
  Morphism s;
  bool operator==(const SysXYSquare& o) const {
    return top == o.top && bottom == o.bottom && left == o.left && right == o.right && s == o.s;
  }
};

Check validate_sys_xy(const SysXYSquare& sq, LensPolicy policy = LensPolicy::Strict);

SysXYSquare sys_xy_compose_x(const SysXYSquare& s, const SysXYSquare& t);

struct SysYComposite {
  Morphism phi, psi, alpha;
  SysXYSquare square;
};
SysYComposite sys_xy_compose_y_parts(const SysXYSquare& s, const XYSquare& t, ZeroMass fill = ZeroMass::Uniform);
SysXYSquare sys_xy_compose_y(const SysXYSquare& s, const XYSquare& t);

// alpha equals alpha with the c4 and a4 legs discarded and regenerated from
// S2 through f24 and f46♯.
bool sys_regeneration_holds(const SysXYSquare& s, const XYSquare& t);

// The canonical deterministic squares from the tensor of two systems onto
// each factor.
std::pair<SysXYSquare, SysXYSquare> projection_squares(const SysYMor& sys1, const SysYMor& sys2);

// Tensor behavior of two squares sharing their left boundary, over a joint
// chart g012 with unit residual.
SysXYSquare nabla(const SysXYSquare& s1, const SysXYSquare& s2, const Chart& g012);

// Marginalizes the residual legs of the bottom chart away.
SysXYSquare strip_residual(const SysXYSquare& sq);
// Marginal chart onto factors of the target interface.
Chart chart_marginal(const Chart& x, std::size_t a_first, std::size_t a_count, std::size_t c_first,
                     std::size_t c_count);

Json system_object_to_json(const SystemObject& x);
SystemObject system_object_from_json(const Json& j);
Json sys_ymor_to_json(const SysYMor& l);
SysYMor sys_ymor_from_json(const Json& j);
Json sys_xmor_to_json(const SysXMor& m);
SysXMor sys_xmor_from_json(const Json& j);
Json sys_xy_to_json(const SysXYSquare& sq);
SysXYSquare sys_xy_from_json(const Json& j);

}  // namespace mksys
