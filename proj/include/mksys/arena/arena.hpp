#pragma once

#include <string>

#include "mksys/core/markov.hpp"
#include "mksys/core/serialize.hpp"

namespace mksys {

// An interface (a // c): inputs a, outputs c.
struct Interface {
  FiniteObject a, c;
  bool operator==(const Interface& o) const { return a == o.a && c == o.c; }
  static Interface unit() { return {}; }
};

Interface operator*(const Interface& x, const Interface& y);

// Result of a validator; names the first failing law.
struct Check {
  bool ok = true;
  std::string law;
  std::string detail;

  explicit operator bool() const { return ok; }
  static Check pass() { return {}; }
  static Check fail(std::string law, std::string detail = {}) { return {false, std::move(law), std::move(detail)}; }
};

// Compares two kernels and reports the first differing row on failure.
Check same_kernel(const std::string& law, const Morphism& lhs, const Morphism& rhs);

// y-morphism: f : c1 -> c2 and f♯ : c1⊗a2 -> a1, both deterministic.
struct DetLens {
  Interface src, dst;
  Morphism f, fsharp;
  bool operator==(const DetLens& o) const {
    return src == o.src && dst == o.dst && f == o.f && fsharp == o.fsharp;
  }
};

DetLens make_lens(Interface src, Interface dst, Morphism f, Morphism fsharp);
DetLens lens_identity(const Interface& x);
DetLens lens_compose(const DetLens& l1, const DetLens& l2);
DetLens lens_tensor(const DetLens& l1, const DetLens& l2);
Check validate_lens(const DetLens& l);

// x-morphism with residual (a12 // c12): g : c1 -> c12⊗c2 and
// g♭ : c1⊗a1 -> c12⊗c2⊗a12⊗a2.
struct Chart {
  Interface src, dst, residual;
  Morphism g, gflat;
  bool operator==(const Chart& o) const {
    return src == o.src && dst == o.dst && residual == o.residual && g == o.g && gflat == o.gflat;
  }
};

Chart make_chart(Interface src, Interface dst, Interface residual, Morphism g, Morphism gflat);
Chart chart_compose(const Chart& x1, const Chart& x2);
Check validate_chart(const Chart& x);

// z-morphism: a pair of deterministic maps on outputs and inputs.
struct ZPair {
  Interface src, dst;
  Morphism fc, fa;
  bool operator==(const ZPair& o) const { return src == o.src && dst == o.dst && fc == o.fc && fa == o.fa; }
};

ZPair zpair_identity(const Interface& x);
ZPair zpair_compose(const ZPair& u, const ZPair& v);
Check validate_zpair(const ZPair& z);

// Corners 1 2 over 3 4: top chart 1->2, bottom chart 3->4, left lens 1->3,
// right lens 2->4, lens between the residuals, s : c1⊗a3 -> c12⊗c2⊗a34⊗a4.
struct XYSquare {
  Chart top, bottom;
  DetLens left, right;
  DetLens lens;
  Morphism s;
  bool operator==(const XYSquare& o) const {
    return top == o.top && bottom == o.bottom && left == o.left && right == o.right && lens == o.lens && s == o.s;
  }
};

// Thin cells: boundary plus the residual maps (xz) or nothing (yz).
struct XZSquare {
  Chart top, bottom;
  ZPair left, right;
  Morphism fc, fa;  // c12 -> c34, a12 -> a34
};

struct YZSquare {
  ZPair top, bottom;
  DetLens left, right;
};

Check validate_xy(const XYSquare& sq);
Check validate_xz(const XZSquare& sq);
Check validate_yz(const YZSquare& sq);

XYSquare xy_identity_y(const Chart& x);
XYSquare xy_compose_x(const XYSquare& s, const XYSquare& t);

// Pieces of the vertical composite: the two legs meeting over
// c34⊗c4⊗a34⊗a4, their conditional product and the resulting square.
struct YComposite {
  Morphism phi, psi, alpha;
  XYSquare square;
};
YComposite xy_compose_y_parts(const XYSquare& s, const XYSquare& t, ZeroMass fill = ZeroMass::Uniform);
XYSquare xy_compose_y(const XYSquare& s, const XYSquare& t);

// alpha equals s/t followed by regenerating the discarded legs through the
// residual lenses.
bool xy_regeneration_holds(const XYSquare& s, const XYSquare& t);

// xyz-cells are thin: a cube is determined by its boundary, so it is only a
// predicate. Front and back are the xy faces at the two ends of the z-pairs;
// top and bottom are the xz faces over the top and bottom charts; left and
// right are the yz faces over the left and right lenses.
struct XYZBoundary {
  XYSquare front, back;
  XZSquare top, bottom;
  YZSquare left, right;
};
Check validate_xyz(const XYZBoundary& cube);

XZSquare xz_compose_x(const XZSquare& u, const XZSquare& v);
XZSquare xz_compose_z(const XZSquare& u, const XZSquare& v);
YZSquare yz_compose_y(const YZSquare& u, const YZSquare& v);
YZSquare yz_compose_z(const YZSquare& u, const YZSquare& v);

Json interface_to_json(const Interface& x);
Interface interface_from_json(const Json& j);
Json lens_to_json(const DetLens& l);
DetLens lens_from_json(const Json& j);
Json chart_to_json(const Chart& x);
Chart chart_from_json(const Json& j);
Json xy_to_json(const XYSquare& sq);
XYSquare xy_from_json(const Json& j);

}  // namespace mksys
