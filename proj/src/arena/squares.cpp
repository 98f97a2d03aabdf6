#include "mksys/arena/arena.hpp"
#include "mksys/core/circuit.hpp"

namespace mksys {

namespace {

Check check_boundary(bool cond, const std::string& what) {
  return cond ? Check::pass() : Check::fail("boundary", what);
}

}  // namespace

Check validate_xy(const XYSquare& sq) {
  const auto& [top, bottom, left, right, lens, s] = sq;
  for (auto c : {check_boundary(top.src == left.src, "top and left do not share corner 1"),
                 check_boundary(top.dst == right.src, "top and right do not share corner 2"),
                 check_boundary(bottom.src == left.dst, "bottom and left do not share corner 3"),
                 check_boundary(bottom.dst == right.dst, "bottom and right do not share corner 4"),
                 check_boundary(lens.src == top.residual && lens.dst == bottom.residual,
                                "residual lens does not join the residuals")})
    if (!c) return c;
  for (const auto* l : {&left, &right, &lens})
    if (auto c = validate_lens(*l); !c) return c;
  for (const auto* x : {&top, &bottom})
    if (auto c = validate_chart(*x); !c) return c;

  const auto& c1 = top.src.c;
  const auto& a3 = left.dst.a;
  const auto& [a12, c12] = top.residual;
  const auto& [a34, c34] = bottom.residual;
  const auto& [a2, c2] = top.dst;
  const auto& a4 = bottom.dst.a;
  if (!(s.dom() == c1 * a3) || !(s.cod() == c12 * c2 * a34 * a4))
    return Check::fail("boundary", "s has type " + s.dom().describe() + "->" + s.cod().describe());

  // (a) f12 ; (f1234 ⊗ f24) = f13 ; f34 : c1 -> c34 c4
  if (auto c = same_kernel("(a)", compose(top.g, tensor(lens.f, right.f)), compose(left.f, bottom.g)); !c) return c;

  // (b) s ; (f1234 ⊗ f24 ⊗ a34 ⊗ a4) = (f13 ⊗ a3) ; f34♭ : c1 a3 -> c34 c4 a34 a4
  if (auto c = same_kernel("(b)", compose(s, tensor({lens.f, right.f, identity(a34), identity(a4)})),
                           compose(tensor(left.f, identity(a3)), bottom.gflat));
      !c)
    return c;

  // (c) s ; copy_{c12 c2} ; (c12 c2 ⊗ f1234♯(c12, a34) ⊗ f24♯(c2, a4))
  //       = copy_{c1} ; (c1 ⊗ f13♯) ; f12♭ : c1 a3 -> c12 c2 a12 a2
  Circuit lhs({{"c1", c1}, {"a3", a3}});
  lhs.apply(s, {"c1", "a3"}, {{"c12", c12}, {"c2", c2}, {"a34", a34}, {"a4", a4}});
  lhs.copy("c12", "c12'").copy("c2", "c2'");
  lhs.apply(lens.fsharp, {"c12'", "a34"}, {{"a12", a12}});
  lhs.apply(right.fsharp, {"c2'", "a4"}, {{"a2", a2}});
  Circuit rhs({{"c1", c1}, {"a3", a3}});
  rhs.copy("c1", "c1'");
  rhs.apply(left.fsharp, {"c1'", "a3"}, {{"a1", top.src.a}});
  rhs.apply(top.gflat, {"c1", "a1"}, {{"c12", c12}, {"c2", c2}, {"a12", a12}, {"a2", a2}});
  return same_kernel("(c)", lhs.result({"c12", "c2", "a12", "a2"}), rhs.result({"c12", "c2", "a12", "a2"}));
}

XYSquare xy_identity_y(const Chart& x) {
  return {x, x, lens_identity(x.src), lens_identity(x.dst), lens_identity(x.residual), x.gflat};
}

XYSquare xy_compose_x(const XYSquare& s, const XYSquare& t) {
  if (!(s.right == t.left)) throw BoundaryMismatch("xy_compose_x: right lens of s is not the left lens of t");
  const auto& c1 = s.top.src.c;
  const auto& a4 = s.bottom.src.a;
  const auto& c12 = s.top.residual.c;
  const auto& c2 = s.top.dst.c;
  const auto& a45 = s.bottom.residual.a;
  const auto& a5 = s.bottom.dst.a;
  const auto& c23 = t.top.residual.c;
  const auto& c3 = t.top.dst.c;
  const auto& a56 = t.bottom.residual.a;
  const auto& a6 = t.bottom.dst.a;

  // c1 a4 -> s -> c12 c2 a45 a5 -> copy the c2 a5 legs -> t on the copies
  // -> permute to c12 c2 c23 c3 a45 a5 a56 a6
  Circuit m({{"c1", c1}, {"a4", a4}});
  m.apply(s.s, {"c1", "a4"}, {{"c12", c12}, {"c2", c2}, {"a45", a45}, {"a5", a5}});
  m.copy("c2", "c2'").copy("a5", "a5'");
  m.apply(t.s, {"c2'", "a5'"}, {{"c23", c23}, {"c3", c3}, {"a56", a56}, {"a6", a6}});

  return {chart_compose(s.top, t.top),
          chart_compose(s.bottom, t.bottom),
          s.left,
          t.right,
          lens_tensor(lens_tensor(s.lens, s.right), t.lens),
          m.result({"c12", "c2", "c23", "c3", "a45", "a5", "a56", "a6"})};
}

YComposite xy_compose_y_parts(const XYSquare& s, const XYSquare& t, ZeroMass fill) {
  if (!(s.bottom == t.top)) throw BoundaryMismatch("xy_compose_y: bottom chart of s is not the top chart of t");
  const auto& c1 = s.top.src.c;
  const auto& c12 = s.top.residual.c;
  const auto& c2 = s.top.dst.c;
  const auto& c3 = s.left.dst.c;
  const auto& a3 = s.left.dst.a;
  const auto& [a34, c34] = s.bottom.residual;
  const auto& [a4, c4] = s.bottom.dst;
  const auto& a5 = t.left.dst.a;
  const auto& a56 = t.bottom.residual.a;
  const auto& a6 = t.bottom.dst.a;

  // φ : c1 a5 -> copy c1 -> c1 f13(c1) a5 -> c1 f35♯(c3, a5) -> s(c1, a3)
  //   -> c12 c2 a34 a4 -> copy c12 c2 -> c12 c2 f1234(c12) f24(c2) a34 a4
  Circuit phi({{"c1", c1}, {"a5", a5}});
  phi.copy("c1", "c1'");
  phi.apply(s.left.f, {"c1'"}, {{"c3", c3}});
  phi.apply(t.left.fsharp, {"c3", "a5"}, {{"a3", a3}});
  phi.apply(s.s, {"c1", "a3"}, {{"c12", c12}, {"c2", c2}, {"a34", a34}, {"a4", a4}});
  phi.copy("c12", "c12'").copy("c2", "c2'");
  phi.apply(s.lens.f, {"c12'"}, {{"c34", c34}});
  phi.apply(s.right.f, {"c2'"}, {{"c4", c4}});

  // ψ : c1 a5 -> f13(c1) a5 -> t -> c34 c4 a56 a6 -> copy
  //   -> c34 c4 f3456♯(c34, a56) f46♯(c4, a6) a56 a6
  Circuit psi({{"c1", c1}, {"a5", a5}});
  psi.apply(s.left.f, {"c1"}, {{"c3", c3}});
  psi.apply(t.s, {"c3", "a5"}, {{"c34", c34}, {"c4", c4}, {"a56", a56}, {"a6", a6}});
  psi.copy("c34", "c34'").copy("c4", "c4'").copy("a56", "a56'").copy("a6", "a6'");
  psi.apply(t.lens.fsharp, {"c34'", "a56'"}, {{"a34", a34}});
  psi.apply(t.right.fsharp, {"c4'", "a6'"}, {{"a4", a4}});

  YComposite out;
  out.phi = phi.result({"c12", "c2", "c34", "c4", "a34", "a4"});
  out.psi = psi.result({"c34", "c4", "a34", "a4", "a56", "a6"});
  const std::size_t shared = c34.rank() + c4.rank() + a34.rank() + a4.rank();
  out.alpha = conditional_product(out.phi, out.psi, shared, fill);

  // α : c1 a5 -> c12 c2 [c34 c4 a34 a4] a56 a6; s/t drops the bracket.
  std::vector<std::size_t> keep;
  const std::size_t head = c12.rank() + c2.rank();
  for (std::size_t k = 0; k < head; ++k) keep.push_back(k);
  for (std::size_t k = head + shared; k < out.alpha.cod().rank(); ++k) keep.push_back(k);

  out.square = {s.top,
                t.bottom,
                lens_compose(s.left, t.left),
                lens_compose(s.right, t.right),
                lens_compose(s.lens, t.lens),
                marginal(out.alpha, keep)};
  return out;
}

XYSquare xy_compose_y(const XYSquare& s, const XYSquare& t) { return xy_compose_y_parts(s, t).square; }

bool xy_regeneration_holds(const XYSquare& s, const XYSquare& t) {
  const auto parts = xy_compose_y_parts(s, t);
  const auto& c12 = s.top.residual.c;
  const auto& c2 = s.top.dst.c;
  const auto& [a34, c34] = s.bottom.residual;
  const auto& [a4, c4] = s.bottom.dst;
  const auto& a56 = t.bottom.residual.a;
  const auto& a6 = t.bottom.dst.a;

  // s/t -> copy c12 c2 -> f1234, f24 -> copy c34 c4 a56 a6 -> f3456♯, f46♯
  Circuit r({{"c1", s.top.src.c}, {"a5", t.left.dst.a}});
  r.apply(parts.square.s, {"c1", "a5"}, {{"c12", c12}, {"c2", c2}, {"a56", a56}, {"a6", a6}});
  r.copy("c12", "c12'").copy("c2", "c2'");
  r.apply(s.lens.f, {"c12'"}, {{"c34", c34}});
  r.apply(s.right.f, {"c2'"}, {{"c4", c4}});
  r.copy("c34", "c34'").copy("c4", "c4'").copy("a56", "a56'").copy("a6", "a6'");
  r.apply(t.lens.fsharp, {"c34'", "a56'"}, {{"a34", a34}});
  r.apply(t.right.fsharp, {"c4'", "a6'"}, {{"a4", a4}});
  return r.result({"c12", "c2", "c34", "c4", "a34", "a4", "a56", "a6"}) == parts.alpha;
}

Check validate_xz(const XZSquare& sq) {
  const auto& [top, bottom, left, right, fc, fa] = sq;
  for (auto c : {check_boundary(left.src == top.src && left.dst == bottom.src, "left z-pair does not join the charts"),
                 check_boundary(right.src == top.dst && right.dst == bottom.dst, "right z-pair does not join the charts")})
    if (!c) return c;
  for (const auto* z : {&left, &right})
    if (auto c = validate_zpair(*z); !c) return c;
  for (const auto* x : {&top, &bottom})
    if (auto c = validate_chart(*x); !c) return c;
  if (!(fc.dom() == top.residual.c) || !(fc.cod() == bottom.residual.c) || !(fa.dom() == top.residual.a) ||
      !(fa.cod() == bottom.residual.a))
    return Check::fail("boundary", "residual maps have the wrong type");
  if (!is_deterministic(fc) || !is_deterministic(fa)) return Check::fail("residual maps deterministic");
  // f12 ; (f1234 ⊗ f24) = f13 ; f34
  if (auto c = same_kernel("xz output", compose(top.g, tensor(fc, right.fc)), compose(left.fc, bottom.g)); !c) return c;
  // f12♭ ; (f1234 ⊗ f24 ⊗ g1234 ⊗ g24) = (f13 ⊗ g13) ; f34♭
  return same_kernel("xz joint", compose(top.gflat, tensor({fc, right.fc, fa, right.fa})),
                     compose(tensor(left.fc, left.fa), bottom.gflat));
}

Check validate_yz(const YZSquare& sq) {
  const auto& [top, bottom, left, right] = sq;
  for (auto c : {check_boundary(left.src == top.src && left.dst == bottom.src, "left lens does not join the z-pairs"),
                 check_boundary(right.src == top.dst && right.dst == bottom.dst, "right lens does not join the z-pairs")})
    if (!c) return c;
  for (const auto* z : {&top, &bottom})
    if (auto c = validate_zpair(*z); !c) return c;
  for (const auto* l : {&left, &right})
    if (auto c = validate_lens(*l); !c) return c;
  // f13 ; f34 = f12 ; f24 on outputs
  return same_kernel("yz", compose(left.f, bottom.fc), compose(top.fc, right.f));
}

Check validate_xyz(const XYZBoundary& cube) {
  const auto& [front, back, top, bottom, left, right] = cube;
  for (auto c : {check_boundary(top.top == front.top && top.bottom == back.top, "top face does not join the top charts"),
                 check_boundary(bottom.top == front.bottom && bottom.bottom == back.bottom,
                                "bottom face does not join the bottom charts"),
                 check_boundary(left.left == front.left && left.right == back.left,
                                "left face does not join the left lenses"),
                 check_boundary(right.left == front.right && right.right == back.right,
                                "right face does not join the right lenses"),
                 check_boundary(top.left == left.top && top.right == right.top, "z-pairs at corners 1 and 2 differ"),
                 check_boundary(bottom.left == left.bottom && bottom.right == right.bottom,
                                "z-pairs at corners 3 and 4 differ")})
    if (!c) return c;
  for (const auto* f : {&front, &back})
    if (auto c = validate_xy(*f); !c) return c;
  for (const auto* f : {&top, &bottom})
    if (auto c = validate_xz(*f); !c) return c;
  for (const auto* f : {&left, &right})
    if (auto c = validate_yz(*f); !c) return c;
  return Check::pass();
}

XZSquare xz_compose_x(const XZSquare& u, const XZSquare& v) {
  if (!(u.right == v.left)) throw BoundaryMismatch("xz_compose_x: middle z-pairs differ");
  return {chart_compose(u.top, v.top), chart_compose(u.bottom, v.bottom), u.left, v.right,
          tensor({u.fc, u.right.fc, v.fc}), tensor({u.fa, u.right.fa, v.fa})};
}

XZSquare xz_compose_z(const XZSquare& u, const XZSquare& v) {
  if (!(u.bottom == v.top)) throw BoundaryMismatch("xz_compose_z: middle charts differ");
  return {u.top, v.bottom, zpair_compose(u.left, v.left), zpair_compose(u.right, v.right), compose(u.fc, v.fc),
          compose(u.fa, v.fa)};
}

YZSquare yz_compose_y(const YZSquare& u, const YZSquare& v) {
  if (!(u.bottom == v.top)) throw BoundaryMismatch("yz_compose_y: middle z-pairs differ");
  return {u.top, v.bottom, lens_compose(u.left, v.left), lens_compose(u.right, v.right)};
}

YZSquare yz_compose_z(const YZSquare& u, const YZSquare& v) {
  if (!(u.right == v.left)) throw BoundaryMismatch("yz_compose_z: middle lenses differ");
  return {zpair_compose(u.top, v.top), zpair_compose(u.bottom, v.bottom), u.left, v.right};
}

}  // namespace mksys
