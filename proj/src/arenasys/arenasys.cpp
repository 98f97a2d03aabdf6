#include "mksys/arenasys/arenasys.hpp"

#include <numeric>

#include "mksys/core/circuit.hpp"

namespace mksys {

namespace {

std::vector<std::size_t> iota(std::size_t first, std::size_t count) {
  std::vector<std::size_t> v(count);
  std::iota(v.begin(), v.end(), first);
  return v;
}

Check typed(const std::string& what, const Morphism& m, const FiniteObject& dom, const FiniteObject& cod) {
  if (!(m.dom() == dom) || !(m.cod() == cod))
    return Check::fail(what, "expected " + dom.describe() + "->" + cod.describe() + ", got " + m.dom().describe() +
                                 "->" + m.cod().describe());
  return Check::pass();
}

}  // namespace

Check validate_system_object(const SystemObject& x) {
  if (auto c = typed("system restriction type", x.r, x.stilde, x.s); !c) return c;
  if (!is_deterministic(x.r)) return Check::fail("system restriction deterministic");
  return Check::pass();
}

SystemObject operator*(const SystemObject& x, const SystemObject& y) {
  return {x.stilde * y.stilde, x.s * y.s, tensor(x.r, y.r)};
}

Check validate_sys_xmor(const SysXMor& m) {
  for (const auto* x : {&m.src, &m.dst})
    if (auto c = validate_system_object(*x); !c) return c;
  if (auto c = typed("x-morphism joint map type", m.fflat, m.src.stilde, m.dst.stilde); !c) return c;
  if (auto c = typed("x-morphism state map type", m.f, m.src.s, m.dst.s); !c) return c;
  return same_kernel("x-morphism square", compose(m.fflat, m.dst.r), compose(m.src.r, m.f));
}

SysXMor sys_xmor_compose(const SysXMor& u, const SysXMor& v) {
  if (!(u.dst == v.src)) throw ObjectMismatch("sys_xmor_compose: system objects do not meet");
  return {u.src, v.dst, compose(u.fflat, v.fflat), compose(u.f, v.f)};
}

Check validate_sys_ymor(const SysYMor& l, LensPolicy policy) {
  if (auto c = validate_system_object(l.src); !c) return c;
  if (auto c = typed("system lens output type", l.f, l.src.s, l.dst.c); !c) return c;
  if (auto c = typed("system lens update type", l.fsharp, l.src.s * l.dst.a, l.src.stilde); !c) return c;
  if (policy == LensPolicy::Strict && !is_deterministic(l.f)) return Check::fail("system lens output deterministic");
  // f♯ ; r = π_S
  return same_kernel("system lens projection", compose(l.fsharp, l.src.r),
                     marginal_range(identity(l.src.s * l.dst.a), 0, l.src.s.rank()));
}

SysYMor sys_ymor_trivial() {
  return {SystemObject::trivial(), Interface::unit(), identity(FiniteObject::unit()), identity(FiniteObject::unit())};
}

SysYMor sys_ymor_tensor(const SysYMor& l1, const SysYMor& l2) {
  // S1 S2 a1 a2 -> (S1 a1)(S2 a2) -> f1♯ ⊗ f2♯
  Circuit c({{"S1", l1.src.s}, {"S2", l2.src.s}, {"a1", l1.dst.a}, {"a2", l2.dst.a}});
  c.apply(l1.fsharp, {"S1", "a1"}, {{"T1", l1.src.stilde}});
  c.apply(l2.fsharp, {"S2", "a2"}, {{"T2", l2.src.stilde}});
  return {l1.src * l2.src, l1.dst * l2.dst, tensor(l1.f, l2.f), c.result({"T1", "T2"})};
}

SysYMor sys_lens_compose(const SysYMor& l, const DetLens& w) {
  if (!(l.dst == w.src)) throw ObjectMismatch("sys_lens_compose: interfaces do not meet");
  // S a3 -> copy S -> S f(S) a3 -> S w♯(c1, a3) -> f♯(S, a1)
  Circuit c({{"S", l.src.s}, {"a3", w.dst.a}});
  c.copy("S", "S'");
  c.apply(l.f, {"S'"}, {{"c1", l.dst.c}});
  c.apply(w.fsharp, {"c1", "a3"}, {{"a1", l.dst.a}});
  c.apply(l.fsharp, {"S", "a1"}, {{"T", l.src.stilde}});
  return {l.src, w.dst, compose(l.f, w.f), c.result({"T"})};
}

Check validate_sys_xy(const SysXYSquare& sq, LensPolicy policy) {
  const auto& [top, bottom, left, right, s] = sq;
  if (!(top.src == left.src)) return Check::fail("boundary", "top and left do not share the system at corner 1");
  if (!(top.dst == right.src)) return Check::fail("boundary", "top and right do not share the system at corner 2");
  if (!(bottom.src == left.dst)) return Check::fail("boundary", "bottom and left do not share corner 3");
  if (!(bottom.dst == right.dst)) return Check::fail("boundary", "bottom and right do not share corner 4");
  if (auto c = validate_sys_xmor(top); !c) return c;
  if (auto c = validate_chart(bottom); !c) return c;
  for (const auto* l : {&left, &right})
    if (auto c = validate_sys_ymor(*l, policy); !c) return c;

  const auto& S1 = top.src.s;
  const auto& S2 = top.dst.s;
  const auto& a3 = left.dst.a;
  const auto& [a34, c34] = bottom.residual;
  const auto& [a4, c4] = bottom.dst;
  if (auto c = typed("boundary", s, S1 * a3, S2 * c34 * a34 * a4); !c) return c;

  // (a) f12 ; f24 = f13 ; f34 ; del_{c34} : S1 -> c4
  if (auto c = same_kernel("(a)", compose(top.f, right.f),
                           compose({left.f, bottom.g, marginal_range(identity(c34 * c4), c34.rank(), c4.rank())}));
      !c)
    return c;

  // (b) s ; (c34 ⊗ f24(S2) ⊗ a34 ⊗ a4) = (f13 ⊗ a3) ; f34♭ : S1 a3 -> c34 c4 a34 a4
  Circuit lhs({{"S1", S1}, {"a3", a3}});
  lhs.apply(s, {"S1", "a3"}, {{"S2", S2}, {"c34", c34}, {"a34", a34}, {"a4", a4}});
  lhs.apply(right.f, {"S2"}, {{"c4", c4}});
  if (auto c = same_kernel("(b)", lhs.result({"c34", "c4", "a34", "a4"}),
                           compose(tensor(left.f, identity(a3)), bottom.gflat));
      !c)
    return c;

  // (c) s ; del_{c34 a34} ; f24♯ = f13♯ ; f12♭ : S1 a3 -> S̃2
  Circuit lc({{"S1", S1}, {"a3", a3}});
  lc.apply(s, {"S1", "a3"}, {{"S2", S2}, {"c34", c34}, {"a34", a34}, {"a4", a4}});
  lc.apply(right.fsharp, {"S2", "a4"}, {{"T2", top.dst.stilde}});
  return same_kernel("(c)", lc.result({"T2"}), compose(left.fsharp, top.fflat));
}

SysXYSquare sys_xy_compose_x(const SysXYSquare& s, const SysXYSquare& t) {
  if (!(s.right == t.left)) throw BoundaryMismatch("sys_xy_compose_x: right lens of s is not the left lens of t");
  const auto& S1 = s.top.src.s;
  const auto& S2 = s.top.dst.s;
  const auto& S3 = t.top.dst.s;
  const auto& a4 = s.bottom.src.a;
  const auto& [a45, c45] = s.bottom.residual;
  const auto& [a5, c5] = s.bottom.dst;
  const auto& [a56, c56] = t.bottom.residual;
  const auto& a6 = t.bottom.dst.a;

  // S1 a4 -> s -> S2 c45 a45 a5 -> copy S2, one copy through f25 -> c5
  // -> copy a5 -> t(S2, a5) -> S3 c56 a56 a6 -> permute
  Circuit m({{"S1", S1}, {"a4", a4}});
  m.apply(s.s, {"S1", "a4"}, {{"S2", S2}, {"c45", c45}, {"a45", a45}, {"a5", a5}});
  m.copy("S2", "S2'");
  m.apply(s.right.f, {"S2'"}, {{"c5", c5}});
  m.copy("a5", "a5'");
  m.apply(t.s, {"S2", "a5'"}, {{"S3", S3}, {"c56", c56}, {"a56", a56}, {"a6", a6}});

  return {sys_xmor_compose(s.top, t.top), chart_compose(s.bottom, t.bottom), s.left, t.right,
          m.result({"S3", "c45", "c5", "c56", "a45", "a5", "a56", "a6"})};
}

SysYComposite sys_xy_compose_y_parts(const SysXYSquare& s, const XYSquare& t, ZeroMass fill) {
  if (!(s.bottom == t.top)) throw BoundaryMismatch("sys_xy_compose_y: bottom chart of s is not the top chart of t");
  const auto& S1 = s.top.src.s;
  const auto& S2 = s.top.dst.s;
  const auto& [a3, c3] = s.left.dst;
  const auto& [a34, c34] = s.bottom.residual;
  const auto& [a4, c4] = s.bottom.dst;
  const auto& a5 = t.left.dst.a;
  const auto& [a56, c56] = t.bottom.residual;
  const auto& a6 = t.bottom.dst.a;

  // φ : S1 a5 -> copy S1 -> S1 f13(S1) a5 -> S1 f35♯(c3, a5) -> s(S1, a3)
  //   -> S2 c34 a34 a4 -> copy S2 -> S2 c34 f24(S2) a34 a4
  Circuit phi({{"S1", S1}, {"a5", a5}});
  phi.copy("S1", "S1'");
  phi.apply(s.left.f, {"S1'"}, {{"c3", c3}});
  phi.apply(t.left.fsharp, {"c3", "a5"}, {{"a3", a3}});
  phi.apply(s.s, {"S1", "a3"}, {{"S2", S2}, {"c34", c34}, {"a34", a34}, {"a4", a4}});
  phi.copy("S2", "S2'");
  phi.apply(s.right.f, {"S2'"}, {{"c4", c4}});

  // ψ : S1 a5 -> f13(S1) a5 -> t -> c34 c4 a56 a6 -> copy
  //   -> c34 c4 f3456♯(c34, a56) f46♯(c4, a6) f3456(c34) a56 a6
  Circuit psi({{"S1", S1}, {"a5", a5}});
  psi.apply(s.left.f, {"S1"}, {{"c3", c3}});
  psi.apply(t.s, {"c3", "a5"}, {{"c34", c34}, {"c4", c4}, {"a56", a56}, {"a6", a6}});
  psi.copy("c34", "c34'").copy("c34", "c34''").copy("c4", "c4'").copy("a56", "a56'").copy("a6", "a6'");
  psi.apply(t.lens.f, {"c34''"}, {{"c56", c56}});
  psi.apply(t.lens.fsharp, {"c34'", "a56'"}, {{"a34", a34}});
  psi.apply(t.right.fsharp, {"c4'", "a6'"}, {{"a4", a4}});

  SysYComposite out;
  out.phi = phi.result({"S2", "c34", "c4", "a34", "a4"});
  out.psi = psi.result({"c34", "c4", "a34", "a4", "c56", "a56", "a6"});
  const std::size_t shared = c34.rank() + c4.rank() + a34.rank() + a4.rank();
  out.alpha = conditional_product(out.phi, out.psi, shared, fill);

  // α : S1 a5 -> S2 [c34 c4 a34 a4] c56 a56 a6; s/t drops the bracket.
  auto keep = iota(0, S2.rank());
  auto tail = iota(S2.rank() + shared, c56.rank() + a56.rank() + a6.rank());
  keep.insert(keep.end(), tail.begin(), tail.end());

  out.square = {s.top, t.bottom, sys_lens_compose(s.left, t.left), sys_lens_compose(s.right, t.right),
                marginal(out.alpha, keep)};
  return out;
}

SysXYSquare sys_xy_compose_y(const SysXYSquare& s, const XYSquare& t) { return sys_xy_compose_y_parts(s, t).square; }

bool sys_regeneration_holds(const SysXYSquare& s, const XYSquare& t) {
  const auto parts = sys_xy_compose_y_parts(s, t);
  const auto& S2 = s.top.dst.s;
  const auto& [a34, c34] = s.bottom.residual;
  const auto& [a4, c4] = s.bottom.dst;
  const auto& [a56, c56] = t.bottom.residual;
  const auto& a6 = t.bottom.dst.a;
  Circuit r({{"S1", s.top.src.s}, {"a5", t.left.dst.a}});
  r.apply(parts.alpha, {"S1", "a5"},
          {{"S2", S2}, {"c34", c34}, {"c4", c4}, {"a34", a34}, {"a4", a4}, {"c56", c56}, {"a56", a56}, {"a6", a6}});
  r.copy("S2", "S2'");
  r.apply(s.right.f, {"S2'"}, {{"c4*", c4}});
  r.copy("c4*", "c4*'").copy("a6", "a6'");
  r.apply(t.right.fsharp, {"c4*'", "a6'"}, {{"a4*", a4}});
  return r.result({"S2", "c34", "c4*", "a34", "a4*", "c56", "a56", "a6"}) == parts.alpha;
}

Chart chart_marginal(const Chart& x, std::size_t a_first, std::size_t a_count, std::size_t c_first,
                     std::size_t c_count) {
  const auto& [a12, c12] = x.residual;
  const auto& [a2, c2] = x.dst;
  Interface dst{a2.slice(a_first, a_count), c2.slice(c_first, c_count)};
  auto g_keep = iota(0, c12.rank());
  auto cpart = iota(c12.rank() + c_first, c_count);
  g_keep.insert(g_keep.end(), cpart.begin(), cpart.end());
  auto gf_keep = g_keep;
  const std::size_t abase = c12.rank() + c2.rank();
  for (auto k : iota(abase, a12.rank())) gf_keep.push_back(k);
  for (auto k : iota(abase + a12.rank() + a_first, a_count)) gf_keep.push_back(k);
  return {x.src, dst, x.residual, marginal(x.g, g_keep), marginal(x.gflat, gf_keep)};
}

SysXYSquare strip_residual(const SysXYSquare& sq) {
  const auto& [a34, c34] = sq.bottom.residual;
  const auto& [a4, c4] = sq.bottom.dst;
  const auto& S2 = sq.top.dst.s;
  Chart bottom{sq.bottom.src, sq.bottom.dst, Interface::unit(),
               marginal_range(sq.bottom.g, c34.rank(), c4.rank()), [&] {
                 auto keep = iota(c34.rank(), c4.rank());
                 for (auto k : iota(c34.rank() + c4.rank() + a34.rank(), a4.rank())) keep.push_back(k);
                 return marginal(sq.bottom.gflat, keep);
               }()};
  auto keep = iota(0, S2.rank());
  for (auto k : iota(S2.rank() + c34.rank() + a34.rank(), a4.rank())) keep.push_back(k);
  return {sq.top, bottom, sq.left, sq.right, marginal(sq.s, keep)};
}

std::pair<SysXYSquare, SysXYSquare> projection_squares(const SysYMor& sys1, const SysYMor& sys2) {
  const SysYMor both = sys_ymor_tensor(sys1, sys2);
  auto square = [&](int i) {
    const SysYMor& si = i == 0 ? sys1 : sys2;
    const auto& o1 = sys1.src;
    const auto& o2 = sys2.src;
    auto pick = [&](const FiniteObject& x1, const FiniteObject& x2) {
      return i == 0 ? iota(0, x1.rank()) : iota(x1.rank(), x2.rank());
    };
    SysXMor top{both.src, si.src, wire(o1.stilde * o2.stilde, pick(o1.stilde, o2.stilde)),
                wire(o1.s * o2.s, pick(o1.s, o2.s))};
    const auto& I1 = sys1.dst.a;
    const auto& I2 = sys2.dst.a;
    const auto& O1 = sys1.dst.c;
    const auto& O2 = sys2.dst.c;
    // O1 O2 I1 I2 -> Oi Ii
    auto po = pick(O1, O2);
    auto pi = pick(I1, I2);
    std::vector<std::size_t> joint = po;
    for (auto k : pi) joint.push_back(O1.rank() + O2.rank() + k);
    Chart bottom{both.dst, si.dst, Interface::unit(), wire(O1 * O2, po), wire(O1 * O2 * I1 * I2, joint)};
    // s : S1 S2 I1 I2 -> Si Ii
    const auto& S1 = o1.s;
    const auto& S2 = o2.s;
    std::vector<std::size_t> sk = pick(S1, S2);
    for (auto k : pi) sk.push_back(S1.rank() + S2.rank() + k);
    return SysXYSquare{top, bottom, both, si, wire(S1 * S2 * I1 * I2, sk)};
  };
  return {square(0), square(1)};
}

Json system_object_to_json(const SystemObject& x) {
  return {{"stilde", object_to_json(x.stilde)}, {"s", object_to_json(x.s)}, {"r", morphism_to_json(x.r)}};
}

SystemObject system_object_from_json(const Json& j) {
  SystemObject x{object_from_json(j.at("stilde")), object_from_json(j.at("s")), morphism_from_json(j.at("r"))};
  if (auto c = validate_system_object(x); !c) throw ValidationError("invalid system object: " + c.law + " " + c.detail);
  return x;
}

Json sys_ymor_to_json(const SysYMor& l) {
  return {{"src", system_object_to_json(l.src)},
          {"dst", interface_to_json(l.dst)},
          {"f", morphism_to_json(l.f)},
          {"fsharp", morphism_to_json(l.fsharp)}};
}

SysYMor sys_ymor_from_json(const Json& j) {
  SysYMor l{system_object_from_json(j.at("src")), interface_from_json(j.at("dst")), morphism_from_json(j.at("f")),
            morphism_from_json(j.at("fsharp"))};
  if (auto c = validate_sys_ymor(l); !c) throw ValidationError("invalid system lens: " + c.law + " " + c.detail);
  return l;
}

Json sys_xmor_to_json(const SysXMor& m) {
  return {{"src", system_object_to_json(m.src)},
          {"dst", system_object_to_json(m.dst)},
          {"fflat", morphism_to_json(m.fflat)},
          {"f", morphism_to_json(m.f)}};
}

SysXMor sys_xmor_from_json(const Json& j) {
  SysXMor m{system_object_from_json(j.at("src")), system_object_from_json(j.at("dst")),
            morphism_from_json(j.at("fflat")), morphism_from_json(j.at("f"))};
  if (auto c = validate_sys_xmor(m); !c) throw ValidationError("invalid x-morphism: " + c.law + " " + c.detail);
  return m;
}

Json sys_xy_to_json(const SysXYSquare& sq) {
  return {{"top", sys_xmor_to_json(sq.top)},
          {"bottom", chart_to_json(sq.bottom)},
          {"left", sys_ymor_to_json(sq.left)},
          {"right", sys_ymor_to_json(sq.right)},
          {"s", morphism_to_json(sq.s)}};
}

SysXYSquare sys_xy_from_json(const Json& j) {
  SysXYSquare sq{sys_xmor_from_json(j.at("top")), chart_from_json(j.at("bottom")), sys_ymor_from_json(j.at("left")),
                 sys_ymor_from_json(j.at("right")), morphism_from_json(j.at("s"))};
  if (auto c = validate_sys_xy(sq); !c) throw ValidationError("invalid system square: " + c.law + " " + c.detail);
  return sq;
}

}  // namespace mksys
