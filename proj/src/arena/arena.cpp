#include "mksys/arena/arena.hpp"

#include "mksys/core/circuit.hpp"

namespace mksys {

Interface operator*(const Interface& x, const Interface& y) { return {x.a * y.a, x.c * y.c}; }

Check same_kernel(const std::string& law, const Morphism& lhs, const Morphism& rhs) {
  if (!(lhs.dom() == rhs.dom()) || !(lhs.cod() == rhs.cod()))
    return Check::fail(law, "sides have different types: " + lhs.dom().describe() + "->" + lhs.cod().describe() +
                                " vs " + rhs.dom().describe() + "->" + rhs.cod().describe());
  long a = lhs.first_difference(rhs);
  if (a < 0) return Check::pass();
  return Check::fail(law, "first differing row " + std::to_string(a) + " (" + lhs.dom().label(a) + ")");
}

namespace {

Check expect_type(const std::string& what, const Morphism& m, const FiniteObject& dom, const FiniteObject& cod) {
  if (!(m.dom() == dom) || !(m.cod() == cod))
    return Check::fail(what, "expected " + dom.describe() + "->" + cod.describe() + ", got " + m.dom().describe() +
                                 "->" + m.cod().describe());
  return Check::pass();
}

}  // namespace

Check validate_lens(const DetLens& l) {
  if (auto c = expect_type("lens output map type", l.f, l.src.c, l.dst.c); !c) return c;
  if (auto c = expect_type("lens update map type", l.fsharp, l.src.c * l.dst.a, l.src.a); !c) return c;
  if (!is_deterministic(l.f)) return Check::fail("lens output map deterministic");
  if (!is_deterministic(l.fsharp)) return Check::fail("lens update map deterministic");
  return Check::pass();
}

DetLens make_lens(Interface src, Interface dst, Morphism f, Morphism fsharp) {
  DetLens l{std::move(src), std::move(dst), std::move(f), std::move(fsharp)};
  if (auto c = validate_lens(l); !c) throw ObjectMismatch("invalid lens: " + c.law + " " + c.detail);
  return l;
}

DetLens lens_identity(const Interface& x) {
  return {x, x, identity(x.c), wire(x.c * x.a, [&] {
            std::vector<std::size_t> pos;
            for (std::size_t k = 0; k < x.a.rank(); ++k) pos.push_back(x.c.rank() + k);
            return pos;
          }())};
}

DetLens lens_compose(const DetLens& l1, const DetLens& l2) {
  if (!(l1.dst == l2.src)) throw ObjectMismatch("lens_compose: interfaces do not meet");
  // c1 a3 -> copy c1 -> c1 f(c1) a3 -> c1 g♯(c2, a3) -> f♯(c1, a2)
  Circuit c({{"c1", l1.src.c}, {"a3", l2.dst.a}});
  c.copy("c1", "c1'");
  c.apply(l1.f, {"c1'"}, {{"c2", l1.dst.c}});
  c.apply(l2.fsharp, {"c2", "a3"}, {{"a2", l1.dst.a}});
  c.apply(l1.fsharp, {"c1", "a2"}, {{"a1", l1.src.a}});
  return {l1.src, l2.dst, compose(l1.f, l2.f), c.result({"a1"})};
}

DetLens lens_tensor(const DetLens& l1, const DetLens& l2) {
  Circuit c({{"c", l1.src.c}, {"c'", l2.src.c}, {"a", l1.dst.a}, {"a'", l2.dst.a}});
  c.apply(l1.fsharp, {"c", "a"}, {{"x", l1.src.a}});
  c.apply(l2.fsharp, {"c'", "a'"}, {{"x'", l2.src.a}});
  return {l1.src * l2.src, l1.dst * l2.dst, tensor(l1.f, l2.f), c.result({"x", "x'"})};
}

Check validate_chart(const Chart& x) {
  const auto& [a1, c1] = x.src;
  const auto& [a2, c2] = x.dst;
  const auto& [a12, c12] = x.residual;
  if (auto c = expect_type("chart output map type", x.g, c1, c12 * c2); !c) return c;
  if (auto c = expect_type("chart joint map type", x.gflat, c1 * a1, c12 * c2 * a12 * a2); !c) return c;
  // g♭ ; π_{c12 c2} = π_{c1} ; g
  return same_kernel("chart marginal", marginal_range(x.gflat, 0, c12.rank() + c2.rank()),
                     compose(marginal_range(identity(c1 * a1), 0, c1.rank()), x.g));
}

Chart make_chart(Interface src, Interface dst, Interface residual, Morphism g, Morphism gflat) {
  Chart x{std::move(src), std::move(dst), std::move(residual), std::move(g), std::move(gflat)};
  if (auto c = validate_chart(x); !c) throw ValidationError("invalid chart: " + c.law + " " + c.detail);
  return x;
}

Chart chart_compose(const Chart& x1, const Chart& x2) {
  if (!(x1.dst == x2.src)) throw ObjectMismatch("chart_compose: interfaces do not meet");
  const auto& [a2, c2] = x1.dst;
  const auto& [a12, c12] = x1.residual;
  const auto& [a23, c23] = x2.residual;
  const auto& [a3, c3] = x2.dst;

  // c1 -> f12 -> c12 c2 -> copy c2 -> c12 c2 f23(c2)
  Circuit g({{"c1", x1.src.c}});
  g.apply(x1.g, {"c1"}, {{"c12", c12}, {"c2", c2}});
  g.copy("c2", "c2'");
  g.apply(x2.g, {"c2'"}, {{"c23", c23}, {"c3", c3}});

  // c1 a1 -> f12♭ -> c12 c2 a12 a2 -> copy the c2 a2 legs -> f23♭ on the copies
  // -> permute to c12 c2 c23 c3 a12 a2 a23 a3
  Circuit gf({{"c1", x1.src.c}, {"a1", x1.src.a}});
  gf.apply(x1.gflat, {"c1", "a1"}, {{"c12", c12}, {"c2", c2}, {"a12", a12}, {"a2", a2}});
  gf.copy("c2", "c2'").copy("a2", "a2'");
  gf.apply(x2.gflat, {"c2'", "a2'"}, {{"c23", c23}, {"c3", c3}, {"a23", a23}, {"a3", a3}});

  return {x1.src, x2.dst, Interface{a12 * a2 * a23, c12 * c2 * c23}, g.result({"c12", "c2", "c23", "c3"}),
          gf.result({"c12", "c2", "c23", "c3", "a12", "a2", "a23", "a3"})};
}

ZPair zpair_identity(const Interface& x) { return {x, x, identity(x.c), identity(x.a)}; }

ZPair zpair_compose(const ZPair& u, const ZPair& v) {
  if (!(u.dst == v.src)) throw ObjectMismatch("zpair_compose: interfaces do not meet");
  return {u.src, v.dst, compose(u.fc, v.fc), compose(u.fa, v.fa)};
}

Check validate_zpair(const ZPair& z) {
  if (auto c = expect_type("z output map type", z.fc, z.src.c, z.dst.c); !c) return c;
  if (auto c = expect_type("z input map type", z.fa, z.src.a, z.dst.a); !c) return c;
  if (!is_deterministic(z.fc) || !is_deterministic(z.fa)) return Check::fail("z maps deterministic");
  return Check::pass();
}

Json interface_to_json(const Interface& x) { return {{"a", object_to_json(x.a)}, {"c", object_to_json(x.c)}}; }

Interface interface_from_json(const Json& j) {
  if (!j.contains("a") || !j.contains("c")) throw ParseError("interface needs \"a\" and \"c\"");
  return {object_from_json(j["a"]), object_from_json(j["c"])};
}

Json lens_to_json(const DetLens& l) {
  return {{"src", interface_to_json(l.src)},
          {"dst", interface_to_json(l.dst)},
          {"f", morphism_to_json(l.f)},
          {"fsharp", morphism_to_json(l.fsharp)}};
}

DetLens lens_from_json(const Json& j) {
  return make_lens(interface_from_json(j.at("src")), interface_from_json(j.at("dst")), morphism_from_json(j.at("f")),
                   morphism_from_json(j.at("fsharp")));
}

Json chart_to_json(const Chart& x) {
  return {{"src", interface_to_json(x.src)},
          {"dst", interface_to_json(x.dst)},
          {"residual", interface_to_json(x.residual)},
          {"g", morphism_to_json(x.g)},
          {"gflat", morphism_to_json(x.gflat)}};
}

Chart chart_from_json(const Json& j) {
  return make_chart(interface_from_json(j.at("src")), interface_from_json(j.at("dst")),
                    interface_from_json(j.at("residual")), morphism_from_json(j.at("g")),
                    morphism_from_json(j.at("gflat")));
}

Json xy_to_json(const XYSquare& sq) {
  return {{"top", chart_to_json(sq.top)},     {"bottom", chart_to_json(sq.bottom)},
          {"left", lens_to_json(sq.left)},    {"right", lens_to_json(sq.right)},
          {"lens", lens_to_json(sq.lens)},    {"s", morphism_to_json(sq.s)}};
}

XYSquare xy_from_json(const Json& j) {
  XYSquare sq{chart_from_json(j.at("top")), chart_from_json(j.at("bottom")), lens_from_json(j.at("left")),
              lens_from_json(j.at("right")), lens_from_json(j.at("lens")),   morphism_from_json(j.at("s"))};
  if (auto c = validate_xy(sq); !c) throw ValidationError("invalid xy-square: " + c.law + " " + c.detail);
  return sq;
}

}  // namespace mksys
