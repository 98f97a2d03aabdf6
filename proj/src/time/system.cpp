#include "mksys/time/system.hpp"

#include <numeric>

#include "mksys/core/circuit.hpp"

namespace mksys {

namespace {

std::vector<std::size_t> first_factors(std::size_t count) {
  std::vector<std::size_t> v(count);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::string coord(const std::string& name, std::size_t k) { return name + std::to_string(k); }

}  // namespace

Morphism IndexedObject::restriction(std::size_t from, std::size_t to) const {
  if (from < to || from >= at.size()) throw BadFactorSelection("restriction must go backwards in time");
  Morphism m = identity(at[from]);
  for (std::size_t n = from; n > to; --n) m = compose(m, restrict[n - 1]);
  return m;
}

std::vector<std::string> IndexedObject::coordinate_names(std::size_t n) const {
  if (n < coords.size() && coords[n].size() == at[n].rank()) return coords[n];
  std::vector<std::string> out;
  for (std::size_t k = 0; k < at[n].rank(); ++k) out.push_back(coord("x", k));
  return out;
}

IndexedObject IndexedObject::constant(const FiniteObject& x, std::size_t horizon, const std::string& name) {
  IndexedObject a;
  for (std::size_t n = 0; n <= horizon; ++n) {
    a.at.push_back(x);
    std::vector<std::string> names;
    for (std::size_t k = 0; k < x.rank(); ++k) names.push_back(x.rank() == 1 ? name : coord(name, k));
    a.coords.push_back(names);
  }
  for (std::size_t n = 0; n < horizon; ++n) a.restrict.push_back(identity(x));
  return a;
}

IndexedObject IndexedObject::history(const FiniteObject& x, std::size_t horizon, std::size_t offset,
                                     const std::string& name) {
  IndexedObject a;
  for (std::size_t n = 0; n <= horizon; ++n) {
    a.at.push_back(x.power(n + offset));
    std::vector<std::string> names;
    for (std::size_t t = 0; t < n + offset; ++t)
      for (std::size_t k = 0; k < x.rank(); ++k)
        names.push_back(x.rank() == 1 ? coord(name, t) : coord(name, t) + "." + std::to_string(k));
    a.coords.push_back(names);
  }
  for (std::size_t n = 0; n < horizon; ++n) a.restrict.push_back(wire(a.at[n + 1], first_factors(a.at[n].rank())));
  return a;
}

Check validate_indexed(const IndexedObject& a) {
  if (a.at.empty() || a.restrict.size() + 1 != a.at.size())
    return Check::fail("indexed object shape", "need one restriction per edge");
  for (std::size_t n = 0; n < a.restrict.size(); ++n) {
    const auto& r = a.restrict[n];
    if (!(r.dom() == a.at[n + 1]) || !(r.cod() == a.at[n]))
      return Check::fail("restriction type", "edge " + std::to_string(n));
    if (!is_deterministic(r)) return Check::fail("restriction deterministic", "edge " + std::to_string(n));
  }
  return Check::pass();
}

Check validate_system(const GSystem& sys) {
  const auto T = sys.horizon();
  for (const auto* a : {&sys.S, &sys.I, &sys.O}) {
    if (a->horizon() != T) return Check::fail("horizon", "indexed objects disagree on the horizon");
    if (auto c = validate_indexed(*a); !c) return c;
  }
  if (sys.expose.size() != T + 1 || sys.update.size() != T)
    return Check::fail("system shape", "need expose per node and update per edge");
  for (std::size_t n = 0; n <= T; ++n) {
    const auto& e = sys.expose[n];
    if (!(e.dom() == sys.S.at[n]) || !(e.cod() == sys.O.at[n]))
      return Check::fail("expose type", "node " + std::to_string(n));
    if (!is_deterministic(e)) return Check::fail("expose deterministic", "node " + std::to_string(n));
  }
  for (std::size_t n = 0; n < T; ++n) {
    auto at = " at edge " + std::to_string(n);
    // expose natural: expose^(n+1) ; res_O = res_S ; expose^n
    if (auto c = same_kernel("expose natural", compose(sys.expose[n + 1], sys.O.restrict[n]),
                             compose(sys.S.restrict[n], sys.expose[n]));
        !c)
      return Check::fail(c.law, c.detail + at);
    if (auto c = validate_sys_ymor(sys.lens(n)); !c) return Check::fail(c.law, c.detail + at);
  }
  return Check::pass();
}

GSystem make_open_markov_system(const FiniteObject& S, const FiniteObject& I, const FiniteObject& O,
                                const Morphism& expose, const Morphism& update, std::size_t horizon) {
  if (horizon < 1) throw ShapeMismatch("horizon must be at least 1");
  if (!(expose.dom() == S) || !(expose.cod() == O)) throw ShapeMismatch("expose must map S to O");
  if (!(update.dom() == S * I) || !(update.cod() == S)) throw ShapeMismatch("update must map S⊗I to S");
  GSystem sys;
  sys.S = IndexedObject::history(S, horizon, 1, "s");
  sys.I = IndexedObject::history(I, horizon, 0, "i");
  sys.O = IndexedObject::history(O, horizon, 1, "o");
  for (std::size_t n = 0; n <= horizon; ++n) {
    Morphism e = expose;
    for (std::size_t k = 0; k < n; ++k) e = tensor(e, expose);
    sys.expose.push_back(e);
  }
  for (std::size_t n = 0; n < horizon; ++n) {
    // (s0..sn, i0..in) -> (s0..sn, update(sn, in))
    std::vector<Circuit::Port> in;
    for (std::size_t k = 0; k <= n; ++k) in.push_back({coord("s", k), S});
    for (std::size_t k = 0; k <= n; ++k) in.push_back({coord("i", k), I});
    Circuit c(in);
    c.copy(coord("s", n), "last");
    c.apply(update, {"last", coord("i", n)}, {{coord("s", n + 1), S}});
    std::vector<std::string> out;
    for (std::size_t k = 0; k <= n + 1; ++k) out.push_back(coord("s", k));
    sys.update.push_back(c.result(out));
  }
  return sys;
}

GSystem clock_system(std::size_t horizon) {
  GSystem sys;
  sys.S = sys.I = sys.O = IndexedObject::constant(FiniteObject::unit(), horizon);
  for (std::size_t n = 0; n <= horizon; ++n) sys.expose.push_back(identity(FiniteObject::unit()));
  for (std::size_t n = 0; n < horizon; ++n) sys.update.push_back(identity(FiniteObject::unit()));
  return sys;
}

Check validate_wiring(const GSystem& sys, const SystemWiring& w) {
  const auto T = sys.horizon();
  if (w.lens.size() != T || w.I2.horizon() != T || w.O2.horizon() != T)
    return Check::fail("wiring shape", "need one lens per edge");
  for (const auto* a : {&w.I2, &w.O2})
    if (auto c = validate_indexed(*a); !c) return c;
  for (std::size_t n = 0; n < T; ++n) {
    const auto& l = w.lens[n];
    auto at = " at edge " + std::to_string(n);
    if (!(l.src == sys.interface(n))) return Check::fail("wiring boundary", "inner interface" + at);
    if (!(l.dst == Interface{w.I2.at[n + 1], w.O2.at[n]})) return Check::fail("wiring boundary", "outer interface" + at);
    if (auto c = validate_lens(l); !c) return Check::fail(c.law, c.detail + at);
  }
  const auto& lf = w.last_f;
  if (!(lf.dom() == sys.O.at[T]) || !(lf.cod() == w.O2.at[T]) || !is_deterministic(lf))
    return Check::fail("wiring boundary", "last output map");
  // Forward maps commute with the output restrictions.
  for (std::size_t n = 0; n < T; ++n) {
    const auto& next = n + 1 < T ? w.lens[n + 1].f : lf;
    if (!(compose(next, w.O2.restrict[n]) == compose(sys.O.restrict[n], w.lens[n].f)))
      return Check::fail("wiring natural", "output maps at nodes " + std::to_string(n) + "," + std::to_string(n + 1));
  }
  return Check::pass();
}

SystemWiring identity_wiring(const GSystem& sys) {
  SystemWiring w{sys.I, sys.O, {}, identity(sys.O.at[sys.horizon()])};
  for (std::size_t n = 0; n < sys.horizon(); ++n) w.lens.push_back(lens_identity(sys.interface(n)));
  return w;
}

SystemWiring lift_lens(const DetLens& step, std::size_t horizon) {
  SystemWiring w;
  w.I2 = IndexedObject::history(step.dst.a, horizon, 0, "i");
  w.O2 = IndexedObject::history(step.dst.c, horizon, 1, "o");
  for (std::size_t n = 0; n < horizon; ++n) {
    Morphism f = step.f;
    for (std::size_t k = 0; k < n; ++k) f = tensor(f, step.f);
    // (o0..on, i0..in) -> (w♯(o0, i0), ..., w♯(on, in))
    std::vector<Circuit::Port> in;
    for (std::size_t k = 0; k <= n; ++k) in.push_back({coord("o", k), step.src.c});
    for (std::size_t k = 0; k <= n; ++k) in.push_back({coord("i", k), step.dst.a});
    Circuit c(in);
    std::vector<std::string> out;
    for (std::size_t k = 0; k <= n; ++k) {
      c.apply(step.fsharp, {coord("o", k), coord("i", k)}, {{coord("j", k), step.src.a}});
      out.push_back(coord("j", k));
    }
    Interface src{step.src.a.power(n + 1), step.src.c.power(n + 1)};
    Interface dst{step.dst.a.power(n + 1), step.dst.c.power(n + 1)};
    w.lens.push_back({src, dst, f, c.result(out)});
  }
  w.last_f = step.f;
  for (std::size_t k = 0; k < horizon; ++k) w.last_f = tensor(w.last_f, step.f);
  return w;
}

SystemWiring compose_wirings(const SystemWiring& w1, const SystemWiring& w2) {
  if (w1.lens.size() != w2.lens.size()) throw ShapeMismatch("wirings have different horizons");
  SystemWiring w{w2.I2, w2.O2, {}, compose(w1.last_f, w2.last_f)};
  for (std::size_t n = 0; n < w1.lens.size(); ++n) w.lens.push_back(lens_compose(w1.lens[n], w2.lens[n]));
  return w;
}

GSystem compose_system_with_lens(const GSystem& sys, const SystemWiring& w) {
  if (auto c = validate_wiring(sys, w); !c) {
    if (c.law == "wiring natural") throw NaturalityViolation(c.detail);
    throw BoundaryMismatch(c.law + ": " + c.detail);
  }
  GSystem out;
  out.S = sys.S;
  out.I = w.I2;
  out.O = w.O2;
  const auto T = sys.horizon();
  for (std::size_t n = 0; n < T; ++n) {
    auto l = sys_lens_compose(sys.lens(n), w.lens[n]);
    out.expose.push_back(l.f);
    out.update.push_back(l.fsharp);
  }
  out.expose.push_back(compose(sys.expose[T], w.last_f));
  return out;
}

}  // namespace mksys
