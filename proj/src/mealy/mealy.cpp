#include "mksys/mealy/mealy.hpp"

#include "mksys/core/circuit.hpp"

namespace mksys {

namespace {

std::string at_edge(std::size_t n) { return " at edge " + std::to_string(n); }

std::vector<std::size_t> iota(std::size_t first, std::size_t count) {
  std::vector<std::size_t> v(count);
  for (std::size_t k = 0; k < count; ++k) v[k] = first + k;
  return v;
}

IndexedObject indexed_tensor(const IndexedObject& x, const IndexedObject& y) {
  if (x.horizon() != y.horizon()) throw ObjectMismatch("indexed objects have different horizons");
  IndexedObject z;
  for (std::size_t n = 0; n <= x.horizon(); ++n) {
    z.at.push_back(x.at[n] * y.at[n]);
    auto names = x.coordinate_names(n), more = y.coordinate_names(n);
    names.insert(names.end(), more.begin(), more.end());
    z.coords.push_back(names);
  }
  for (std::size_t n = 0; n < x.horizon(); ++n) z.restrict.push_back(tensor(x.restrict[n], y.restrict[n]));
  return z;
}

Check projection_condition(const Morphism& f, const FiniteObject& pre, const FiniteObject& Sn, const FiniteObject& B1,
                           const Morphism& res, std::size_t n) {
  // f ; π_S(n+1) ; res = π_S(n)
  const auto lhs = compose({f, wire(f.cod(), iota(B1.rank(), f.cod().rank() - B1.rank())), res});
  const auto rhs = wire(pre * Sn, iota(pre.rank(), Sn.rank()));
  if (auto c = same_kernel("projection condition", lhs, rhs); !c) return Check::fail(c.law, c.detail + at_edge(n));
  return Check::pass();
}

}  // namespace

bool same_indexed(const IndexedObject& x, const IndexedObject& y) { return x.at == y.at && x.restrict == y.restrict; }

bool GMealy::operator==(const GMealy& o) const {
  return same_indexed(A, o.A) && same_indexed(B, o.B) && same_indexed(S, o.S) && f == o.f;
}

bool GParaMealy::operator==(const GParaMealy& o) const {
  return same_indexed(A, o.A) && same_indexed(B, o.B) && same_indexed(S, o.S) && same_indexed(Omega, o.Omega) &&
         f == o.f;
}

Check validate_mealy(const GMealy& m) {
  const auto T = m.horizon();
  for (const auto* x : {&m.A, &m.B, &m.S}) {
    if (x->horizon() != T) return Check::fail("horizon", "indexed objects disagree");
    if (auto c = validate_indexed(*x); !c) return c;
  }
  if (m.f.size() != T) return Check::fail("mealy shape", "need one map per edge");
  for (std::size_t n = 0; n < T; ++n) {
    const auto& f = m.f[n];
    if (!(f.dom() == m.A.at[n + 1] * m.S.at[n]) || !(f.cod() == m.B.at[n + 1] * m.S.at[n + 1]))
      return Check::fail("mealy type", at_edge(n));
    if (auto c = projection_condition(f, m.A.at[n + 1], m.S.at[n], m.B.at[n + 1], m.S.restrict[n], n); !c) return c;
  }
  return Check::pass();
}

Check validate_para_mealy(const GParaMealy& m) {
  const auto T = m.horizon();
  for (const auto* x : {&m.A, &m.B, &m.S, &m.Omega}) {
    if (x->horizon() != T) return Check::fail("horizon", "indexed objects disagree");
    if (auto c = validate_indexed(*x); !c) return c;
  }
  if (m.f.size() != T) return Check::fail("mealy shape", "need one map per edge");
  for (std::size_t n = 0; n < T; ++n) {
    const auto& f = m.f[n];
    const auto pre = m.A.at[n + 1] * m.Omega.at[n + 1];
    if (!(f.dom() == pre * m.S.at[n]) || !(f.cod() == m.B.at[n + 1] * m.S.at[n + 1]))
      return Check::fail("mealy type", at_edge(n));
    if (auto c = projection_condition(f, pre, m.S.at[n], m.B.at[n + 1], m.S.restrict[n], n); !c) return c;
  }
  for (std::size_t n = 0; n + 1 < T; ++n) {
    const auto lhs = compose(m.f[n + 1], tensor(m.B.restrict[n + 1], m.S.restrict[n + 1]));
    const auto rhs = compose(tensor({m.A.restrict[n + 1], m.Omega.restrict[n + 1], m.S.restrict[n]}), m.f[n]);
    if (auto c = same_kernel("parameter naturality", lhs, rhs); !c) return Check::fail(c.law, c.detail + at_edge(n));
  }
  return Check::pass();
}

GMealy mealy_identity(const IndexedObject& A) {
  std::vector<Morphism> k;
  for (std::size_t n = 0; n < A.horizon(); ++n) k.push_back(identity(A.at[n + 1]));
  return mealy_stateless(A, A, k);
}

GMealy mealy_stateless(const IndexedObject& A, const IndexedObject& B, const std::vector<Morphism>& k) {
  GMealy m{A, B, IndexedObject::constant(FiniteObject::unit(), A.horizon(), "u"), k};
  if (auto c = validate_mealy(m); !c) throw ObjectMismatch(c.law + c.detail);
  return m;
}

GMealy mealy_compose(const GMealy& f, const GMealy& g) {
  if (!same_indexed(f.B, g.A)) throw ObjectMismatch("mealy_compose: codomain of f differs from domain of g");
  GMealy h{f.A, g.B, indexed_tensor(f.S, g.S), {}};
  for (std::size_t n = 0; n < f.horizon(); ++n) {
    Circuit c({{"a", f.A.at[n + 1]}, {"s", f.S.at[n]}, {"t", g.S.at[n]}});
    c.apply(f.f[n], {"a", "s"}, {{"b", f.B.at[n + 1]}, {"s", f.S.at[n + 1]}});
    c.apply(g.f[n], {"b", "t"}, {{"c", g.B.at[n + 1]}, {"t", g.S.at[n + 1]}});
    h.f.push_back(c.result({"c", "s", "t"}));
  }
  return h;
}

GMealy mealy_tensor(const GMealy& f, const GMealy& g) {
  GMealy h{indexed_tensor(f.A, g.A), indexed_tensor(f.B, g.B), indexed_tensor(f.S, g.S), {}};
  for (std::size_t n = 0; n < f.horizon(); ++n) {
    Circuit c({{"a", f.A.at[n + 1]}, {"a'", g.A.at[n + 1]}, {"s", f.S.at[n]}, {"s'", g.S.at[n]}});
    c.apply(f.f[n], {"a", "s"}, {{"b", f.B.at[n + 1]}, {"s", f.S.at[n + 1]}});
    c.apply(g.f[n], {"a'", "s'"}, {{"b'", g.B.at[n + 1]}, {"s'", g.S.at[n + 1]}});
    h.f.push_back(c.result({"b", "b'", "s", "s'"}));
  }
  return h;
}

GMealy mealy_symmetry(const IndexedObject& A, const IndexedObject& A2) {
  std::vector<Morphism> k;
  for (std::size_t n = 0; n < A.horizon(); ++n) k.push_back(swap(A.at[n + 1], A2.at[n + 1]));
  return mealy_stateless(indexed_tensor(A, A2), indexed_tensor(A2, A), k);
}

GMealy mealy_transport(const GMealy& m, const IndexedObject& S2, const std::vector<Morphism>& iso) {
  if (iso.size() != m.horizon() + 1) throw ObjectMismatch("need one bijection per node");
  auto inverse = [](const Morphism& f) {
    if (!f.rows_are_points() || f.dom().size() != f.cod().size()) throw ObjectMismatch("state relabeling must be a bijection");
    std::vector<Index> inv(f.dom().size());
    for (Index k = 0; k < inv.size(); ++k) inv[f.image(k)] = k;
    return Morphism::function(f.cod(), f.dom(), inv);
  };
  GMealy out{m.A, m.B, S2, {}};
  for (std::size_t n = 0; n < m.horizon(); ++n)
    out.f.push_back(compose({tensor(identity(m.A.at[n + 1]), inverse(iso[n])), m.f[n],
                             tensor(identity(m.B.at[n + 1]), iso[n + 1])}));
  return out;
}

GParaMealy para_from_mealy(const GMealy& m) {
  return {m.A, m.B, m.S, IndexedObject::constant(FiniteObject::unit(), m.horizon(), "w"), m.f};
}

GParaMealy para_mealy_compose(const GParaMealy& f, const GParaMealy& g) {
  if (!same_indexed(f.B, g.A)) throw ObjectMismatch("para_mealy_compose: codomain of f differs from domain of g");
  GParaMealy h{f.A, g.B, indexed_tensor(f.S, g.S), indexed_tensor(f.Omega, g.Omega), {}};
  for (std::size_t n = 0; n < f.horizon(); ++n) {
    Circuit c({{"a", f.A.at[n + 1]}, {"w", f.Omega.at[n + 1]}, {"w'", g.Omega.at[n + 1]}, {"s", f.S.at[n]},
               {"t", g.S.at[n]}});
    c.apply(f.f[n], {"a", "w", "s"}, {{"b", f.B.at[n + 1]}, {"s", f.S.at[n + 1]}});
    c.apply(g.f[n], {"b", "w'", "t"}, {{"c", g.B.at[n + 1]}, {"t", g.S.at[n + 1]}});
    h.f.push_back(c.result({"c", "s", "t"}));
  }
  return h;
}

GParaMealy para_mealy_tensor(const GParaMealy& f, const GParaMealy& g) {
  GParaMealy h{indexed_tensor(f.A, g.A), indexed_tensor(f.B, g.B), indexed_tensor(f.S, g.S),
               indexed_tensor(f.Omega, g.Omega), {}};
  for (std::size_t n = 0; n < f.horizon(); ++n) {
    Circuit c({{"a", f.A.at[n + 1]}, {"a'", g.A.at[n + 1]}, {"w", f.Omega.at[n + 1]}, {"w'", g.Omega.at[n + 1]},
               {"s", f.S.at[n]}, {"s'", g.S.at[n]}});
    c.apply(f.f[n], {"a", "w", "s"}, {{"b", f.B.at[n + 1]}, {"s", f.S.at[n + 1]}});
    c.apply(g.f[n], {"a'", "w'", "s'"}, {{"b'", g.B.at[n + 1]}, {"s'", g.S.at[n + 1]}});
    h.f.push_back(c.result({"b", "b'", "s", "s'"}));
  }
  return h;
}

IndexedObject shifted_outputs(const IndexedObject& O) {
  IndexedObject B;
  B.at.push_back(FiniteObject::unit());
  B.coords.push_back({});
  for (std::size_t n = 0; n < O.horizon(); ++n) {
    B.at.push_back(O.at[n]);
    B.coords.push_back(O.coordinate_names(n));
  }
  if (O.horizon() >= 1) B.restrict.push_back(discard(O.at[0]));
  for (std::size_t n = 0; n + 1 < O.horizon(); ++n) B.restrict.push_back(O.restrict[n]);
  return B;
}

GMealy moore_to_mealy(const GSystem& sys) {
  GMealy m{sys.I, shifted_outputs(sys.O), sys.S, {}};
  for (std::size_t n = 0; n < sys.horizon(); ++n) {
    Circuit c({{"i", sys.I.at[n + 1]}, {"s", sys.S.at[n]}});
    c.copy("s", "s_");
    c.apply(sys.expose[n], {"s_"}, {{"o", sys.O.at[n]}});
    c.apply(sys.update[n], {"s", "i"}, {{"s", sys.S.at[n + 1]}});
    m.f.push_back(c.result({"o", "s"}));
  }
  return m;
}

std::pair<GMealy, GMealy> feedback_free_wiring(const GSystem& sys, const SystemWiring& w) {
  std::vector<Morphism> back, fwd;
  for (std::size_t n = 0; n < sys.horizon(); ++n) {
    const auto& l = w.lens[n];
    const auto& O1 = l.src.c;
    // w♯ must factor through the projection onto I2.
    const auto k = compose(tensor(Morphism::dirac(O1, 0), identity(l.dst.a)), l.fsharp);
    if (!(compose(wire(O1 * l.dst.a, iota(O1.rank(), l.dst.a.rank())), k) == l.fsharp))
      throw PreconditionViolation("wiring backward map reads the inner output" + at_edge(n));
    back.push_back(k);
    fwd.push_back(l.f);
  }
  return {mealy_stateless(w.I2, sys.I, back), mealy_stateless(shifted_outputs(sys.O), shifted_outputs(w.O2), fwd)};
}

Json mealy_to_json(const GMealy& m) {
  Json f = Json::array();
  for (const auto& k : m.f) f.push_back(morphism_to_json(k));
  return {{"A", indexed_to_json(m.A)}, {"B", indexed_to_json(m.B)}, {"S", indexed_to_json(m.S)}, {"f", f}};
}

GMealy mealy_from_json(const Json& j) {
  for (const char* key : {"A", "B", "S", "f"})
    if (!j.contains(key)) throw ParseError(std::string("machine is missing \"") + key + "\"");
  GMealy m{indexed_from_json(j["A"]), indexed_from_json(j["B"]), indexed_from_json(j["S"]), {}};
  for (const auto& k : j["f"]) m.f.push_back(morphism_from_json(k));
  if (auto c = validate_mealy(m); !c) throw ValidationError(c.law + ": " + c.detail);
  return m;
}

}  // namespace mksys
