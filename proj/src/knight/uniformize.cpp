#include "mksys/knight/uniformize.hpp"

#include <algorithm>

#include "mksys/core/circuit.hpp"

namespace mksys {

IntervalPartition uniformize(const Morphism& f) {
  if (f.kind() == Kind::Poss) throw InstanceMismatch("uniformize needs a stochastic kernel");
  IntervalPartition p{f.dom(), f.cod(), {}};
  const auto ncod = f.cod().size();
  for (Index a = 0; a < f.dom().size(); ++a) {
    std::vector<Rational> b(ncod + 1);
    b[0] = 0;
    const auto& row = f.row(a);
    auto it = row.begin();
    for (Index t = 0; t < ncod; ++t) {
      b[t + 1] = b[t];
      if (it != row.end() && it->col == t) b[t + 1] += (it++)->w;
    }
    p.breaks.push_back(std::move(b));
  }
  return p;
}

Check validate_partition(const IntervalPartition& p) {
  if (p.breaks.size() != p.dom.size()) return Check::fail("partition shape", "one cell per domain point");
  for (Index a = 0; a < p.breaks.size(); ++a) {
    const auto& b = p.breaks[a];
    auto cell = "cell " + std::to_string(a);
    if (b.size() != p.cod.size() + 1) return Check::fail("partition shape", cell);
    if (b.front() != 0 || b.back() != 1) return Check::fail("partition endpoints", cell);
    if (!std::is_sorted(b.begin(), b.end())) return Check::fail("breakpoints nondecreasing", cell);
  }
  return Check::pass();
}

Index evaluate(const IntervalPartition& p, Index cell, const Rational& u) {
  if (u <= 0 || u > 1) throw PreconditionViolation("uniform parameter must lie in (0, 1]");
  const auto& b = p.breaks.at(cell);
  // first j with u <= b[j+1]
  auto it = std::lower_bound(b.begin() + 1, b.end(), u);
  return static_cast<Index>(it - b.begin() - 1);
}

Rational cumulative(const IntervalPartition& p, Index cell, Index t) { return p.breaks.at(cell).at(t + 1); }

Morphism to_kernel(const IntervalPartition& p) {
  std::vector<Row> rows;
  for (const auto& b : p.breaks) {
    Row r;
    for (Index t = 0; t + 1 < b.size(); ++t)
      if (b[t + 1] > b[t]) r.push_back({t, Rational(b[t + 1] - b[t])});
    rows.push_back(std::move(r));
  }
  return Morphism(p.dom, p.cod, Kind::Stoch, std::move(rows));
}

std::optional<Morphism> as_function(const IntervalPartition& p) {
  std::vector<Index> map;
  for (const auto& b : p.breaks) {
    std::optional<Index> hit;
    for (Index t = 0; t + 1 < b.size(); ++t)
      if (b[t] == 0 && b[t + 1] == 1) hit = t;
    if (!hit) return std::nullopt;
    map.push_back(*hit);
  }
  return Morphism::function(p.dom, p.cod, map);
}

UniformParameter uniform_parameter(const IntervalPartition& p) {
  UniformParameter u;
  for (const auto& b : p.breaks) u.cuts.insert(u.cuts.end(), b.begin(), b.end());
  u.cuts.push_back(0);
  u.cuts.push_back(1);
  std::sort(u.cuts.begin(), u.cuts.end());
  u.cuts.erase(std::unique(u.cuts.begin(), u.cuts.end()), u.cuts.end());
  const auto atoms = u.cuts.size() - 1;
  std::vector<std::string> labels;
  std::vector<Rational> len;
  for (std::size_t k = 0; k < atoms; ++k) {
    labels.push_back("(" + to_string(u.cuts[k]) + "," + to_string(u.cuts[k + 1]) + "]");
    len.push_back(u.cuts[k + 1] - u.cuts[k]);
  }
  u.omega = FiniteObject(labels);
  u.lambda = Morphism::distribution(u.omega, len);
  // Each atom lies inside exactly one interval of every cell; its right end
  // identifies it.
  u.g = Morphism::function(p.dom * u.omega, p.cod, [&](Index i) {
    const Index a = atoms == 1 ? i : i / atoms, k = atoms == 1 ? 0 : i % atoms;
    return evaluate(p, a, u.cuts[k + 1]);
  });
  return u;
}

Json partition_to_json(const IntervalPartition& p) {
  Json cells = Json::array();
  for (const auto& b : p.breaks) {
    Json row = Json::array();
    for (const auto& x : b) row.push_back(to_string(x));
    cells.push_back(row);
  }
  return {{"dom", object_to_json(p.dom)}, {"cod", object_to_json(p.cod)}, {"breaks", cells}};
}

IntervalPartition partition_from_json(const Json& j) {
  IntervalPartition p{object_from_json(j.at("dom")), object_from_json(j.at("cod")), {}};
  for (const auto& row : j.at("breaks")) {
    std::vector<Rational> b;
    for (const auto& x : row) b.push_back(parse_rational(x.get<std::string>()));
    p.breaks.push_back(std::move(b));
  }
  if (auto c = validate_partition(p); !c) throw ValidationError(c.law + ": " + c.detail);
  return p;
}

Check validate_knight(const KnightSystem& k) {
  const auto T = k.horizon();
  if (k.Omega.horizon() != T || k.expose.size() != T + 1 || k.update.size() != T)
    return Check::fail("knight shape");
  for (std::size_t n = 0; n < T; ++n) {
    const auto& u = k.update[n];
    if (!(u.dom() == k.S.at[n] * k.I.at[n + 1] * k.omega) || !(u.cod() == k.S.at[n + 1]))
      return Check::fail("knight update type", "edge " + std::to_string(n));
    if (!is_deterministic(u)) return Check::fail("knight update deterministic", "edge " + std::to_string(n));
  }
  // Every choice gives a valid system.
  for (Index w = 0; w < k.omega.size(); ++w) {
    GSystem sys{k.S, k.I, k.O, k.expose, {}};
    for (const auto& u : k.update)
      sys.update.push_back(compose(tensor(identity(u.dom().slice(0, u.dom().rank() - k.omega.rank())),
                                          Morphism::dirac(k.omega, w)),
                                   u));
    if (auto c = validate_system(sys); !c) return Check::fail(c.law, c.detail + " for choice " + k.omega.label(w));
  }
  return Check::pass();
}

KnightSystem knight_system(const FiniteObject& omega0, std::size_t horizon) {
  KnightSystem k;
  k.omega = omega0;
  k.S = k.I = k.O = IndexedObject::constant(FiniteObject::unit(), horizon);
  k.Omega = IndexedObject::history(omega0, horizon, 0, "w");
  for (std::size_t n = 0; n <= horizon; ++n) k.expose.push_back(identity(FiniteObject::unit()));
  for (std::size_t n = 0; n < horizon; ++n) k.update.push_back(discard(omega0));
  return k;
}

KnightSystem make_knight_system(const FiniteObject& S, const FiniteObject& I, const FiniteObject& O,
                                const Morphism& expose, const Morphism& g, const FiniteObject& omega0,
                                std::size_t horizon) {
  if (!(g.dom() == S * I * omega0) || !(g.cod() == S) || !is_deterministic(g))
    throw ShapeMismatch("knight step must be a function S⊗I⊗Ω0 -> S");
  // Reuse the history layout of the plain system; its update is replaced below.
  std::vector<std::size_t> keep(S.rank());
  for (std::size_t t = 0; t < keep.size(); ++t) keep[t] = t;
  const auto base = make_open_markov_system(S, I, O, expose, wire(S * I, keep), horizon);
  KnightSystem k;
  k.omega = omega0;
  k.S = base.S;
  k.I = base.I;
  k.O = base.O;
  k.expose = base.expose;
  k.Omega = IndexedObject::history(omega0, horizon, 0, "w");
  for (std::size_t n = 0; n < horizon; ++n) {
    std::vector<Circuit::Port> in;
    for (std::size_t t = 0; t <= n; ++t) in.push_back({"s" + std::to_string(t), S});
    for (std::size_t t = 0; t <= n; ++t) in.push_back({"i" + std::to_string(t), I});
    in.push_back({"w", omega0});
    Circuit c(in);
    c.copy("s" + std::to_string(n), "last");
    c.apply(g, {"last", "i" + std::to_string(n), "w"}, {{"next", S}});
    std::vector<std::string> out;
    for (std::size_t t = 0; t <= n; ++t) out.push_back("s" + std::to_string(t));
    out.push_back("next");
    k.update.push_back(c.result(out));
  }
  return k;
}

GSystem knight_underlying(const KnightSystem& k) {
  if (!k.omega.is_unit()) throw PreconditionViolation("the choice object must be unit to forget it");
  return {k.S, k.I, k.O, k.expose, k.update};
}

GSystem randomize(const KnightSystem& k, const Morphism& lambda) {
  if (!lambda.dom().is_unit() || !(lambda.cod() == k.omega)) throw ShapeMismatch("lambda must be a law on Ω0");
  GSystem sys{k.S, k.I, k.O, k.expose, {}};
  for (std::size_t n = 0; n < k.horizon(); ++n) {
    const auto x = k.S.at[n] * k.I.at[n + 1];
    sys.update.push_back(compose(tensor(identity(x), lambda), k.update[n]));
  }
  return sys;
}

KnightBehavior knight_unroll(const KnightSystem& k, const Morphism& initial, const InputPolicy& policy) {
  if (auto c = validate_knight(k); !c) throw ShapeMismatch("invalid knight system: " + c.law + " " + c.detail);
  const auto T = k.horizon();
  const bool closed = policy.empty();
  if (!closed && policy.size() != T) throw ShapeMismatch("need one policy kernel per edge");
  if (!initial.dom().is_unit()) throw ShapeMismatch("initial must be a distribution");
  const bool joint = !(initial.cod() == k.S.at[0]);
  if (joint && !(initial.cod() == k.S.at[0] * k.I.at[0])) throw ShapeMismatch("initial has the wrong codomain");
  if (!joint && !k.I.at[0].is_unit()) throw ShapeMismatch("initial must also cover I(0)");

  auto names = [](std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t t = 0; t < n; ++t) v.push_back("w" + std::to_string(t));
    return v;
  };
  auto ports = [&](std::size_t n) {
    std::vector<Circuit::Port> v;
    for (const auto& nm : names(n)) v.push_back({nm, k.omega});
    return v;
  };
  KnightBehavior b;
  Morphism rho = initial;  // Ω(n) -> S(n)⊗I(n)
  b.phi.push_back(marginal_range(rho, 0, k.S.at[0].rank()));
  for (std::size_t n = 0; n < T; ++n) {
    const auto &S = k.S.at[n], &I = k.I.at[n], &I1 = k.I.at[n + 1], &O = k.O.at[n];
    Circuit c(ports(n));
    c.apply(rho, names(n), {{"s", S}, {"i", I}});
    if (closed) {
      c.apply(discard(I), {"i"}, {});
      c.apply(identity(FiniteObject::unit()), {}, {{"j", I1}});
    } else {
      c.copy("s", "s_");
      c.apply(k.expose[n], {"s_"}, {{"o", O}});
      c.apply(policy[n], {"o", "i"}, {{"j", I1}});
    }
    const auto s = c.result({"s", "j"});
    b.s.push_back(s);
    b.p.push_back(compose(s, tensor(k.expose[n], identity(I1))));
    auto in = ports(n);
    in.push_back({"w" + std::to_string(n), k.omega});
    Circuit u(in);
    u.apply(s, names(n), {{"s", S}, {"j", I1}});
    u.copy("j", "j_");
    u.apply(k.update[n], {"s", "j_", "w" + std::to_string(n)}, {{"s", k.S.at[n + 1]}});
    rho = u.result({"s", "j"});
    b.phi.push_back(marginal_range(rho, 0, k.S.at[n + 1].rank()));
  }
  return b;
}

GTrajectory mix_behavior(const KnightBehavior& b, const Morphism& lambda) {
  auto power = [&](std::size_t n) {
    Morphism m = identity(FiniteObject::unit());
    for (std::size_t t = 0; t < n; ++t) m = tensor(m, lambda);
    return m;
  };
  GTrajectory tr;
  for (std::size_t n = 0; n < b.phi.size(); ++n) tr.phi.push_back(compose(power(n), b.phi[n]));
  for (std::size_t n = 0; n < b.s.size(); ++n) {
    tr.s.push_back(compose(power(n), b.s[n]));
    tr.p.push_back(compose(power(n), b.p[n]));
  }
  return tr;
}

}  // namespace mksys
