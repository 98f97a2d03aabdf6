#include "mksys/laws/suites.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <thread>

#include "mksys/core/circuit.hpp"

namespace mksys {

namespace {

struct CaseOutcome {
  bool ok = true;
  std::size_t checks = 0;
  std::string detail;
  Json witness;  // model-file sections describing the failing case
};

// Records one law; the first failure keeps its detail.
struct Tally {
  CaseOutcome out;
  bool check(bool cond, const std::string& what) {
    ++out.checks;
    if (!cond && out.ok) {
      out.ok = false;
      out.detail = what;
    }
    return cond;
  }
};

using CaseFn = std::function<CaseOutcome(Rng&, std::size_t index, const LawSuiteConfig&)>;

std::vector<std::size_t> iota(std::size_t first, std::size_t count) {
  std::vector<std::size_t> v(count);
  for (std::size_t k = 0; k < count; ++k) v[k] = first + k;
  return v;
}

std::vector<std::size_t> cat(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::size_t size_or(const LawSuiteConfig& cfg, std::size_t dflt) { return cfg.max_size ? cfg.max_size : dflt; }

Json kernels(std::initializer_list<std::pair<const char*, const Morphism*>> ks) {
  Json j = Json::object();
  for (const auto& [name, k] : ks) j["kernels"][name] = morphism_to_json(*k);
  return j;
}

// ---- markov core ----------------------------------------------------------

CaseOutcome category_case(Rng& rng, std::size_t, const LawSuiteConfig& cfg) {
  const auto m = size_or(cfg, 4);
  const auto A = random_object(rng, 1, m), B = random_object(rng, 1, m), C = random_object(rng, 1, m),
             D = random_object(rng, 1, m);
  const bool poss = rng.chance(1, 3);
  auto k = [&](const FiniteObject& x, const FiniteObject& y) {
    return poss ? random_possibilistic(rng, x, y) : random_stochastic(rng, x, y);
  };
  const auto f = k(A, B), g = k(B, C), h = k(C, D), f2 = k(C, D);
  Tally t;
  t.check(compose(compose(f, g), h) == compose(f, compose(g, h)), "compose associative");
  t.check(compose(identity(A), f) == f && compose(f, identity(B)) == f, "identity is a unit");
  t.check(tensor(compose(f, g), compose(h, identity(D))) == compose(tensor(f, h), tensor(g, identity(D))),
          "tensor functorial");
  t.check(compose(swap(A, C), tensor(f2, f)) == compose(tensor(f, f2), swap(B, D)), "swap natural");
  t.check(compose(swap(A, B), swap(B, A)) == identity(A * B), "swap involutive");
  t.check(compose(copy(A), tensor(copy(A), identity(A))) == compose(copy(A), tensor(identity(A), copy(A))),
          "copy coassociative");
  t.check(compose(copy(A), swap(A, A)) == copy(A), "copy cocommutative");
  t.check(compose(copy(A), tensor(discard(A), identity(A))) == identity(A), "discard counital");
  t.check(compose(f, discard(B)) == discard(A), "discard natural");
  const auto d1 = random_function(rng, A, B), d2 = random_function(rng, B, C);
  t.check(is_deterministic(compose(d1, d2)) && is_deterministic(tensor(d1, d2)), "determinism closed");
  if (!t.out.ok) t.out.witness = kernels({{"f", &f}, {"g", &g}, {"h", &h}, {"f2", &f2}});
  return t.out;
}

CaseOutcome conditional_case(Rng& rng, std::size_t index, const LawSuiteConfig& cfg) {
  const auto m = size_or(cfg, 4);
  const auto A = random_object(rng, 1, m, "a"), X = random_object(rng, 1, m, "x"), Y = random_object(rng, 1, m, "y");
  const bool poss = index % 4 == 3;
  const auto phi = poss ? random_possibilistic(rng, A, X * Y) : random_stochastic(rng, A, X * Y);
  const auto mx = marginal_range(phi, 0, X.rank());
  Tally t;
  t.check(reconstruct(mx, conditional(phi, X.rank(), ZeroMass::Uniform)) == phi, "reconstruction (uniform fill)");
  t.check(reconstruct(mx, conditional(phi, X.rank(), ZeroMass::FirstPoint)) == phi,
          "reconstruction (first-point fill)");
  if (!t.out.ok) t.out.witness = kernels({{"phi", &phi}});
  return t.out;
}

CaseOutcome conditional_product_case(Rng& rng, std::size_t index, const LawSuiteConfig& cfg) {
  const auto m = size_or(cfg, 3);
  const auto A = random_object(rng, 1, m, "a"), X = random_object(rng, 1, m, "x"),
             Y = random_object(rng, 1, m, "y"), Z = random_object(rng, 1, m, "z");
  const bool poss = index % 4 == 3;
  const auto f = poss ? random_possibilistic(rng, A, X * Y) : random_stochastic(rng, A, X * Y);
  const auto cond = poss ? random_possibilistic(rng, A * Y, Z) : random_stochastic(rng, A * Y, Z);
  const auto g = reconstruct(marginal_range(f, X.rank(), Y.rank()), cond);
  const auto h = conditional_product(f, g, Y.rank());
  const auto xr = X.rank(), yr = Y.rank(), zr = Z.rank();
  Tally t;
  t.check(marginal_range(h, 0, xr + yr) == f, "first marginal is f");
  t.check(marginal_range(h, xr, yr + zr) == g, "second marginal is g");
  for (Index a = 0; a < A.size(); ++a)
    t.check(displays_cond_indep(restrict_row(h, a), iota(0, xr), iota(xr, yr), iota(xr + yr, zr)),
            "row " + std::to_string(a) + " displays X independent of Z given Y");
  t.check(conditional_product(f, g, yr, ZeroMass::FirstPoint) == h, "independent of the zero-mass fill");
  if (!t.out.ok) t.out.witness = kernels({{"f", &f}, {"g", &g}});
  return t.out;
}

CaseOutcome semigraphoid_case(Rng& rng, std::size_t index, const LawSuiteConfig& cfg) {
  const auto m = std::max<std::size_t>(2, size_or(cfg, 3));
  // Four atomic factors laid out as x y z w; sizes >= 2 keep positions fixed.
  const auto X = random_object(rng, 2, m, "x"), Y = random_object(rng, 2, m, "y"), Z = random_object(rng, 2, m, "z"),
             W = random_object(rng, 2, m, "w");
  Morphism p;
  const auto kind = index % 3;
  if (kind == 2) {
    p = random_distribution(rng, X * Y * Z * W);
  } else {
    Circuit c({});
    c.apply(random_distribution(rng, Z), {}, {{"z", Z}});
    c.copy("z", "z1");
    c.copy("z", "z2");
    c.apply(random_stochastic(rng, Z, X), {"z1"}, {{"x", X}});
    if (kind == 0) {
      // x ⊥ yw | z
      c.apply(random_stochastic(rng, Z, Y * W), {"z2"}, {{"y", Y}, {"w", W}});
    } else {
      // x ⊥ y | z and x ⊥ w | yz
      c.apply(random_stochastic(rng, Z, Y), {"z2"}, {{"y", Y}});
      c.copy("y", "y1");
      c.copy("z", "z3");
      c.apply(random_stochastic(rng, Y * Z, W), {"y1", "z3"}, {{"w", W}});
    }
    p = c.result({"x", "y", "z", "w"});
  }
  Tally t;
  if (kind == 0) t.check(displays_cond_indep(p, {0}, {2}, {1, 3}), "generated premise x ⊥ yw | z");
  if (kind == 1)
    t.check(displays_cond_indep(p, {0}, {2}, {1}) && displays_cond_indep(p, {0}, {1, 2}, {3}),
            "generated premises x ⊥ y | z and x ⊥ w | yz");
  std::vector<std::size_t> r{0, 1, 2, 3};
  do {
    const std::size_t x = r[0], y = r[1], z = r[2], w = r[3];
    const std::string roles = std::to_string(x) + std::to_string(y) + std::to_string(z) + std::to_string(w);
    auto ci = [&](std::vector<std::size_t> a, std::vector<std::size_t> given, std::vector<std::size_t> b) {
      return displays_cond_indep(p, a, given, b);
    };
    // ci(a, given, b) reads a ⊥ b | given
    t.check(!ci({x}, {z}, {y}) || ci({y}, {z}, {x}), "symmetry, roles " + roles);
    const bool joint = ci({x}, {z}, {y, w});
    t.check(!joint || ci({x}, {z}, {y}), "decomposition, roles " + roles);
    t.check(!joint || ci({x}, {z, w}, {y}), "weak union, roles " + roles);
    t.check(!(ci({x}, {z}, {y}) && ci({x}, {y, z}, {w})) || joint, "contraction, roles " + roles);
  } while (std::next_permutation(r.begin(), r.end()));
  if (!t.out.ok) t.out.witness = kernels({{"p", &p}});
  return t.out;
}

// f = id wherever phi has mass; other rows random.
Morphism identity_on_support(Rng& rng, const Morphism& phi) {
  const auto& X = phi.cod();
  const auto base = random_stochastic(rng, X, X);
  std::vector<Row> rows;
  for (Index x = 0; x < X.size(); ++x)
    rows.push_back(phi.at(0, x) != 0 ? Row{{x, Rational(1)}} : base.row(x));
  return Morphism(X, X, Kind::Stoch, std::move(rows));
}

CaseOutcome as_identity_case(Rng& rng, std::size_t, const LawSuiteConfig& cfg) {
  const auto m = size_or(cfg, 3);
  const auto A = random_object(rng, 1, m, "a"), B = random_object(rng, 1, m, "b"), C = random_object(rng, 1, m, "c");
  const auto phi = random_distribution(rng, A * B);
  const auto psi = reconstruct(marginal_range(phi, A.rank(), B.rank()), random_stochastic(rng, B, C));
  const auto f = identity_on_support(rng, phi), g = identity_on_support(rng, psi);
  const auto h = conditional_product(phi, psi, B.rank());
  Tally t;
  t.check(almost_surely_equal(phi, f, identity(A * B)), "f = id almost surely");
  t.check(almost_surely_equal(psi, g, identity(B * C)), "g = id almost surely");
  t.check(compose(h, tensor(f, identity(C))) == h, "(phi ⊗_B psi) ; (f ⊗ C) = phi ⊗_B psi");
  t.check(compose(h, tensor(identity(A), g)) == h, "(phi ⊗_B psi) ; (A ⊗ g) = phi ⊗_B psi");
  if (!t.out.ok) t.out.witness = kernels({{"phi", &phi}, {"psi", &psi}, {"f", &f}, {"g", &g}});
  return t.out;
}

CaseOutcome det_as_case(Rng& rng, std::size_t, const LawSuiteConfig& cfg) {
  const auto m = size_or(cfg, 3);
  const auto X = random_object(rng, 1, m, "x"), Y = random_object(rng, 1, m, "y"), Z = random_object(rng, 1, m, "z");
  const auto chi = random_distribution(rng, X * Y);
  const auto d = random_function(rng, Y, Z);
  Circuit c({});
  c.apply(chi, {}, {{"x", X}, {"y", Y}});
  c.copy("y", "y'");
  c.apply(d, {"y'"}, {{"z", Z}});
  const auto phi = c.result({"x", "y", "z"});
  Circuit fc({{"y", Y}, {"z", Z}});
  fc.copy("y", "y'");
  fc.apply(d, {"y'"}, {{"d", Z}});
  const auto f = fc.result({"y", "d"});
  const auto yz = marginal_range(phi, X.rank(), Y.rank() + Z.rank());
  Tally t;
  t.check(almost_surely_equal(yz, f, identity(Y * Z)), "f = id almost surely on the yz marginal");
  t.check(compose(phi, tensor(identity(X), f)) == phi, "phi ; (X ⊗ f) = phi");
  if (!t.out.ok) t.out.witness = kernels({{"chi", &chi}, {"d", &d}});
  return t.out;
}

// ---- arenas ---------------------------------------------------------------

DetLens random_lens(Rng& rng, const Interface& src, const Interface& dst) {
  return make_lens(src, dst, random_function(rng, src.c, dst.c), random_function(rng, src.c * dst.a, src.a));
}

CaseOutcome lens_assoc_case(Rng& rng, std::size_t, const LawSuiteConfig& cfg) {
  const auto m = size_or(cfg, 3);
  const auto i1 = random_interface(rng, 1, m), i2 = random_interface(rng, 1, m), i3 = random_interface(rng, 1, m),
             i4 = random_interface(rng, 1, m);
  const auto l1 = random_lens(rng, i1, i2), l2 = random_lens(rng, i2, i3), l3 = random_lens(rng, i3, i4);
  const auto top = std::min<std::size_t>(2, m);
  const auto x1 = random_chart(rng, i1, i2, random_interface(rng, 1, top));
  const auto x2 = random_chart(rng, i2, i3, random_interface(rng, 1, top));
  const auto x3 = random_chart(rng, i3, i4, random_interface(rng, 1, top));
  Tally t;
  t.check(lens_compose(lens_compose(l1, l2), l3) == lens_compose(l1, lens_compose(l2, l3)), "lens associativity");
  t.check(lens_compose(lens_identity(i1), l1) == l1 && lens_compose(l1, lens_identity(i2)) == l1, "lens identity");
  t.check(chart_compose(chart_compose(x1, x2), x3) == chart_compose(x1, chart_compose(x2, x3)),
          "chart associativity");
  if (!t.out.ok) {
    t.out.witness["lenses"] = {{"l1", lens_to_json(l1)}, {"l2", lens_to_json(l2)}, {"l3", lens_to_json(l3)}};
    t.out.witness["charts"] = {{"x1", chart_to_json(x1)}, {"x2", chart_to_json(x2)}, {"x3", chart_to_json(x3)}};
  }
  return t.out;
}

CaseOutcome interchange_case(Rng& rng, std::size_t, const LawSuiteConfig& cfg) {
  const auto m = size_or(cfg, 2);
  const auto a = random_arena_grid(rng, m);
  const auto s = random_sys_grid(rng, m);
  Tally t;
  t.check(xy_compose_y(xy_compose_x(a.s, a.t), xy_compose_x(a.u, a.v)) ==
              xy_compose_x(xy_compose_y(a.s, a.u), xy_compose_y(a.t, a.v)),
          "arena interchange");
  t.check(sys_xy_compose_y(sys_xy_compose_x(s.s, s.t), xy_compose_x(s.u, s.v)) ==
              sys_xy_compose_x(sys_xy_compose_y(s.s, s.u), sys_xy_compose_y(s.t, s.v)),
          "system interchange");
  if (!t.out.ok) {
    t.out.witness["squares"] = {{"s", xy_to_json(a.s)}, {"t", xy_to_json(a.t)}, {"u", xy_to_json(a.u)},
                                {"v", xy_to_json(a.v)}, {"su", xy_to_json(s.u)}, {"sv", xy_to_json(s.v)}};
    t.out.witness["sys_squares"] = {{"ss", sys_xy_to_json(s.s)}, {"st", sys_xy_to_json(s.t)}};
  }
  return t.out;
}

CaseOutcome y_assoc_case(Rng& rng, std::size_t, const LawSuiteConfig& cfg) {
  const auto m = size_or(cfg, 2);
  const auto [a, b, c] = random_y_column(rng, m);
  const auto col = random_sys_column(rng, m);
  Tally t;
  t.check(xy_compose_y(xy_compose_y(a, b), c) == xy_compose_y(a, xy_compose_y(b, c)), "arena y-associativity");
  t.check(xy_regeneration_holds(a, b), "arena regeneration");
  t.check(sys_xy_compose_y(sys_xy_compose_y(col.s, col.t), col.u) ==
              sys_xy_compose_y(col.s, xy_compose_y(col.t, col.u)),
          "system y-associativity");
  t.check(sys_regeneration_holds(col.s, col.t), "system regeneration");
  if (!t.out.ok) {
    t.out.witness["squares"] = {{"a", xy_to_json(a)}, {"b", xy_to_json(b)}, {"c", xy_to_json(c)},
                                {"t", xy_to_json(col.t)}, {"u", xy_to_json(col.u)}};
    t.out.witness["sys_squares"] = {{"s", sys_xy_to_json(col.s)}};
  }
  return t.out;
}

CaseOutcome nabla_case(Rng& rng, std::size_t, const LawSuiteConfig& cfg) {
  const auto inst = random_nabla_instance(rng, size_or(cfg, 3));
  const auto n = nabla(inst.s1, inst.s2, inst.g012);
  const auto [p1, p2] = projection_squares(inst.s1.right, inst.s2.right);
  Tally t;
  t.check(static_cast<bool>(validate_sys_xy(n)), "tensor behavior is a valid square");
  t.check(strip_residual(sys_xy_compose_x(n, p1)) == inst.s1, "first projection recovers s1");
  t.check(strip_residual(sys_xy_compose_x(n, p2)) == inst.s2, "second projection recovers s2");
  if (!t.out.ok) {
    t.out.witness["sys_squares"] = {{"s1", sys_xy_to_json(inst.s1)}, {"s2", sys_xy_to_json(inst.s2)}};
    t.out.witness["charts"] = {{"g012", chart_to_json(inst.g012)}};
  }
  return t.out;
}

// ---- time -----------------------------------------------------------------

Json system_witness(const OpenSystem& o, std::size_t horizon) {
  Json sys = {{"kind", "open_markov"},       {"state", object_to_json(o.S)},
              {"input", object_to_json(o.I)}, {"output", object_to_json(o.O)},
              {"expose", "expose"},           {"update", "update"},
              {"initial", "initial"},         {"horizon", horizon}};
  Json j = kernels({{"expose", &o.expose}, {"update", &o.update}, {"initial", &o.initial}});
  if (!o.I.is_unit()) {
    j["kernels"]["step"] = morphism_to_json(o.step);
    j["policies"]["policy"] = {{"kind", "markov"}, {"step", "step"}};
    sys["policy"] = "policy";
  }
  j["systems"]["system"] = sys;
  return j;
}

CaseOutcome trajectory_case(Rng& rng, std::size_t, const LawSuiteConfig& cfg) {
  const auto T = rng.between(1, std::max<std::size_t>(1, cfg.max_horizon));
  const auto o = random_open_system(rng, size_or(cfg, 3), T);
  const auto traj = unroll_trajectory(o.sys, o.initial, o.policy);
  Tally t;
  t.check(static_cast<bool>(validate_trajectory(o.sys, traj)), "unrolled trajectory is valid");
  for (std::size_t n = 0; n <= T; ++n) {
    const auto want = enumerate_phi(o, n);
    bool same = traj.phi[n].cod().size() == want.size();
    for (Index k = 0; same && k < want.size(); ++k) same = traj.phi[n].at(0, k) == want[k];
    t.check(same, "phi^" + std::to_string(n) + " matches path enumeration");
  }
  if (!t.out.ok) t.out.witness = system_witness(o, T);
  return t.out;
}

CaseOutcome coherence_case(Rng& rng, std::size_t, const LawSuiteConfig& cfg) {
  const auto T = rng.between(1, std::max<std::size_t>(1, cfg.max_horizon));
  const auto o = random_open_system(rng, size_or(cfg, 3), T);
  const auto traj = unroll_trajectory(o.sys, o.initial, o.policy);
  Tally t;
  const auto rep = check_time_coherence(o.sys, traj);
  t.check(rep.ok(), "unrolled trajectory fails coherence at edge " +
                        std::to_string(rep.first_failure().value_or(0)));
  if (!t.out.ok) t.out.witness = system_witness(o, T);
  return t.out;
}

CaseOutcome factorization_case(Rng& rng, std::size_t, const LawSuiteConfig& cfg) {
  const auto T = rng.between(1, std::max<std::size_t>(1, std::min<std::size_t>(cfg.max_horizon, 3)));
  const auto c = random_lifted_composite(rng, size_or(cfg, 2), T);
  const auto rep = factorization_check(c.lifted, c.sys, c.wiring);
  Tally t;
  for (std::size_t n = 0; n < rep.edges.size(); ++n) {
    const auto& e = rep.edges[n];
    const auto at = " at edge " + std::to_string(n);
    t.check(e.t_valid && e.t12_valid, "t or t12 is not a valid square" + at);
    t.check(e.generated && e.independent, "hypotheses do not hold" + at + ": " + e.detail);
    t.check(e.equal, "t' differs from t/t12" + at);
  }
  t.check(rep.ok(), "factorization report");
  t.check(check_time_coherence(compose_system_with_lens(c.sys, c.wiring), c.lifted).ok(),
          "lifted composite is coherent");
  return t.out;
}

// ---- knight ---------------------------------------------------------------

CaseOutcome uniformize_case(Rng& rng, std::size_t index, const LawSuiteConfig& cfg) {
  const auto m = size_or(cfg, 4);
  const auto A = random_object(rng, 1, m, "a"), X = random_object(rng, 1, m, "x");
  const bool det = index % 4 == 3;
  const auto f = det ? random_function(rng, A, X) : random_stochastic(rng, A, X);
  const auto p = uniformize(f);
  Tally t;
  t.check(static_cast<bool>(validate_partition(p)), "partition is valid");
  t.check(to_kernel(p) == f, "interval lengths reproduce every row");
  const auto up = uniform_parameter(p);
  t.check(compose(tensor(identity(A), up.lambda), up.g) == f, "(id ⊗ lambda) ; G = f");
  t.check(is_deterministic(up.g), "G is deterministic");
  for (Index a = 0; a < A.size(); ++a) {
    Rational acc = 0;
    for (Index x = 0; x < X.size(); ++x) {
      acc += f.at(a, x);
      t.check(cumulative(p, a, x) == acc, "cumulative sum of row " + std::to_string(a));
    }
  }
  if (det) t.check(as_function(p).has_value() && *as_function(p) == f, "deterministic round trip");
  if (!t.out.ok) t.out.witness = kernels({{"f", &f}});
  return t.out;
}

CaseOutcome knight_case(Rng& rng, std::size_t, const LawSuiteConfig& cfg) {
  const auto T = rng.between(1, std::max<std::size_t>(1, std::min<std::size_t>(cfg.max_horizon, 3)));
  const auto o = random_open_system(rng, size_or(cfg, 2), T);
  const auto up = uniform_parameter(uniformize(o.update));
  const auto k = make_knight_system(o.S, o.I, o.O, o.expose, up.g, up.omega, T);
  const auto direct = unroll_trajectory(o.sys, o.initial, o.policy);
  Tally t;
  t.check(static_cast<bool>(validate_knight(k)), "knight system is valid");
  t.check(mix_behavior(knight_unroll(k, o.initial, o.policy), up.lambda) == direct,
          "mixed knight behavior equals the stochastic trajectory");
  t.check(unroll_trajectory(randomize(k, up.lambda), o.initial, o.policy) == direct,
          "randomized system unrolls to the stochastic trajectory");
  if (!t.out.ok) t.out.witness = system_witness(o, T);
  return t.out;
}

// ---- mealy ----------------------------------------------------------------

// Bijections from the state of (f⊗h);(g⊗k) to that of (f;g)⊗(h;k).
std::vector<Morphism> middle_swap(const GMealy& f, const GMealy& g, const GMealy& h, const GMealy& k,
                                  const IndexedObject& S) {
  std::vector<Morphism> iso;
  for (std::size_t n = 0; n <= f.horizon(); ++n) {
    const auto rf = f.S.at[n].rank(), rg = g.S.at[n].rank(), rh = h.S.at[n].rank(), rk = k.S.at[n].rank();
    // source layout: f h g k
    const auto pos = cat(cat(iota(0, rf), iota(rf + rh, rg)), cat(iota(rf, rh), iota(rf + rh + rg, rk)));
    iso.push_back(wire(S.at[n], pos));
  }
  return iso;
}

bool interchange_holds(const GMealy& f, const GMealy& g, const GMealy& h, const GMealy& k, const GMealy& lhs) {
  const auto rhs = mealy_compose(mealy_tensor(f, h), mealy_tensor(g, k));
  return mealy_transport(rhs, lhs.S, middle_swap(f, g, h, k, rhs.S)) == lhs;
}

CaseOutcome mealy_case(Rng& rng, std::size_t, const LawSuiteConfig& cfg) {
  const auto T = rng.between(1, std::max<std::size_t>(1, std::min<std::size_t>(cfg.max_horizon, 3)));
  const auto A = IndexedObject::constant(FiniteObject::range(2, "a"), T, "a");
  const auto m = size_or(cfg, 2);
  const auto f = random_history_mealy(rng, A, A, m), g = random_history_mealy(rng, A, A, m),
             h = random_history_mealy(rng, A, A, m), k = random_history_mealy(rng, A, A, m);
  Tally t;
  for (const auto* x : {&f, &g, &h, &k}) t.check(static_cast<bool>(validate_mealy(*x)), "generated machine is valid");
  t.check(mealy_compose(mealy_compose(f, g), h) == mealy_compose(f, mealy_compose(g, h)), "associativity");
  t.check(mealy_compose(mealy_identity(A), f) == f && mealy_compose(f, mealy_identity(A)) == f, "identity");
  t.check(interchange_holds(f, g, h, k, mealy_tensor(mealy_compose(f, g), mealy_compose(h, k))), "interchange");

  // Time-invariant parametric machines on constant objects; the state is
  // frozen by the projection condition, the output reads (a, ω, s).
  auto para = [&] {
    const auto Om = IndexedObject::constant(random_object(rng, 1, m, "w"), T, "w");
    const auto St = IndexedObject::constant(random_object(rng, 1, m, "s"), T, "s");
    const auto& X = A.at[0];
    Circuit c({{"a", X}, {"w", Om.at[0]}, {"s", St.at[0]}});
    c.copy("s", "s'");
    c.apply(random_stochastic(rng, X * Om.at[0] * St.at[0], X), {"a", "w", "s'"}, {{"b", X}});
    return GParaMealy{A, A, St, Om, std::vector<Morphism>(T, c.result({"b", "s"}))};
  };
  const auto p1 = para(), p2 = para();
  t.check(validate_para_mealy(p1) && validate_para_mealy(p2), "generated parametric machines are valid");
  t.check(static_cast<bool>(validate_para_mealy(para_mealy_compose(p1, p2))), "parametric composite is valid");
  t.check(static_cast<bool>(validate_para_mealy(para_mealy_tensor(p1, p2))), "parametric tensor is valid");

  // Moore systems under a feedback-free wiring are the sandwiched machine.
  const auto c = random_lifted_composite(rng, m, T);
  const auto [back, fwd] = feedback_free_wiring(c.sys, c.wiring);
  t.check(moore_to_mealy(compose_system_with_lens(c.sys, c.wiring)) ==
              mealy_compose(mealy_compose(back, moore_to_mealy(c.sys)), fwd),
          "wired Moore system equals the composite machine");
  if (!t.out.ok) t.out.witness["mealy"] = {{"f", mealy_to_json(f)}, {"g", mealy_to_json(g)},
                                           {"h", mealy_to_json(h)}, {"k", mealy_to_json(k)}};
  return t.out;
}

bool same_wiring(const SystemWiring& a, const SystemWiring& b) {
  return same_indexed(a.I2, b.I2) && same_indexed(a.O2, b.O2) && a.lens == b.lens && a.last_f == b.last_f;
}

bool same_system(const GSystem& a, const GSystem& b) {
  return same_indexed(a.S, b.S) && same_indexed(a.I, b.I) && same_indexed(a.O, b.O) && a.expose == b.expose &&
         a.update == b.update;
}

CaseOutcome wiring_case(Rng& rng, std::size_t, const LawSuiteConfig& cfg) {
  const auto T = rng.between(1, std::max<std::size_t>(1, cfg.max_horizon));
  const auto m = size_or(cfg, 3);
  const auto o = random_open_system(rng, m, T);
  Interface cur{o.I, o.O};
  std::vector<SystemWiring> ws;
  for (int i = 0; i < 3; ++i) {
    const Interface next = random_interface(rng, 1, m);
    ws.push_back(lift_lens(random_lens(rng, cur, next), T));
    cur = next;
  }
  Tally t;
  t.check(static_cast<bool>(validate_wiring(o.sys, ws[0])), "lifted lens is a valid wiring");
  t.check(same_wiring(compose_wirings(compose_wirings(ws[0], ws[1]), ws[2]),
                      compose_wirings(ws[0], compose_wirings(ws[1], ws[2]))),
          "wiring associativity");
  t.check(same_wiring(compose_wirings(identity_wiring(o.sys), ws[0]), ws[0]), "identity wiring");
  t.check(same_system(compose_system_with_lens(o.sys, identity_wiring(o.sys)), o.sys), "identity wiring is inert");
  t.check(same_system(compose_system_with_lens(compose_system_with_lens(o.sys, ws[0]), ws[1]),
                      compose_system_with_lens(o.sys, compose_wirings(ws[0], ws[1]))),
          "wiring in stages equals wiring by the composite");
  if (!t.out.ok) t.out.witness = system_witness(o, T);
  return t.out;
}

struct SuiteDef {
  const char* name;
  CaseFn fn;
};

const std::vector<SuiteDef>& registry() {
  static const std::vector<SuiteDef> defs{
      {"category", category_case},
      {"conditional", conditional_case},
      {"conditional-product", conditional_product_case},
      {"semigraphoid", semigraphoid_case},
      {"as-identity", as_identity_case},
      {"det-as", det_as_case},
      {"lens-assoc", lens_assoc_case},
      {"interchange", interchange_case},
      {"y-assoc", y_assoc_case},
      {"nabla", nabla_case},
      {"trajectory", trajectory_case},
      {"coherence", coherence_case},
      {"factorization", factorization_case},
      {"uniformize", uniformize_case},
      {"knight", knight_case},
      {"mealy", mealy_case},
      {"wiring", wiring_case},
  };
  return defs;
}

// Runs fn(0..n-1) on a pool; results land by index, so output order is fixed.
std::vector<CaseOutcome> run_pool(std::size_t n, unsigned threads, const std::function<CaseOutcome(std::size_t)>& fn) {
  std::vector<CaseOutcome> out(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        out[i] = fn(i);
      } catch (const std::exception& e) {
        out[i] = {false, 1, std::string("exception: ") + e.what(), {}};
      }
    }
  };
  unsigned k = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  k = static_cast<unsigned>(std::min<std::size_t>(k, n));
  if (k <= 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < k; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& d : registry()) v.push_back(d.name);
    return v;
  }();
  return names;
}

SuiteResult run_suite(const LawSuiteConfig& cfg) {
  const auto& defs = registry();
  const auto it = std::find_if(defs.begin(), defs.end(), [&](const SuiteDef& d) { return cfg.suite == d.name; });
  if (it == defs.end()) throw UnknownSuite("unknown suite '" + cfg.suite + "'");
  SuiteResult r;
  r.suite = cfg.suite;
  r.cases = cfg.cases;
  if (cfg.cases == 0) {
    r.notes.push_back("zero cases requested; nothing was checked");
    return r;
  }
  const auto outcomes = run_pool(cfg.cases, cfg.threads, [&](std::size_t i) {
    Rng rng(Rng::derive(cfg.seed, i));
    return it->fn(rng, i, cfg);
  });
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    r.checks += o.checks;
    if (o.ok) {
      ++r.passed;
    } else if (!r.first_failure) {
      r.first_failure = i;
      r.detail = o.detail;
      r.counterexample = o.witness.is_null() ? Json::object() : o.witness;
      r.counterexample["schema_version"] = 1;
      r.counterexample["replay"] = {{"suite", cfg.suite}, {"seed", cfg.seed}, {"case", i}};
    }
  }

  // Whole-family sweeps ride along as one extra case.
  auto sweep = [&](const ExhaustiveResult& e, const std::string& what) {
    ++r.cases;
    r.checks += e.checked;
    r.notes.push_back(what + ": " + std::to_string(e.checked) + " checks, " + std::to_string(e.failures) +
                      " failures");
    if (e.ok()) {
      ++r.passed;
    } else if (!r.first_failure) {
      r.first_failure = r.cases - 1;
      r.detail = e.detail;
      r.counterexample = {{"schema_version", 1}, {"replay", {{"suite", cfg.suite}, {"exhaustive", what}}}};
    }
  };
  if (cfg.suite == "lens-assoc") sweep(exhaustive_lens_associativity(), "exhaustive 2-element lenses");
  if (cfg.suite == "mealy") sweep(exhaustive_mealy_laws(), "exhaustive 2-element machines");
  if (cfg.suite == "coherence") {
    const auto s = search_coherence_counterexamples();
    r.notes.push_back("lifted-composite search: " + std::to_string(s.instances) + " instances, " +
                      std::to_string(s.failures) + " incoherent");
  }
  return r;
}

Json suite_result_to_json(const SuiteResult& r) {
  Json j = {{"suite", r.suite}, {"cases", r.cases}, {"passed", r.passed}, {"checks", r.checks},
            {"ok", r.ok()},     {"notes", r.notes}};
  if (r.first_failure) {
    j["first_failure"] = *r.first_failure;
    j["detail"] = r.detail;
    j["counterexample"] = r.counterexample;
  }
  return j;
}

ExhaustiveResult exhaustive_lens_associativity() {
  const auto X = FiniteObject::range(2, "x");
  const Interface I{X, X};
  // Lens code: f table in bits 0-1, f♯ table over (c, a) in bits 2-5.
  std::vector<DetLens> all;
  for (unsigned code = 0; code < 64; ++code) {
    std::vector<Index> f{code & 1u, (code >> 1) & 1u}, fs(4);
    for (unsigned k = 0; k < 4; ++k) fs[k] = (code >> (2 + k)) & 1u;
    all.push_back(make_lens(I, I, Morphism::function(X, X, f), Morphism::function(X * X, X, fs)));
  }
  auto code_of = [](const DetLens& l) {
    auto c = static_cast<unsigned>(l.f.image(0) | (l.f.image(1) << 1));
    for (unsigned k = 0; k < 4; ++k) c |= static_cast<unsigned>(l.fsharp.image(k)) << (2 + k);
    return c;
  };
  ExhaustiveResult r;
  auto note = [&](bool ok, const std::string& what) {
    ++r.checked;
    if (!ok && r.failures++ == 0) r.detail = what;
  };
  std::vector<unsigned> table(64 * 64);
  for (unsigned a = 0; a < 64; ++a) {
    for (unsigned b = 0; b < 64; ++b) {
      const auto c = lens_compose(all[a], all[b]);
      note(static_cast<bool>(validate_lens(c)) && c.src == I && c.dst == I,
           "composite of lenses " + std::to_string(a) + ", " + std::to_string(b) + " is not a lens on I");
      table[a * 64 + b] = code_of(c);
    }
    note(lens_compose(lens_identity(I), all[a]) == all[a] && lens_compose(all[a], lens_identity(I)) == all[a],
         "identity fails on lens " + std::to_string(a));
  }
  for (unsigned a = 0; a < 64; ++a)
    for (unsigned b = 0; b < 64; ++b)
      for (unsigned c = 0; c < 64; ++c)
        note(table[table[a * 64 + b] * 64 + c] == table[a * 64 + table[b * 64 + c]],
             "associativity fails on lenses " + std::to_string(a) + ", " + std::to_string(b) + ", " +
                 std::to_string(c));
  return r;
}

ExhaustiveResult exhaustive_mealy_laws() {
  constexpr std::size_t T = 2;
  const auto X = FiniteObject::range(2, "x");
  const auto A = IndexedObject::constant(X, T, "a");
  const auto S = IndexedObject::constant(X, T, "s");
  // Machine h: (a, s) -> (h(a, s), s) with h read from the bits of the code.
  std::vector<GMealy> all;
  for (unsigned h = 0; h < 16; ++h) {
    std::vector<Index> map(4);
    for (Index a = 0; a < 2; ++a)
      for (Index s = 0; s < 2; ++s) map[a * 2 + s] = ((h >> (a * 2 + s)) & 1u) * 2 + s;
    const auto step = Morphism::function(X * X, X * X, map);
    all.push_back({A, A, S, {step, step}});
  }
  ExhaustiveResult r;
  auto note = [&](bool ok, const std::string& what) {
    ++r.checked;
    if (!ok && r.failures++ == 0) r.detail = what;
  };
  for (const auto& m : all) note(static_cast<bool>(validate_mealy(m)), "a generated machine is invalid");
  std::vector<GMealy> comp, tens;
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) {
      comp.push_back(mealy_compose(all[i], all[j]));
      tens.push_back(mealy_tensor(all[i], all[j]));
    }
  auto name = [](std::initializer_list<std::size_t> ix) {
    std::string s;
    for (auto i : ix) s += (s.empty() ? "" : ", ") + std::to_string(i);
    return s;
  };
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j)
      for (std::size_t k = 0; k < 16; ++k)
        note(mealy_compose(comp[i * 16 + j], all[k]) == mealy_compose(all[i], comp[j * 16 + k]),
             "associativity fails on machines " + name({i, j, k}));
  // Every state is x^4, so one relabeling serves all quadruples.
  const auto state4 = mealy_compose(tens[0], tens[0]).S;
  const auto iso = middle_swap(all[0], all[0], all[0], all[0], state4);
  for (std::size_t f = 0; f < 16; ++f)
    for (std::size_t g = 0; g < 16; ++g)
      for (std::size_t h = 0; h < 16; ++h)
        for (std::size_t k = 0; k < 16; ++k) {
          const auto lhs = mealy_tensor(comp[f * 16 + g], comp[h * 16 + k]);
          const auto rhs = mealy_compose(tens[f * 16 + h], tens[g * 16 + k]);
          note(mealy_transport(rhs, lhs.S, iso) == lhs,
               "interchange fails on machines " + name({f, g, h, k}));
        }
  return r;
}

namespace {

// n -> X for n >= first, unit before.
IndexedObject switch_on(const FiniteObject& X, std::size_t first, std::size_t T, const std::string& name) {
  IndexedObject o;
  for (std::size_t n = 0; n <= T; ++n) o.at.push_back(n >= first ? X : FiniteObject::unit());
  for (std::size_t n = 0; n < T; ++n)
    o.restrict.push_back(n >= first ? identity(X) : discard(o.at[n + 1]));
  for (std::size_t n = 0; n <= T; ++n)
    o.coords.push_back(o.at[n].is_unit() ? std::vector<std::string>{} : std::vector<std::string>{name});
  return o;
}

// Every function dom -> cod, in lexicographic order of their tables.
std::vector<Morphism> all_functions(const FiniteObject& dom, const FiniteObject& cod) {
  std::vector<Morphism> out;
  std::vector<Index> map(dom.size(), 0);
  while (true) {
    out.push_back(Morphism::function(dom, cod, map));
    std::size_t k = 0;
    while (k < map.size() && ++map[k] == cod.size()) map[k++] = 0;
    if (k == map.size()) return out;
  }
}

enum class Pick { Uniform, First, Last, Follow, Against };

// O⊗I1 -> X: a law on the fibre of w♯(o, -) over i1, chosen by rule.
Morphism coupling(const Morphism& fsharp, const FiniteObject& O, const FiniteObject& I1, const FiniteObject& X,
                  Pick rule) {
  std::vector<Row> rows;
  for (Index o = 0; o < O.size(); ++o)
    for (Index i = 0; i < I1.size(); ++i) {
      std::vector<Index> fibre;
      for (Index j = 0; j < X.size(); ++j)
        if (fsharp.image(o * X.size() + j) == i) fibre.push_back(j);
      if (fibre.empty())
        for (Index j = 0; j < X.size(); ++j) fibre.push_back(j);
      auto has = [&](Index j) { return std::find(fibre.begin(), fibre.end(), j) != fibre.end(); };
      Row row;
      switch (rule) {
        case Pick::Uniform:
          for (auto j : fibre) row.push_back({j, Rational(1, fibre.size())});
          break;
        case Pick::First: row.push_back({fibre.front(), 1}); break;
        case Pick::Last: row.push_back({fibre.back(), 1}); break;
        case Pick::Follow: row.push_back({has(o) ? o : fibre.front(), 1}); break;
        case Pick::Against: row.push_back({has(O.size() - 1 - o) ? O.size() - 1 - o : fibre.back(), 1}); break;
      }
      rows.push_back(std::move(row));
    }
  return Morphism(O * I1, X, Kind::Stoch, std::move(rows));
}

const char* pick_name(Pick p) {
  switch (p) {
    case Pick::Uniform: return "uniform";
    case Pick::First: return "first";
    case Pick::Last: return "last";
    case Pick::Follow: return "follow";
    case Pick::Against: return "against";
  }
  return "";
}

}  // namespace

CoherenceSearch search_coherence_counterexamples() {
  constexpr std::size_t T = 2;
  const auto X = FiniteObject::range(2, "x");
  const auto S = IndexedObject::constant(X, T, "s");
  const auto I2 = IndexedObject::constant(X, T, "j");
  const auto O2 = switch_on(X, T + 1, T, "p");
  const auto initial = Morphism::distribution(X, {Rational(1, 2), Rational(1, 2)});
  const std::vector<Pick> picks{Pick::Uniform, Pick::First, Pick::Last, Pick::Follow, Pick::Against};
  CoherenceSearch out;

  for (std::size_t ko = 0; ko <= T + 1; ++ko)
    for (std::size_t ki = 1; ki <= T + 1; ++ki) {
      const auto O1 = switch_on(X, ko, T, "o"), I1 = switch_on(X, ki, T, "i");
      // Some, but not all, of I1(n+1) and O1(n) along the edges are units.
      std::size_t units = 0;
      for (std::size_t n = 0; n < T; ++n) units += I1.at[n + 1].is_unit() + O1.at[n].is_unit();
      if (units == 0 || units == 2 * T) continue;

      GSystem sys{S, I1, O1, {}, {}};
      InputPolicy policy;
      for (std::size_t n = 0; n <= T; ++n) sys.expose.push_back(O1.at[n].is_unit() ? discard(X) : identity(X));
      for (std::size_t n = 0; n < T; ++n) {
        sys.update.push_back(wire(X * I1.at[n + 1], {0}));
        const auto dom = O1.at[n] * I1.at[n];
        if (I1.at[n + 1].is_unit())
          policy.push_back(discard(dom));
        else if (!I1.at[n].is_unit())
          policy.push_back(wire(dom, {O1.at[n].rank()}));
        else
          policy.push_back(compose(discard(dom), Morphism::distribution(X, {Rational(1, 2), Rational(1, 2)})));
      }
      GTrajectory traj;
      try {
        traj = unroll_trajectory(sys, initial, policy);
      } catch (const Error&) {
        continue;
      }

      std::vector<std::vector<Morphism>> sharps;
      for (std::size_t n = 0; n < T; ++n) sharps.push_back(all_functions(O1.at[n] * X, I1.at[n + 1]));
      for (const auto& f0 : sharps[0])
        for (const auto& f1 : sharps[1]) {
          SystemWiring w{I2, O2, {}, discard(O1.at[T])};
          const Morphism* fs[] = {&f0, &f1};
          for (std::size_t n = 0; n < T; ++n)
            w.lens.push_back(make_lens(sys.interface(n), {X, FiniteObject::unit()}, discard(O1.at[n]), *fs[n]));
          for (auto p0 : picks)
            for (auto p1 : picks) {
              const Pick ps[] = {p0, p1};
              std::vector<Morphism> choice;
              for (std::size_t n = 0; n < T; ++n) choice.push_back(coupling(*fs[n], O1.at[n], I1.at[n + 1], X, ps[n]));
              GSystem outer;
              GTrajectory lifted;
              try {
                outer = compose_system_with_lens(sys, w);
                lifted = lift_trajectory(sys, traj, w, wiring_cells(sys, traj, w, choice));
              } catch (const Error&) {
                continue;
              }
              ++out.instances;
              const auto rep = check_time_coherence(outer, lifted);
              if (rep.ok()) continue;
              if (out.failures++ > 0) continue;
              Json sysj = system_to_json(sys);
              sysj["initial"] = morphism_to_json(initial);
              sysj["policy"] = policy_to_json(policy);
              Json wj = wiring_to_json(w), rules = Json::array();
              for (const auto& k : choice) wj["couplings"].push_back(morphism_to_json(k));
              for (std::size_t n = 0; n < T; ++n) rules.push_back(pick_name(ps[n]));
              out.first_failure = {{"schema_version", 1},
                                   {"systems", {{"inner", sysj}}},
                                   {"wirings", {{"wiring", wj}}},
                                   {"notes", {{"couplings", rules},
                                              {"failing_edge", *rep.first_failure()}}}};
            }
        }
    }
  return out;
}

std::vector<Rational> enumerate_phi(const OpenSystem& o, std::size_t n) {
  const auto ns = o.S.size(), ni = o.I.size();
  std::size_t states = 1, inputs = 1;
  for (std::size_t k = 0; k <= n; ++k) states *= ns;
  for (std::size_t k = 0; k < n; ++k) inputs *= ni;
  std::vector<Rational> out(states);
  std::vector<Index> s(n + 1), in(n);
  for (std::size_t sp = 0; sp < states; ++sp) {
    for (std::size_t k = 0, r = sp; k <= n; ++k, r /= ns) s[n - k] = r % ns;
    for (std::size_t ip = 0; ip < inputs; ++ip) {
      for (std::size_t k = 0, r = ip; k < n; ++k, r /= ni) in[n - 1 - k] = r % ni;
      Rational w = o.initial.at(0, s[0]);
      for (std::size_t k = 0; k < n && w != 0; ++k) {
        if (!o.I.is_unit()) w *= o.step.at(o.expose.image(s[k]), in[k]);
        w *= o.update.at(s[k] * ni + in[k], s[k + 1]);
      }
      out[sp] += w;
    }
  }
  return out;
}

}  // namespace mksys
