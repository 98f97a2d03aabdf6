#include "mksys/time/system.hpp"

#include <numeric>

#include "mksys/core/circuit.hpp"

namespace mksys {

namespace {

std::string at_edge(std::size_t n) { return " at edge " + std::to_string(n); }

Morphism natural_pair(const IndexedObject& a, const IndexedObject& b, std::size_t n) {
  // a(n+1)⊗b(n+2) -> a(n)⊗b(n+1)
  return tensor(a.restrict[n], b.restrict[n + 1]);
}

}  // namespace

SysXYSquare trajectory_square(const GSystem& sys, const GTrajectory& traj, std::size_t n) {
  const auto unit = FiniteObject::unit();
  const auto clock = SystemObject::trivial();
  SysXYSquare sq;
  sq.top = {clock, sys.state_object(n), traj.phi[n + 1], traj.phi[n]};
  sq.left = {clock, Interface::unit(), identity(unit), identity(unit)};
  sq.right = sys.lens(n);
  const auto& p = traj.p[n];
  sq.bottom = {Interface::unit(), sys.interface(n), Interface::unit(), marginal_range(p, 0, sys.O.at[n].rank()), p};
  sq.s = traj.s[n];
  return sq;
}

Check validate_trajectory(const GSystem& sys, const GTrajectory& traj) {
  const auto T = sys.horizon();
  if (traj.phi.size() != T + 1 || traj.s.size() != T || traj.p.size() != T)
    return Check::fail("trajectory shape", "need phi per node and p, s per edge");
  for (std::size_t n = 0; n <= T; ++n)
    if (!traj.phi[n].dom().is_unit() || !(traj.phi[n].cod() == sys.S.at[n]))
      return Check::fail("trajectory shape", "phi" + std::to_string(n));
  for (std::size_t n = 0; n < T; ++n) {
    if (!traj.s[n].dom().is_unit() || !(traj.s[n].cod() == sys.S.at[n] * sys.I.at[n + 1]))
      return Check::fail("trajectory shape", "s" + at_edge(n));
    if (!traj.p[n].dom().is_unit() || !(traj.p[n].cod() == sys.O.at[n] * sys.I.at[n + 1]))
      return Check::fail("trajectory shape", "p" + at_edge(n));
    if (auto c = validate_sys_xy(trajectory_square(sys, traj, n)); !c) return Check::fail(c.law, c.detail + at_edge(n));
  }
  for (std::size_t n = 0; n + 1 < T; ++n)
    if (auto c = same_kernel("p natural", compose(traj.p[n + 1], natural_pair(sys.O, sys.I, n)), traj.p[n]); !c)
      return Check::fail(c.law, c.detail + at_edge(n));
  return Check::pass();
}

InputPolicy markov_policy(const Morphism& step, const FiniteObject& O, const FiniteObject& I, std::size_t horizon) {
  if (!(step.dom() == O) || !(step.cod() == I)) throw ShapeMismatch("policy step must map O to I");
  InputPolicy pol;
  for (std::size_t n = 0; n < horizon; ++n) {
    std::vector<Circuit::Port> in;
    std::vector<std::string> hist;
    for (std::size_t k = 0; k <= n; ++k) in.push_back({"o" + std::to_string(k), O});
    for (std::size_t k = 0; k < n; ++k) {
      in.push_back({"i" + std::to_string(k), I});
      hist.push_back("i" + std::to_string(k));
    }
    Circuit c(in);
    c.apply(step, {"o" + std::to_string(n)}, {{"next", I}});
    hist.push_back("next");
    pol.push_back(c.result(hist));
  }
  return pol;
}

InputPolicy exogenous_policy(const Morphism& dist, const FiniteObject& O, std::size_t horizon) {
  if (!dist.dom().is_unit()) throw ShapeMismatch("exogenous input must be a distribution");
  return markov_policy(compose(discard(O), dist), O, dist.cod(), horizon);
}

GTrajectory unroll_trajectory(const GSystem& sys, const Morphism& initial, const InputPolicy& policy) {
  if (auto c = validate_system(sys); !c) throw ShapeMismatch("invalid system: " + c.law + " " + c.detail);
  const auto T = sys.horizon();
  const bool closed = policy.empty();
  if (closed) {
    for (const auto& i : sys.I.at)
      if (!i.is_unit()) throw ShapeMismatch("closed unrolling needs unit inputs");
  } else if (policy.size() != T) {
    throw ShapeMismatch("need one policy kernel per edge");
  }
  if (!initial.dom().is_unit()) throw ShapeMismatch("initial must be a distribution");
  // rho is the joint law of (state, input history) at the current node.
  Morphism rho = initial;
  if (initial.cod() == sys.S.at[0]) {
    if (!sys.I.at[0].is_unit()) throw ShapeMismatch("initial must also cover I(0)");
  } else if (!(initial.cod() == sys.S.at[0] * sys.I.at[0])) {
    throw ShapeMismatch("initial has codomain " + initial.cod().describe() + ", expected " +
                        sys.S.at[0].describe());
  }

  GTrajectory tr;
  tr.phi.push_back(marginal_range(rho, 0, sys.S.at[0].rank()));
  for (std::size_t n = 0; n < T; ++n) {
    const auto &S = sys.S.at[n], &I = sys.I.at[n], &I1 = sys.I.at[n + 1], &O = sys.O.at[n];
    if (!closed) {
      const auto& pol = policy[n];
      if (!(pol.dom() == O * I) || !(pol.cod() == I1))
        throw ShapeMismatch("policy" + at_edge(n) + " must map " + (O * I).describe() + " to " + I1.describe());
      std::vector<std::size_t> ipos(I.rank());
      std::iota(ipos.begin(), ipos.end(), O.rank());
      if (!(compose(pol, sys.I.restrict[n]) == wire(O * I, ipos)))
        throw NaturalityViolation("policy" + at_edge(n) + " does not extend the input history");
    }
    Circuit c({});
    c.apply(rho, {}, {{"s", S}, {"i", I}});
    if (closed) {
      c.apply(discard(I), {"i"}, {});
      c.apply(identity(FiniteObject::unit()), {}, {{"j", I1}});
    } else {
      c.copy("s", "s_");
      c.apply(sys.expose[n], {"s_"}, {{"o", O}});
      c.apply(policy[n], {"o", "i"}, {{"j", I1}});
    }
    Morphism s = c.result({"s", "j"});
    tr.s.push_back(s);
    tr.p.push_back(compose(s, tensor(sys.expose[n], identity(I1))));
    Circuit u({});
    u.apply(s, {}, {{"s", S}, {"j", I1}});
    u.copy("j", "j_");
    u.apply(sys.update[n], {"s", "j_"}, {{"s", sys.S.at[n + 1]}});
    rho = u.result({"s", "j"});
    tr.phi.push_back(compose(s, sys.update[n]));
  }
  if (auto c = validate_trajectory(sys, tr); !c)
    throw ShapeMismatch("unrolled trajectory is invalid: " + c.law + " " + c.detail);
  return tr;
}

XYSquare wiring_cell(const Chart& top, const DetLens& w, const Morphism& coupling) {
  const auto &O1 = w.src.c, &I1 = w.src.a, &I2 = w.dst.a;
  if (!(top.dst == w.src) || !top.src.a.is_unit() || !top.src.c.is_unit())
    throw BoundaryMismatch("cell top chart must run from the unit to the inner interface");
  if (!(coupling.dom() == O1 * I1) || !(coupling.cod() == I2))
    throw BoundaryMismatch("coupling must map O1⊗I1 to I2");
  Circuit c({});
  c.apply(top.gflat, {}, {{"o", O1}, {"i", I1}});
  c.copy("o", "o_");
  c.apply(coupling, {"o_", "i"}, {{"j", I2}});
  XYSquare sq;
  sq.top = top;
  sq.left = lens_identity(Interface::unit());
  sq.right = w;
  sq.lens = lens_identity(Interface::unit());
  sq.s = c.result({"o", "j"});
  auto gflat = compose(sq.s, tensor(w.f, identity(I2)));
  sq.bottom = {Interface::unit(), w.dst, Interface::unit(), marginal_range(gflat, 0, w.dst.c.rank()), gflat};
  return sq;
}

std::vector<XYSquare> wiring_cells(const GSystem& sys, const GTrajectory& traj, const SystemWiring& w,
                                   const std::vector<Morphism>& choice) {
  if (choice.size() != sys.horizon()) throw BoundaryMismatch("need one coupling per edge");
  std::vector<XYSquare> cells;
  for (std::size_t n = 0; n < sys.horizon(); ++n)
    cells.push_back(wiring_cell(trajectory_square(sys, traj, n).bottom, w.lens[n], choice[n]));
  return cells;
}

std::vector<Morphism> fibre_uniform_choice(const GSystem& sys, const SystemWiring& w) {
  if (w.lens.size() != sys.horizon()) throw BoundaryMismatch("need one lens per edge");
  std::vector<Morphism> out;
  for (std::size_t n = 0; n < sys.horizon(); ++n) {
    const auto& l = w.lens[n];
    const auto &O1 = l.src.c, &I1 = l.src.a, &I2 = l.dst.a;
    std::vector<Row> rows;
    for (Index o = 0; o < O1.size(); ++o)
      for (Index i = 0; i < I1.size(); ++i) {
        std::vector<Index> fibre;
        for (Index j = 0; j < I2.size(); ++j)
          if (l.fsharp.image(o * I2.size() + j) == i) fibre.push_back(j);
        if (fibre.empty())
          for (Index j = 0; j < I2.size(); ++j) fibre.push_back(j);
        Row r;
        for (auto j : fibre) r.push_back({j, Rational(1, fibre.size())});
        rows.push_back(std::move(r));
      }
    out.emplace_back(O1 * I1, I2, Kind::Stoch, std::move(rows));
  }
  return out;
}

GTrajectory lift_trajectory(const GSystem& sys, const GTrajectory& traj, const SystemWiring& w,
                            const std::vector<XYSquare>& cells) {
  const auto T = sys.horizon();
  if (cells.size() != T) throw BoundaryMismatch("need one cell per edge");
  GTrajectory out;
  out.phi = traj.phi;
  for (std::size_t n = 0; n < T; ++n) {
    const auto sq = trajectory_square(sys, traj, n);
    const auto& cell = cells[n];
    if (!(cell.top == sq.bottom)) throw BoundaryMismatch("cell top differs from the trajectory chart" + at_edge(n));
    if (!(cell.right == w.lens[n])) throw BoundaryMismatch("cell right lens differs from the wiring" + at_edge(n));
    if (auto c = validate_xy(cell); !c) throw BoundaryMismatch("invalid cell" + at_edge(n) + ": " + c.law);
    out.s.push_back(sys_xy_compose_y(sq, cell).s);
    out.p.push_back(cell.bottom.gflat);
  }
  const auto composed = compose_system_with_lens(sys, w);
  if (auto c = validate_trajectory(composed, out); !c)
    throw BoundaryMismatch("lifted trajectory is invalid: " + c.law + " " + c.detail);
  return out;
}

}  // namespace mksys
