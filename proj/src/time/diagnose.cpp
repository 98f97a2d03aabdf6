#include "mksys/time/system.hpp"

#include <algorithm>

#include "mksys/core/circuit.hpp"

namespace mksys {

namespace {

// (s, i2) -> (s, i2, i1, o1, o2) through expose, the wiring lens and copies.
Morphism extend_joint(const Morphism& t, const GSystem& sys, const SystemWiring& w, std::size_t n) {
  const auto& l = w.lens[n];
  Circuit c({});
  c.apply(t, {}, {{"s", sys.S.at[n]}, {"i2", l.dst.a}});
  c.copy("s", "s_");
  c.apply(sys.expose[n], {"s_"}, {{"o1", l.src.c}});
  c.copy("o1", "o1_");
  c.copy("o1", "o1__");
  c.copy("i2", "i2_");
  c.apply(l.fsharp, {"o1_", "i2_"}, {{"i1", l.src.a}});
  c.apply(l.f, {"o1__"}, {{"o2", l.dst.c}});
  return c.result({"s", "i2", "i1", "o1", "o2"});
}

}  // namespace

bool lift_displays_independence(const GSystem& sys, const SystemWiring& w, const GTrajectory& lifted) {
  for (std::size_t n = 0; n < sys.horizon(); ++n) {
    const auto mu = extend_joint(lifted.s[n], sys, w, n);
    const std::size_t rs = sys.S.at[n].rank(), r2 = w.I2.at[n + 1].rank(), r1 = sys.I.at[n + 1].rank(),
                      ro = sys.O.at[n].rank();
    std::vector<std::size_t> xs, ys, zs;
    for (std::size_t k = 0; k < rs; ++k) zs.push_back(k);
    for (std::size_t k = 0; k < r2; ++k) xs.push_back(rs + k);
    for (std::size_t k = 0; k < r1 + ro; ++k) ys.push_back(rs + r2 + k);
    if (!displays_cond_indep(mu, xs, ys, zs)) return false;
  }
  return true;
}

bool CoherenceReport::ok() const { return std::all_of(edges.begin(), edges.end(), [](bool b) { return b; }); }

std::optional<std::size_t> CoherenceReport::first_failure() const {
  for (std::size_t n = 0; n < edges.size(); ++n)
    if (!edges[n]) return n;
  return std::nullopt;
}

CoherenceReport check_time_coherence(const GSystem& sys, const GTrajectory& traj) {
  CoherenceReport r;
  for (std::size_t n = 0; n + 1 < traj.s.size(); ++n)
    r.edges.push_back(compose(traj.s[n + 1], tensor(sys.S.restrict[n], sys.I.restrict[n + 1])) == traj.s[n]);
  return r;
}

bool FactorizationReport::ok() const {
  return std::all_of(edges.begin(), edges.end(), [](const FactorizationEdge& e) {
    return e.t_valid && e.t12_valid && (!(e.generated && e.independent) || e.equal);
  });
}

FactorizationReport factorization_check(const GTrajectory& tprime, const GSystem& sys, const SystemWiring& w) {
  const auto T = sys.horizon();
  if (tprime.s.size() != T) throw ShapeMismatch("trajectory horizon differs from the system");
  const auto outer = compose_system_with_lens(sys, w);
  FactorizationReport rep;
  for (std::size_t n = 0; n < T; ++n) {
    FactorizationEdge e;
    const auto& tp = tprime.s[n];
    const auto& l = w.lens[n];
    const auto &S = sys.S.at[n], &I1 = sys.I.at[n + 1], &O1 = sys.O.at[n], &I2 = w.I2.at[n + 1];
    const auto mu = extend_joint(tp, sys, w, n);
    const std::size_t rs = S.rank(), r2 = I2.rank(), r1 = I1.rank(), ro = O1.rank();
    auto range = [](std::size_t first, std::size_t count) {
      std::vector<std::size_t> v(count);
      for (std::size_t k = 0; k < count; ++k) v[k] = first + k;
      return v;
    };
    auto cat = [](std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
      a.insert(a.end(), b.begin(), b.end());
      return a;
    };
    const auto ps = range(0, rs), p2 = range(rs, r2), p1 = range(rs + r2, r1), po = range(rs + r2 + r1, ro);

    // t : * -> S(n)⊗I1(n+1) as a trajectory square of the inner system.
    const auto t = marginal(mu, cat(ps, p1));
    GTrajectory local;
    local.phi.assign(n + 2, Morphism());
    local.s.assign(n + 1, Morphism());
    local.p.assign(n + 1, Morphism());
    local.phi[n] = marginal_range(t, 0, rs);
    local.phi[n + 1] = compose(t, sys.update[n]);
    local.s[n] = t;
    local.p[n] = compose(t, tensor(sys.expose[n], identity(I1)));
    const auto tsq = trajectory_square(sys, local, n);
    auto tc = validate_sys_xy(tsq);
    e.t_valid = tc.ok;

    // t12 : * -> O1(n)⊗I2(n+1) as a cell over the wiring lens.
    XYSquare cell;
    cell.top = tsq.bottom;
    cell.left = lens_identity(Interface::unit());
    cell.right = l;
    cell.lens = lens_identity(Interface::unit());
    cell.s = marginal(mu, cat(po, p2));
    const auto g2 = compose(cell.s, tensor(l.f, identity(I2)));
    cell.bottom = {Interface::unit(), l.dst, Interface::unit(), marginal_range(g2, 0, l.dst.c.rank()), g2};
    auto cc = validate_xy(cell);
    e.t12_valid = cc.ok;

    // Hypothesis 1: t' is q_n, regenerated from its S(0) marginal by the outer updates.
    Morphism q = compose(tp, tensor(sys.S.restriction(n, 0), identity(I2)));
    for (std::size_t k = 0; k < n; ++k) {
      Circuit c({});
      c.apply(q, {}, {{"s", sys.S.at[k]}, {"i", I2}});
      c.copy("i", "i_");
      c.apply(w.I2.restriction(n + 1, k + 1), {"i_"}, {{"ik", w.I2.at[k + 1]}});
      c.apply(outer.update[k], {"s", "ik"}, {{"s", sys.S.at[k + 1]}});
      q = c.result({"s", "i"});
    }
    e.generated = q == tp;

    // Hypothesis 2: i2(n+1) ⊥ s(0) given o1(n).
    {
      Circuit c({});
      c.apply(mu, {}, {{"s", S}, {"i2", I2}, {"i1", I1}, {"o1", O1}, {"o2", l.dst.c}});
      c.apply(sys.S.restriction(n, 0), {"s"}, {{"s0", sys.S.at[0]}});
      const auto j = c.result({"i2", "o1", "s0"});
      e.independent = displays_cond_indep(j, range(0, r2), range(r2, ro), range(r2 + ro, sys.S.at[0].rank()));
    }

    if (e.t_valid && e.t12_valid) {
      e.equal = sys_xy_compose_y(tsq, cell).s == tp;
    }
    if (!e.t_valid) e.detail = "t is not a square: " + tc.law;
    else if (!e.t12_valid) e.detail = "t12 is not a square: " + cc.law;
    else if (!e.generated) e.detail = "hypothesis 1 fails: t' is not generated from its initial marginal";
    else if (!e.independent) e.detail = "hypothesis 2 fails: i2 depends on s(0) given o1";
    else if (!e.equal) e.detail = "t' differs from t/t12";
    rep.edges.push_back(std::move(e));
  }
  return rep;
}

}  // namespace mksys
