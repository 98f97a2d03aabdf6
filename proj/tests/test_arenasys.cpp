#include <doctest.h>

#include "mksys/laws/generators.hpp"
#include "oracle.hpp"

using namespace mksys;

namespace {

const FiniteObject B({"0", "1"});
const FiniteObject U = FiniteObject::unit();

SysXYSquare trivial_square() {
  const auto idu = identity(U);
  const Chart unit{{}, {}, {}, idu, idu};
  const SysXMor top{SystemObject::trivial(), SystemObject::trivial(), idu, idu};
  return {top, unit, sys_ymor_trivial(), sys_ymor_trivial(), idu};
}

}  // namespace

TEST_CASE("system objects, x-morphisms and system lenses") {
  Rng rng(1);
  const FiniteObject St({"a", "b", "c"});
  const SystemObject x{St, B, Morphism::function(St, B, std::vector<Index>{0, 1, 1})};
  CHECK(validate_system_object(x));
  CHECK_FALSE(validate_system_object({St, B, random_stochastic(rng, St, B, false)}));

  const SysXMor id{x, x, identity(St), identity(B)};
  CHECK(validate_sys_xmor(id));
  CHECK(sys_xmor_compose(id, id) == id);
  const SysXMor bad{x, x, identity(St), Morphism::function(B, B, std::vector<Index>{1, 0})};
  CHECK_FALSE(validate_sys_xmor(bad));

  const auto l = random_noisy_sys_lens(rng, B, 3);
  CHECK(validate_sys_ymor(l));
  auto wrong = l;
  wrong.fsharp = random_stochastic(rng, l.fsharp.dom(), l.fsharp.cod(), false);
  const auto c = validate_sys_ymor(wrong);
  CHECK_FALSE(c);
  CHECK(c.law == "system lens projection");

  // A nondeterministic output map is only accepted in relaxed mode.
  const auto coin = Morphism::stochastic(B, B, {{Rational(1, 2), Rational(1, 2)}, {0, 1}});
  const SysYMor noisy{{B, B, identity(B)}, {U, B}, coin, identity(B)};
  CHECK_FALSE(validate_sys_ymor(noisy));
  CHECK(validate_sys_ymor(noisy, LensPolicy::Relaxed));
}

TEST_CASE("the all-unit square is unique and closed under composition") {
  const auto t = trivial_square();
  CHECK(validate_sys_xy(t));
  CHECK(sys_xy_compose_x(t, t) == t);
  const auto idu = identity(U);
  CHECK(sys_xy_compose_y(t, xy_identity_y({{}, {}, {}, idu, idu})) == t);
  const auto [p1, p2] = projection_squares(sys_ymor_trivial(), sys_ymor_trivial());
  CHECK(p1 == t);
  CHECK(p2 == t);
}

TEST_CASE("x- and y-composites of generated squares are valid") {
  Rng rng(2);
  for (int k = 0; k < 6; ++k) {
    const auto g = random_sys_grid(rng, 2);
    CHECK(validate_sys_xy(g.s));
    CHECK(validate_sys_xy(sys_xy_compose_x(g.s, g.t)));
    CHECK(sys_xy_compose_y(g.s, xy_identity_y(g.s.bottom)) == g.s);
    CHECK_THROWS_AS(sys_xy_compose_x(g.t, g.s), BoundaryMismatch);

    const auto parts = sys_xy_compose_y_parts(g.s, g.u);
    CHECK(validate_sys_xy(parts.square));
    const auto pr = parts.phi.cod().rank(), zr = parts.alpha.cod().rank() - pr, yr = parts.psi.cod().rank() - zr;
    CHECK(marginal_range(parts.alpha, 0, pr) == parts.phi);
    CHECK(marginal_range(parts.alpha, pr - yr, yr + zr) == parts.psi);
    const auto ny = parts.alpha.cod().slice(pr - yr, yr).size();
    const auto nz = parts.alpha.cod().slice(pr, zr).size();
    for (const auto& row : oracle::dense(parts.alpha)) CHECK(oracle::ci_cells(row, parts.phi.cod().size() / ny, ny, nz));
    CHECK(sys_regeneration_holds(g.s, g.u));
    // The composite does not depend on how zero-mass conditionals are filled.
    CHECK(sys_xy_compose_y_parts(g.s, g.u, ZeroMass::FirstPoint).square == parts.square);
  }
}

TEST_CASE("interchange and y-associativity of system squares") {
  Rng rng(3);
  for (int k = 0; k < 5; ++k) {
    const auto g = random_sys_grid(rng, 2);
    CHECK(sys_xy_compose_y(sys_xy_compose_x(g.s, g.t), xy_compose_x(g.u, g.v)) ==
          sys_xy_compose_x(sys_xy_compose_y(g.s, g.u), sys_xy_compose_y(g.t, g.v)));
    const auto c = random_sys_column(rng, 2);
    CHECK(sys_xy_compose_y(sys_xy_compose_y(c.s, c.t), c.u) == sys_xy_compose_y(c.s, xy_compose_y(c.t, c.u)));
  }
}

TEST_CASE("projection squares are valid") {
  Rng rng(4);
  for (int k = 0; k < 5; ++k) {
    const auto l1 = random_noisy_sys_lens(rng, random_object(rng, 1, 3, "s"), 3);
    const auto l2 = random_noisy_sys_lens(rng, random_object(rng, 1, 3, "s"), 3);
    const auto [p1, p2] = projection_squares(l1, l2);
    CHECK(validate_sys_xy(p1));
    CHECK(validate_sys_xy(p2));
    CHECK(p1.right == l1);
    CHECK(p2.right == l2);
  }
}

TEST_CASE("tensor behavior recovers both squares") {
  Rng rng(5);
  for (int k = 0; k < 6; ++k) {
    const auto inst = random_nabla_instance(rng, 3);
    const auto n = nabla(inst.s1, inst.s2, inst.g012);
    CHECK(validate_sys_xy(n));
    const auto [p1, p2] = projection_squares(inst.s1.right, inst.s2.right);
    CHECK(strip_residual(sys_xy_compose_x(n, p1)) == inst.s1);
    CHECK(strip_residual(sys_xy_compose_x(n, p2)) == inst.s2);
  }
  const auto t = trivial_square();
  const auto idu = identity(U);
  CHECK(nabla(t, t, {{}, {}, {}, idu, idu}) == t);
}

TEST_CASE("tensor behavior names the failing hypothesis") {
  Rng rng(6);
  auto inst = random_nabla_instance(rng, 2);
  for (auto* s : {&inst.s1, &inst.s2}) s->left.dst.a = B;
  try {
    nabla(inst.s1, inst.s2, inst.g012);
    FAIL("expected a precondition violation");
  } catch (const PreconditionViolation& e) {
    CHECK(std::string(e.what()) == "I0 must be unit");
  }
  auto other = random_nabla_instance(rng, 2);
  CHECK_THROWS_AS(nabla(other.s1, inst.s2, other.g012), PreconditionViolation);
}

TEST_CASE("system square JSON round trip") {
  Rng rng(7);
  const auto g = random_sys_grid(rng, 2);
  CHECK(sys_xy_from_json(sys_xy_to_json(g.s)) == g.s);
  CHECK(sys_ymor_from_json(sys_ymor_to_json(g.t.right)) == g.t.right);
  CHECK(system_object_from_json(system_object_to_json(g.s.top.src)) == g.s.top.src);
  CHECK(sys_xmor_from_json(sys_xmor_to_json(g.t.top)) == g.t.top);
}
