#include <doctest.h>

#include "mksys/laws/generators.hpp"
#include "oracle.hpp"

using namespace mksys;

namespace {

const FiniteObject B({"0", "1"});
const FiniteObject U = FiniteObject::unit();

Morphism fn2(const FiniteObject& dom, const FiniteObject& cod, std::function<Index(Index)> f) {
  return Morphism::function(dom, cod, f);
}

// h(c) = g(f(c)), h♯(c, a) = f♯(c, g♯(f(c), a)), read off the function tables.
bool lens_compose_pointwise(const DetLens& l1, const DetLens& l2, const DetLens& h) {
  const auto n2 = l2.dst.a.size(), n1 = l1.dst.a.size();
  for (Index c = 0; c < l1.src.c.size(); ++c) {
    const Index fc = l1.f.image(c);
    if (h.f.image(c) != l2.f.image(fc)) return false;
    for (Index a = 0; a < n2; ++a) {
      const Index mid = l2.fsharp.image(fc * n2 + a);
      if (h.fsharp.image(c * n2 + a) != l1.fsharp.image(c * n1 + mid)) return false;
    }
  }
  return true;
}

DetLens random_lens(Rng& rng, const Interface& src, const Interface& dst) {
  return make_lens(src, dst, random_function(rng, src.c, dst.c), random_function(rng, src.c * dst.a, src.a));
}

}  // namespace

TEST_CASE("lens composition example on bits") {
  const Interface X{B, B};
  // f = id, f♯(c, a) = a xor c; g = not, g♯(c, a) = a
  const auto l1 = make_lens(X, X, identity(B), fn2(B * B, B, [](Index i) { return (i >> 1) ^ (i & 1); }));
  const auto l2 = make_lens(X, X, fn2(B, B, [](Index c) { return 1 - c; }), fn2(B * B, B, [](Index i) { return i & 1; }));
  const auto h = lens_compose(l1, l2);
  CHECK(h.f.as_function() == std::vector<Index>{1, 0});
  for (Index c = 0; c < 2; ++c)
    for (Index a = 0; a < 2; ++a) CHECK(h.fsharp.image(c * 2 + a) == (a ^ c));
  CHECK(lens_compose(lens_identity(X), l1) == l1);
}

TEST_CASE("lens composition matches pointwise evaluation and is associative") {
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    const auto i1 = random_interface(rng, 1, 3), i2 = random_interface(rng, 1, 3), i3 = random_interface(rng, 1, 3),
               i4 = random_interface(rng, 1, 3);
    const auto l1 = random_lens(rng, i1, i2), l2 = random_lens(rng, i2, i3), l3 = random_lens(rng, i3, i4);
    const auto h = lens_compose(l1, l2);
    CHECK(lens_compose_pointwise(l1, l2, h));
    CHECK(validate_lens(h));
    CHECK(lens_compose(h, l3) == lens_compose(l1, lens_compose(l2, l3)));
    CHECK(lens_compose(l1, lens_identity(i2)) == l1);
  }
  const Interface X{B, B};
  CHECK_THROWS_AS(lens_compose(lens_identity(X), lens_identity(Interface{B, U})), ObjectMismatch);
  const auto coin = Morphism::stochastic(B, B, {{Rational(1, 2), Rational(1, 2)}, {0, 1}});
  CHECK_FALSE(validate_lens({X, X, coin, fn2(B * B, B, [](Index i) { return i & 1; })}));
}

TEST_CASE("chart composition copies the middle outputs") {
  const Interface X{U, B};
  const auto k1 = fn2(B, B, [](Index c) { return 1 - c; });
  const auto k2 = fn2(B, B, [](Index) { return 1; });
  const auto x1 = make_chart(X, X, Interface::unit(), k1, k1);
  const auto x2 = make_chart(X, X, Interface::unit(), k2, k2);
  const auto x = chart_compose(x1, x2);
  CHECK(x.residual == Interface{U, B});
  for (Index c = 0; c < 2; ++c) {
    const Index m = k1.image(c);
    CHECK(x.g.image(c) == m * 2 + k2.image(m));
  }
  CHECK(validate_chart(x));

  const auto unit = make_chart(Interface::unit(), Interface::unit(), Interface::unit(), identity(U), identity(U));
  CHECK(chart_compose(unit, unit) == unit);
}

TEST_CASE("random charts compose associatively and validly") {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<Interface> in;
    for (int k = 0; k < 4; ++k) in.push_back(random_interface(rng, 1, 2));
    const auto x1 = random_chart(rng, in[0], in[1], random_interface(rng, 1, 2));
    const auto x2 = random_chart(rng, in[1], in[2], random_interface(rng, 1, 2));
    const auto x3 = random_chart(rng, in[2], in[3], random_interface(rng, 1, 2));
    CHECK(validate_chart(x1));
    CHECK(validate_chart(chart_compose(x1, x2)));
    CHECK(chart_compose(chart_compose(x1, x2), x3) == chart_compose(x1, chart_compose(x2, x3)));
  }
}

TEST_CASE("charts have no identities on a nontrivial probe") {
  Rng rng(8);
  const Interface X{B, B};
  const auto probe = random_chart(rng, X, X, Interface::unit());
  std::vector<Chart> candidates{make_chart(X, X, Interface::unit(), identity(B), identity(B * B))};
  for (int k = 0; k < 10; ++k) candidates.push_back(random_chart(rng, X, X, random_interface(rng, 1, 2)));
  for (const auto& e : candidates) {
    CHECK_FALSE(chart_compose(probe, e) == probe);
    CHECK_FALSE(chart_compose(e, probe) == probe);
  }
}

TEST_CASE("a chart whose joint map disagrees with its output map is rejected") {
  const Interface X{U, B};
  const auto c = validate_chart({X, X, Interface::unit(), identity(B), fn2(B, B, [](Index) { return 0; })});
  CHECK_FALSE(c);
  CHECK(c.law == "chart marginal");
}

TEST_CASE("square validators") {
  Rng rng(12);
  const auto x = random_chart(rng, {B, B}, {B, B}, {B, U});
  CHECK(validate_xy(xy_identity_y(x)));

  // Replacing s by an unrelated kernel of the same type breaks the law labelled (b).
  int tried = 0;
  for (int t = 0; t < 40 && tried < 5; ++t) {
    auto g = random_arena_grid(rng, 3);
    CHECK(validate_xy(g.s));
    if (g.s.s.cod().size() < 4) continue;
    auto bad = g.s;
    bad.s = random_stochastic(rng, bad.s.dom(), bad.s.cod(), false);
    const auto c = validate_xy(bad);
    CHECK_FALSE(c);
    CHECK(c.law == "(b)");
    ++tried;
  }
  CHECK(tried > 0);

  const ZPair z = zpair_identity(x.src);
  const XZSquare xz{x, x, z, zpair_identity(x.dst), identity(x.residual.c), identity(x.residual.a)};
  CHECK(validate_xz(xz));
  const YZSquare yz{z, z, lens_identity(x.src), lens_identity(x.src)};
  CHECK(validate_yz(yz));
  auto broken = yz;
  broken.right = make_lens(x.src, x.src, fn2(B, B, [](Index c) { return 1 - c; }), random_function(rng, B * B, B));
  CHECK_FALSE(validate_yz(broken));
}

TEST_CASE("thin squares compose by tensoring and concatenation") {
  Rng rng(13);
  const Interface X{B, B};
  const auto x1 = random_chart(rng, X, X, {U, B});
  const auto x2 = random_chart(rng, X, X, {B, U});
  auto thin = [](const Chart& x) {
    return XZSquare{x, x, zpair_identity(x.src), zpair_identity(x.dst), identity(x.residual.c), identity(x.residual.a)};
  };
  const auto u = xz_compose_x(thin(x1), thin(x2));
  CHECK(validate_xz(u));
  CHECK(u.fc == identity(chart_compose(x1, x2).residual.c));
  CHECK(u.fa == identity(chart_compose(x1, x2).residual.a));
  CHECK(validate_xz(xz_compose_z(thin(x1), thin(x1))));
  CHECK_THROWS_AS(xz_compose_z(thin(x1), thin(x2)), BoundaryMismatch);

  const auto l = random_lens(rng, X, X);
  const YZSquare yz{zpair_identity(X), zpair_identity(X), l, l};
  CHECK(validate_yz(yz_compose_y(yz, yz)));
  CHECK(validate_yz(yz_compose_z(yz, yz)));
}

TEST_CASE("cubes are checked on their boundary") {
  Rng rng(14);
  auto thin_x = [](const Chart& x) {
    return XZSquare{x, x, zpair_identity(x.src), zpair_identity(x.dst), identity(x.residual.c), identity(x.residual.a)};
  };
  auto thin_y = [](const DetLens& l) { return YZSquare{zpair_identity(l.src), zpair_identity(l.dst), l, l}; };
  for (int k = 0; k < 4; ++k) {
    const auto g = random_arena_grid(rng, 2);
    const auto& sq = g.s;
    XYZBoundary cube{sq, sq, thin_x(sq.top), thin_x(sq.bottom), thin_y(sq.left), thin_y(sq.right)};
    CHECK(validate_xyz(cube));

    // The back face must sit over the same charts and lenses.
    cube.back = g.t;
    const auto c = validate_xyz(cube);
    if (!(g.t.top == sq.top)) {
      CHECK_FALSE(c);
      CHECK(c.law == "boundary");
    }
  }
}

TEST_CASE("x-composition of squares") {
  Rng rng(31);
  const auto unit_chart = make_chart(Interface::unit(), Interface::unit(), Interface::unit(), identity(U), identity(U));
  const auto unit = xy_identity_y(unit_chart);
  CHECK(xy_compose_x(unit, unit) == unit);

  for (int t = 0; t < 8; ++t) {
    std::vector<Interface> in;
    std::vector<DetLens> l;
    for (int k = 0; k < 4; ++k) {
      in.push_back(random_interface(rng, 1, 2));
      l.push_back(random_liftable_lens(rng, in.back(), 3));
    }
    std::vector<XYSquare> sq;
    for (int k = 0; k < 3; ++k) {
      const auto x = random_chart(rng, in[k], in[k + 1], random_interface(rng, 1, 2));
      sq.push_back(lift_square(rng, x, l[k], l[k + 1], random_liftable_lens(rng, x.residual, 3)));
    }
    const auto st = xy_compose_x(sq[0], sq[1]);
    CHECK(validate_xy(st));
    CHECK(xy_compose_x(st, sq[2]) == xy_compose_x(sq[0], xy_compose_x(sq[1], sq[2])));
    CHECK_THROWS_AS(xy_compose_x(sq[1], sq[0]), BoundaryMismatch);
  }
}

TEST_CASE("y-composition of squares") {
  Rng rng(41);
  for (int t = 0; t < 8; ++t) {
    const auto [a, b, c] = random_y_column(rng, 2);
    CHECK(xy_compose_y(a, xy_identity_y(a.bottom)) == a);
    CHECK(xy_compose_y(xy_identity_y(a.top), a) == a);
    const auto parts = xy_compose_y_parts(a, b);
    CHECK(validate_xy(parts.square));
    // alpha : X Y Z glues phi : X Y and psi : Y Z, independently given Y.
    const auto pr = parts.phi.cod().rank(), zr = parts.alpha.cod().rank() - pr, yr = parts.psi.cod().rank() - zr;
    CHECK(marginal_range(parts.alpha, 0, pr) == parts.phi);
    CHECK(marginal_range(parts.alpha, pr - yr, yr + zr) == parts.psi);
    const auto ny = parts.alpha.cod().slice(pr - yr, yr).size();
    const auto nz = parts.alpha.cod().slice(pr, zr).size();
    for (const auto& row : oracle::dense(parts.alpha)) CHECK(oracle::ci_cells(row, parts.phi.cod().size() / ny, ny, nz));
    CHECK(xy_regeneration_holds(a, b));
    CHECK(xy_compose_y(xy_compose_y(a, b), c) == xy_compose_y(a, xy_compose_y(b, c)));
  }
}

TEST_CASE("xy interchange on generated grids") {
  Rng rng(51);
  for (int t = 0; t < 6; ++t) {
    const auto g = random_arena_grid(rng, 2);
    const auto lhs = xy_compose_y(xy_compose_x(g.s, g.t), xy_compose_x(g.u, g.v));
    CHECK(validate_xy(lhs));
    CHECK(lhs == xy_compose_x(xy_compose_y(g.s, g.u), xy_compose_y(g.t, g.v)));
  }
}

TEST_CASE("arena JSON round trip") {
  Rng rng(61);
  const auto g = random_arena_grid(rng, 2);
  CHECK(xy_from_json(xy_to_json(g.s)) == g.s);
  CHECK(chart_from_json(chart_to_json(g.t.top)) == g.t.top);
  CHECK(lens_from_json(lens_to_json(g.u.left)) == g.u.left);
  CHECK(interface_from_json(interface_to_json(g.v.bottom.src)) == g.v.bottom.src);
}
