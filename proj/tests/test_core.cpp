#include <doctest.h>

#include "mksys/core/serialize.hpp"
#include "mksys/laws/generators.hpp"
#include "oracle.hpp"

using namespace mksys;

namespace {

Rational q(const char* s) { return parse_rational(s); }

FiniteObject bits(const std::string& p = "") { return FiniteObject({p + "0", p + "1"}); }

std::vector<Rational> row0(const Morphism& f) { return oracle::dense(f)[0]; }

}  // namespace

TEST_CASE("rationals print as p/q in lowest terms") {
  CHECK(to_string(Rational(2, 4)) == "1/2");
  CHECK(to_string(Rational(3)) == "3/1");
  CHECK(to_string(Rational(0)) == "0/1");
  CHECK(parse_rational("6/8") == Rational(3, 4));
  CHECK(parse_rational("5") == Rational(5));
  CHECK(to_decimal(Rational(1, 3)) == "0.333333");
}

TEST_CASE("objects encode tuples row-major and drop unit factors") {
  const FiniteObject x({"0", "1"}), y({"a", "b", "c"});
  const auto xy = x * y;
  CHECK(xy.size() == 6);
  CHECK(xy.rank() == 2);
  for (Index i = 0; i < xy.size(); ++i) CHECK(xy.encode(xy.decode(i)) == i);
  CHECK(xy.decode(4) == std::vector<Index>{1, 1});
  CHECK(xy.label(1) == "(0,b)");
  CHECK((x * FiniteObject::unit()).rank() == 1);
  CHECK(FiniteObject({"only"}).is_unit());
  CHECK((x * y) * x == x * (y * x));
}

TEST_CASE("composition examples") {
  const auto X = bits("x");
  const auto flip = Morphism::function(X, X, std::vector<Index>{1, 0});
  CHECK(compose(Morphism::dirac(X, 0), flip) == Morphism::dirac(X, 1));

  const auto half = Morphism::stochastic(FiniteObject::unit(), X, {{q("1/2"), q("1/2")}});
  CHECK(compose(half, identity(X)) == half);
  const auto k = Morphism::stochastic(X, X, {{q("1/3"), q("2/3")}, {q("0"), q("1")}});
  CHECK(row0(compose(half, k)) == std::vector<Rational>{q("1/6"), q("5/6")});
}

TEST_CASE("composition agrees with the dense matrix product") {
  Rng rng(11);
  for (int t = 0; t < 40; ++t) {
    const auto A = random_object(rng, 1, 4), B = random_object(rng, 1, 4), C = random_object(rng, 1, 4);
    const auto f = random_stochastic(rng, A, B), g = random_stochastic(rng, B, C);
    CHECK(oracle::dense(compose(f, g)) == oracle::matmul(oracle::dense(f), oracle::dense(g)));
    CHECK(oracle::dense(tensor(f, g)) == oracle::kron(oracle::dense(f), oracle::dense(g)));
    const auto p = random_possibilistic(rng, A, B), r = random_possibilistic(rng, B, C);
    CHECK(oracle::dense(compose(p, r)) == oracle::relcomp(oracle::dense(p), oracle::dense(r)));
  }
}

TEST_CASE("tensor examples") {
  const FiniteObject a({"a"}), b({"b"});
  CHECK(tensor(identity(a), identity(b)) == identity(a * b));
  const auto X = bits();
  CHECK(tensor(Morphism::dirac(X, 0), Morphism::dirac(X, 1)) == Morphism::dirac(X * X, 1));
  const auto f = Morphism::distribution(X, {q("1/2"), q("1/2")});
  const auto g = Morphism::distribution(X, {q("1/3"), q("2/3")});
  CHECK(row0(tensor(f, g)) == std::vector<Rational>{q("1/6"), q("1/3"), q("1/6"), q("1/3")});
}

TEST_CASE("structure maps") {
  const auto X = bits();
  const FiniteObject Y({"a", "b", "c"});
  CHECK(copy(X).as_function() == std::vector<Index>{0, 3});
  CHECK(discard(Y).cod().is_unit());
  CHECK(discard(Y).as_function() == std::vector<Index>{0, 0, 0});
  // (0,b) sits at index 1 of X⊗Y and (b,0) at index 2 of Y⊗X.
  const auto sw = swap(X, Y);
  CHECK(sw.image(1) == 2);
  for (Index x = 0; x < 2; ++x)
    for (Index y = 0; y < 3; ++y) CHECK(sw.image(x * 3 + y) == y * 2 + x);
  CHECK(is_deterministic(copy(Y)));
}

TEST_CASE("mismatched boundaries and instances are rejected") {
  const auto X = bits(), Y = FiniteObject::range(3);
  CHECK_THROWS_AS(compose(identity(X), identity(Y)), ObjectMismatch);
  const auto s = Morphism::stochastic(X, X, {{q("1/2"), q("1/2")}, {q("1"), q("0")}});
  const auto p = Morphism::possibilistic(X, X, {{true, true}, {true, false}});
  CHECK_THROWS_AS(compose(s, p), InstanceMismatch);
  CHECK_THROWS_AS(tensor(s, p), InstanceMismatch);
  CHECK_THROWS_AS(marginal(Morphism::dirac(X * X, 0), {2}), BadFactorSelection);
  CHECK_THROWS_AS(Morphism::stochastic(X, X, {{q("1/2"), q("2/5")}, {q("1"), q("0")}}), InvalidKernel);
  CHECK_THROWS_AS(Morphism::possibilistic(X, X, {{false, false}, {true, false}}), InvalidKernel);
}

TEST_CASE("marginal examples") {
  const auto X = bits("x"), Y = bits("y");
  CHECK(marginal(Morphism::dirac(X * Y, 1), {0}) == Morphism::dirac(X, 0));
  const auto p = Morphism::distribution(X * Y, {q("1/2"), q("1/4"), q("0"), q("1/4")});
  CHECK(row0(marginal(p, {0})) == std::vector<Rational>{q("3/4"), q("1/4")});
  CHECK(marginal(p, {0, 1}) == p);
}

TEST_CASE("determinism") {
  const auto X = bits();
  CHECK(is_deterministic(Morphism::function(X, X, std::vector<Index>{1, 1})));
  CHECK_FALSE(is_deterministic(Morphism::distribution(X, {q("1/2"), q("1/2")})));
  CHECK_FALSE(is_deterministic(Morphism::possibilistic(FiniteObject::unit(), X, {{true, true}})));
}

TEST_CASE("conditional example and zero-mass fill") {
  const auto X = bits("x"), Y = bits("y");
  const auto p = Morphism::distribution(X * Y, {q("1/2"), q("1/4"), q("0"), q("1/4")});
  const auto c = conditional(p, 1);
  CHECK(oracle::dense(c) == oracle::Dense{{q("2/3"), q("1/3")}, {q("0"), q("1")}});
  CHECK(reconstruct(marginal(p, {0}), c) == p);

  // x1 has no mass: the uniform default fills it, the other default picks a point.
  const auto z = Morphism::distribution(X * Y, {q("1/2"), q("1/2"), q("0"), q("0")});
  CHECK(row0(restrict_row(conditional(z, 1), 1)) == std::vector<Rational>{q("1/2"), q("1/2")});
  CHECK(restrict_row(conditional(z, 1, ZeroMass::FirstPoint), 1) == Morphism::dirac(Y, 0));
}

TEST_CASE("conditional of a product is the second factor") {
  const auto X = FiniteObject::range(3, "x"), Y = bits("y");
  const auto qx = Morphism::distribution(X, {q("1/2"), q("1/2"), q("0")});
  const auto r = Morphism::distribution(Y, {q("1/5"), q("4/5")});
  const auto c = conditional(tensor(qx, r), 1);
  for (Index x = 0; x < 2; ++x) CHECK(restrict_row(c, x) == r);
}

TEST_CASE("possibilistic conditional fibres") {
  const auto X = bits("x"), Y = bits("y");
  const auto phi = Morphism::possibilistic(FiniteObject::unit(), X * Y, {{true, true, false, true}});
  const auto c = conditional(phi, 1);
  CHECK(oracle::dense(c) == oracle::Dense{{1, 1}, {0, 1}});
  CHECK(reconstruct(marginal(phi, {0}), c) == phi);
}

TEST_CASE("conditionals match the Bayes quotient on random kernels") {
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    const auto A = random_object(rng, 1, 3), X = random_object(rng, 1, 4, "x"), Y = random_object(rng, 1, 4, "y");
    const auto phi = random_stochastic(rng, A, X * Y);
    const auto c = oracle::dense(conditional(phi, X.rank()));
    const auto d = oracle::dense(phi);
    for (Index a = 0; a < A.size(); ++a) {
      const auto want = oracle::bayes(d[a], X.size(), Y.size());
      for (Index x = 0; x < X.size(); ++x)
        if (want[x]) CHECK(c[a * X.size() + x] == *want[x]);
    }
  }
}

TEST_CASE("conditional product example") {
  const auto X = bits("x"), Y = bits("y"), Z = bits("z");
  const auto f = Morphism::distribution(X * Y, std::vector<Rational>(4, q("1/4")));
  const auto g = Morphism::distribution(Y * Z, {q("1/2"), q("0"), q("0"), q("1/2")});
  const auto h = row0(conditional_product(f, g, 1));
  for (Index x = 0; x < 2; ++x)
    for (Index y = 0; y < 2; ++y)
      for (Index z = 0; z < 2; ++z) CHECK(h[x * 4 + y * 2 + z] == (z == y ? q("1/4") : q("0")));

  const auto bad = Morphism::distribution(Y * Z, {q("1"), q("0"), q("0"), q("0")});
  CHECK_THROWS_AS(conditional_product(f, bad, 1), MarginalMismatch);
}

TEST_CASE("conditional product of independent factors and over the unit") {
  Rng rng(3);
  const auto X = bits("x"), Y = bits("y"), Z = FiniteObject::range(3, "z");
  const auto hx = random_distribution(rng, X), m = random_distribution(rng, Y), kz = random_distribution(rng, Z);
  CHECK(conditional_product(tensor(hx, m), tensor(m, kz), 1) == tensor({hx, m, kz}));
  CHECK(conditional_product(hx, kz, 0) == tensor(hx, kz));
}

TEST_CASE("conditional products satisfy the cell equation") {
  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    const auto X = random_object(rng, 1, 3, "x"), Y = random_object(rng, 1, 3, "y"), Z = random_object(rng, 1, 3, "z");
    const auto f = random_distribution(rng, X * Y);
    const auto g = reconstruct(marginal_range(f, X.rank(), Y.rank()), random_stochastic(rng, Y, Z));
    const auto h = conditional_product(f, g, Y.rank());
    const auto d = row0(h);
    CHECK(oracle::ci_cells(d, X.size(), Y.size(), Z.size()));
    // p(x,y,z) = f(x,y) g(z|y), Bayes quotient taken from g.
    const auto fd = row0(f);
    const auto gc = oracle::bayes(row0(g), Y.size(), Z.size());
    for (Index x = 0; x < X.size(); ++x)
      for (Index y = 0; y < Y.size(); ++y)
        for (Index z = 0; z < Z.size(); ++z) {
          const Rational want = gc[y] ? fd[x * Y.size() + y] * (*gc[y])[z] : Rational(0);
          CHECK(d[(x * Y.size() + y) * Z.size() + z] == want);
        }
  }
}

TEST_CASE("displays conditional independence") {
  const auto X = bits("x"), Z = bits("z");
  const auto corr = Morphism::distribution(X * Z, {q("1/2"), q("0"), q("0"), q("1/2")});
  CHECK_FALSE(displays_cond_indep(corr, {0}, {}, {1}));
  CHECK_FALSE(oracle::ci_cells(row0(corr), 2, 1, 2));
  Rng rng(1);
  const auto prod = tensor(random_distribution(rng, X), random_distribution(rng, Z));
  CHECK(displays_cond_indep(prod, {0}, {}, {1}));
  const auto rel = Morphism::possibilistic(FiniteObject::unit(), X * Z, {{true, true, false, true}});
  CHECK_FALSE(displays_cond_indep(rel, {0}, {}, {1}));
  CHECK_THROWS_AS(displays_cond_indep(prod, {0}, {}, {4}), BadFactorSelection);
}

TEST_CASE("almost sure equality") {
  const auto X = bits();
  const auto f = Morphism::function(X, X, std::vector<Index>{0, 0});
  const auto g = Morphism::function(X, X, std::vector<Index>{0, 1});
  CHECK(almost_surely_equal(Morphism::dirac(X, 0), f, f));
  CHECK(almost_surely_equal(Morphism::dirac(X, 0), f, g));
  CHECK_FALSE(almost_surely_equal(Morphism::distribution(X, {q("1/2"), q("1/2")}), f, g));
}

TEST_CASE("kernel JSON round trip") {
  Rng rng(2);
  const auto A = random_object(rng, 1, 3, "a"), B = random_object(rng, 1, 3, "b");
  for (const auto& f : {random_stochastic(rng, A, B), random_possibilistic(rng, A, B), random_function(rng, A, B)}) {
    const auto j = morphism_to_json(f);
    const auto back = morphism_from_json(j);
    CHECK(back == f);
    CHECK(back.kind() == f.kind());
    CHECK(morphism_to_json(back) == j);
  }
  const auto j = morphism_to_json(Morphism::distribution(bits(), {q("2/6"), q("4/6")}));
  CHECK(j["rows"][0][0] == "1/3");
}
