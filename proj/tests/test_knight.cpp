#include <doctest.h>

#include "mksys/laws/generators.hpp"
#include "oracle.hpp"

using namespace mksys;

namespace {

const FiniteObject B({"0", "1"});
const FiniteObject U = FiniteObject::unit();

Rational q(const char* s) { return parse_rational(s); }

}  // namespace

TEST_CASE("breakpoints are running sums") {
  const auto f = Morphism::distribution(B, {q("1/3"), q("2/3")});
  const auto p = uniformize(f);
  CHECK(p.breaks[0] == std::vector<Rational>{0, q("1/3"), 1});
  CHECK(evaluate(p, 0, q("1/3")) == 0);
  CHECK(evaluate(p, 0, q("1/3") + q("1/1000")) == 1);
  CHECK(evaluate(p, 0, 1) == 1);
  CHECK_THROWS_AS(evaluate(p, 0, 0), PreconditionViolation);

  const auto d = uniformize(Morphism::dirac(B, 1));
  CHECK(d.breaks[0] == std::vector<Rational>{0, 0, 1});
  REQUIRE(as_function(d).has_value());
  CHECK(*as_function(d) == Morphism::dirac(B, 1));

  const auto four = uniformize(Morphism::distribution(FiniteObject::range(4), std::vector<Rational>(4, q("1/4"))));
  CHECK(four.breaks[0] == std::vector<Rational>{0, q("1/4"), q("1/2"), q("3/4"), 1});
  CHECK_FALSE(as_function(four).has_value());
}

TEST_CASE("partitions reproduce random kernels exactly") {
  Rng rng(7);
  for (int k = 0; k < 40; ++k) {
    const auto A = random_object(rng, 1, 4), X = random_object(rng, 1, 5);
    const auto f = random_stochastic(rng, A, X);
    const auto p = uniformize(f);
    CHECK(validate_partition(p));
    CHECK(to_kernel(p) == f);
    const auto d = oracle::dense(f);
    for (Index a = 0; a < A.size(); ++a) {
      const auto cs = oracle::cumsum(d[a]);
      CHECK(p.breaks[a] == cs);
      for (Index t = 0; t < X.size(); ++t) {
        CHECK(cumulative(p, a, t) == cs[t + 1]);
        // G(u) <= t exactly on (0, F(t)]
        if (cs[t + 1] > 0) CHECK(evaluate(p, a, cs[t + 1]) <= t);
        if (cs[t + 1] < 1) CHECK(evaluate(p, a, cs[t + 1] + (1 - cs[t + 1]) / 1000) > t);
      }
    }
    const auto up = uniform_parameter(p);
    CHECK(is_deterministic(up.g));
    CHECK(compose(tensor(identity(A), up.lambda), up.g) == f);
    CHECK(partition_from_json(partition_to_json(p)) == p);
  }
}

TEST_CASE("deterministic kernels round trip") {
  Rng rng(8);
  for (int k = 0; k < 20; ++k) {
    const auto A = random_object(rng, 1, 4), X = random_object(rng, 1, 4);
    const auto f = random_function(rng, A, X);
    const auto p = uniformize(f);
    REQUIRE(as_function(p).has_value());
    CHECK(*as_function(p) == f);
  }
}

TEST_CASE("invalid partitions are rejected") {
  IntervalPartition p{U, B, {{0, q("1/2"), q("1/3")}}};
  CHECK_FALSE(validate_partition(p));
  p.breaks = {{0, q("1/2"), q("3/4")}};
  CHECK_FALSE(validate_partition(p));
}

TEST_CASE("Knightian systems") {
  const auto clockish = knight_system(U, 2);
  CHECK(validate_knight(clockish));
  const auto under = knight_underlying(clockish);
  CHECK(system_to_json(under) == system_to_json(clock_system(2)));

  const auto bin = knight_system(B, 2);
  CHECK(validate_knight(bin));
  CHECK(bin.Omega.at[2] == B * B);
  CHECK(bin.S.at[2].is_unit());
  CHECK_THROWS_AS(knight_underlying(bin), PreconditionViolation);
}

TEST_CASE("mixing a Knightian behavior with i.i.d. choices gives the stochastic trajectory") {
  Rng rng(9);
  for (int k = 0; k < 8; ++k) {
    const auto T = rng.between(1, 2);
    const auto o = random_open_system(rng, 2, T);
    const auto up = uniform_parameter(uniformize(o.update));
    const auto ks = make_knight_system(o.S, o.I, o.O, o.expose, up.g, up.omega, T);
    CHECK(validate_knight(ks));
    const auto direct = unroll_trajectory(o.sys, o.initial, o.policy);
    const auto mixed = mix_behavior(knight_unroll(ks, o.initial, o.policy), up.lambda);
    CHECK(mixed == direct);
    CHECK(unroll_trajectory(randomize(ks, up.lambda), o.initial, o.policy) == direct);
  }
  // Pure choice system: its behavior indexed by choice lists mixes to the clock.
  const auto bin = knight_system(B, 2);
  const auto beh = knight_unroll(bin, identity(U));
  CHECK(beh.phi[2].dom() == B * B);
  const auto lam = Morphism::distribution(B, {q("1/3"), q("2/3")});
  CHECK(mix_behavior(beh, lam) == unroll_trajectory(clock_system(2), identity(U)));
}
