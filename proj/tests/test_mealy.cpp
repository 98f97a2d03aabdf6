#include <doctest.h>

#include "mksys/core/circuit.hpp"
#include "mksys/laws/generators.hpp"
#include "oracle.hpp"

using namespace mksys;

namespace {

const FiniteObject B({"0", "1"});
const FiniteObject U = FiniteObject::unit();

Rational q(const char* s) { return parse_rational(s); }

IndexedObject bits(std::size_t T) { return IndexedObject::constant(B, T, "a"); }

std::vector<Morphism> per_edge(std::size_t T, const Morphism& k) { return std::vector<Morphism>(T, k); }

}  // namespace

TEST_CASE("identity and stateless machines") {
  Rng rng(1);
  const std::size_t T = 2;
  const auto A = bits(T);
  const auto id = mealy_identity(A);
  CHECK(validate_mealy(id));
  const auto k1 = random_stochastic(rng, B, B), k2 = random_stochastic(rng, B, B);
  const auto m1 = mealy_stateless(A, A, per_edge(T, k1)), m2 = mealy_stateless(A, A, per_edge(T, k2));
  CHECK(validate_mealy(m1));
  CHECK(mealy_compose(m1, m2) == mealy_stateless(A, A, per_edge(T, compose(k1, k2))));
  CHECK(mealy_tensor(m1, m2) == mealy_stateless(IndexedObject::constant(B * B, T), IndexedObject::constant(B * B, T),
                                                per_edge(T, tensor(k1, k2))));
  const auto unit = mealy_identity(IndexedObject::constant(U, T));
  CHECK(mealy_tensor(unit, m1) == m1);
  CHECK(mealy_tensor(m1, unit) == m1);
}

TEST_CASE("composition with the identity pads nothing") {
  Rng rng(2);
  const std::size_t T = 2;
  const auto A = bits(T);
  const auto f = random_history_mealy(rng, A, A, 2);
  CHECK(validate_mealy(f));
  CHECK(mealy_compose(f, mealy_identity(A)) == f);
  CHECK(mealy_compose(mealy_identity(A), f) == f);
  CHECK_THROWS_AS(mealy_compose(f, mealy_identity(IndexedObject::constant(FiniteObject::range(3), T))), ObjectMismatch);
}

TEST_CASE("associativity and interchange on random machines") {
  Rng rng(3);
  for (int k = 0; k < 4; ++k) {
    const std::size_t T = rng.between(1, 2);
    const auto A = bits(T);
    const auto f = random_history_mealy(rng, A, A, 2), g = random_history_mealy(rng, A, A, 2),
               h = random_history_mealy(rng, A, A, 2), m = random_history_mealy(rng, A, A, 2);
    CHECK(mealy_compose(mealy_compose(f, g), h) == mealy_compose(f, mealy_compose(g, h)));
    CHECK(validate_mealy(mealy_compose(f, g)));
    CHECK(validate_mealy(mealy_tensor(f, g)));

    // (f;g)⊗(h;m) and (f⊗h);(g⊗m) agree once the middle two state factors swap.
    const auto lhs = mealy_tensor(mealy_compose(f, g), mealy_compose(h, m));
    const auto rhs = mealy_compose(mealy_tensor(f, h), mealy_tensor(g, m));
    std::vector<Morphism> iso;
    for (std::size_t n = 0; n <= T; ++n) {
      const auto rf = f.S.at[n].rank(), rg = g.S.at[n].rank(), rh = h.S.at[n].rank(), rm = m.S.at[n].rank();
      std::vector<std::size_t> pos;
      for (std::size_t i = 0; i < rf; ++i) pos.push_back(i);
      for (std::size_t i = 0; i < rg; ++i) pos.push_back(rf + rh + i);
      for (std::size_t i = 0; i < rh; ++i) pos.push_back(rf + i);
      for (std::size_t i = 0; i < rm; ++i) pos.push_back(rf + rh + rg + i);
      iso.push_back(wire(rhs.S.at[n], pos));
    }
    CHECK(mealy_transport(rhs, lhs.S, iso) == lhs);
  }
}

TEST_CASE("symmetry is an involution") {
  const std::size_t T = 2;
  const auto A = bits(T), C = IndexedObject::constant(FiniteObject::range(3, "c"), T, "c");
  const auto s = mealy_symmetry(A, C);
  CHECK(validate_mealy(s));
  CHECK(mealy_compose(s, mealy_symmetry(C, A)) == mealy_identity(IndexedObject::constant(B * C.at[0], T)));
}

TEST_CASE("Moore systems as machines") {
  const auto upd = Morphism::stochastic(B, B, {{q("1/2"), q("1/2")}, {q("0"), q("1")}});
  const auto flip = Morphism::function(B, B, std::vector<Index>{1, 0});
  const auto sys = make_open_markov_system(B, U, B, flip, upd, 2);
  const auto m = moore_to_mealy(sys);
  CHECK(validate_mealy(m));
  CHECK(m.B.at[0].is_unit());
  // f[n](s) = (expose^n(s), update^n(s)); histories grow by one step
  for (std::size_t n = 0; n < 2; ++n) {
    const auto d = oracle::dense(m.f[n]);
    const auto ex = oracle::dense(sys.expose[n]);
    const auto up = oracle::dense(sys.update[n]);
    const auto ns1 = sys.S.at[n + 1].size();
    for (Index s = 0; s < d.size(); ++s)
      for (Index o = 0; o < ex[s].size(); ++o)
        for (Index t = 0; t < ns1; ++t) CHECK(d[s][o * ns1 + t] == ex[s][o] * up[s][t]);
  }
}

TEST_CASE("wired Moore systems are sandwiched machines") {
  Rng rng(4);
  for (int k = 0; k < 4; ++k) {
    const auto c = random_lifted_composite(rng, 2, rng.between(1, 2));
    const auto [back, fwd] = feedback_free_wiring(c.sys, c.wiring);
    CHECK(moore_to_mealy(compose_system_with_lens(c.sys, c.wiring)) ==
          mealy_compose(mealy_compose(back, moore_to_mealy(c.sys)), fwd));
  }
}

TEST_CASE("parametric machines") {
  Rng rng(5);
  const std::size_t T = 2;
  const auto A = bits(T);
  const auto W = IndexedObject::constant(B, T, "w");
  // output reads (a, w, s), the state is carried unchanged
  auto make = [&] {
    Circuit c({{"a", B}, {"w", B}, {"s", B}});
    c.copy("s", "s'");
    c.apply(random_stochastic(rng, B * B * B, B), {"a", "w", "s'"}, {{"b", B}});
    return GParaMealy{A, A, IndexedObject::constant(B, T, "s"), W, per_edge(T, c.result({"b", "s"}))};
  };
  const auto p1 = make(), p2 = make();
  CHECK(validate_para_mealy(p1));
  const auto pc = para_mealy_compose(p1, p2);
  CHECK(validate_para_mealy(pc));
  CHECK(pc.Omega.at[1] == B * B);
  CHECK(validate_para_mealy(para_mealy_tensor(p1, p2)));

  // A stateless machine on constant objects reads as a parametric one.
  const auto k = random_stochastic(rng, B, B);
  CHECK(validate_para_mealy(para_from_mealy(mealy_stateless(A, A, per_edge(T, k)))));

  // Different steps at different times break the restriction square.
  auto bad = p1;
  bad.f[1] = make().f[1];
  if (!(bad.f[1] == p1.f[1])) CHECK_FALSE(validate_para_mealy(bad));
}

TEST_CASE("machine JSON round trip") {
  Rng rng(6);
  const auto f = random_history_mealy(rng, bits(2), bits(2), 2);
  CHECK(mealy_from_json(mealy_to_json(f)) == f);
}
