#include "mksys/laws/generators.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "mksys/core/circuit.hpp"

namespace mksys {

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t Rng::below(std::size_t n) { return n <= 1 ? 0 : static_cast<std::size_t>(next() % n); }

std::size_t Rng::between(std::size_t lo, std::size_t hi) { return hi <= lo ? lo : lo + below(hi - lo + 1); }

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t index) {
  Rng r(seed ^ (index * 0xd1b54a32d192ed03ULL));
  r.next();
  return r.next();
}

namespace {

std::vector<std::size_t> iota(std::size_t first, std::size_t count) {
  std::vector<std::size_t> v(count);
  std::iota(v.begin(), v.end(), first);
  return v;
}

std::vector<Index> shuffled(Rng& rng, std::size_t n) {
  std::vector<Index> v(n);
  std::iota(v.begin(), v.end(), 0);
  for (std::size_t k = n; k > 1; --k) std::swap(v[k - 1], v[rng.below(k)]);
  return v;
}

Row weights_row(const std::vector<std::pair<Index, Rational>>& law) {
  std::map<Index, Rational> acc;
  for (const auto& [c, w] : law)
    if (w != 0) acc[c] += w;
  Row r;
  for (const auto& [c, w] : acc) r.push_back({c, w});
  return r;
}

}  // namespace

FiniteObject random_object(Rng& rng, std::size_t lo, std::size_t hi, const std::string& prefix) {
  return FiniteObject::range(rng.between(lo, hi), prefix);
}

Interface random_interface(Rng& rng, std::size_t lo, std::size_t hi) {
  return {random_object(rng, lo, hi, "a"), random_object(rng, lo, hi, "c")};
}

std::vector<Rational> random_weights(Rng& rng, std::size_t n, bool sparse) {
  std::vector<Rational> w(n);
  long total = 0;
  std::vector<long> raw(n);
  for (auto& x : raw) {
    x = static_cast<long>(rng.between(sparse ? 0 : 1, 4));
    if (sparse && rng.chance(1, 4)) x = 0;
    total += x;
  }
  if (total == 0) {
    raw[rng.below(n)] = 1;
    total = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = Rational(raw[k], total);
    w[k].canonicalize();
  }
  return w;
}

Morphism random_distribution(Rng& rng, const FiniteObject& x, bool sparse) {
  return Morphism::distribution(x, random_weights(rng, x.size(), sparse));
}

Morphism random_stochastic(Rng& rng, const FiniteObject& a, const FiniteObject& x, bool sparse) {
  std::vector<Row> rows;
  for (Index i = 0; i < a.size(); ++i) {
    auto w = random_weights(rng, x.size(), sparse);
    Row r;
    for (Index c = 0; c < x.size(); ++c)
      if (w[c] != 0) r.push_back({c, w[c]});
    rows.push_back(std::move(r));
  }
  return Morphism(a, x, Kind::Stoch, std::move(rows));
}

Morphism random_possibilistic(Rng& rng, const FiniteObject& a, const FiniteObject& x) {
  std::vector<Row> rows;
  for (Index i = 0; i < a.size(); ++i) {
    Row r;
    for (Index c = 0; c < x.size(); ++c)
      if (rng.chance(1, 2)) r.push_back({c, 1});
    if (r.empty()) r.push_back({rng.below(x.size()), 1});
    rows.push_back(std::move(r));
  }
  return Morphism(a, x, Kind::Poss, std::move(rows));
}

Morphism random_function(Rng& rng, const FiniteObject& a, const FiniteObject& x) {
  std::vector<Index> map(a.size());
  for (auto& m : map) m = rng.below(x.size());
  return Morphism::function(a, x, map);
}

Morphism random_injection(Rng& rng, const FiniteObject& a, const FiniteObject& x) {
  if (a.size() > x.size()) throw PreconditionViolation("no injection into a smaller object");
  auto perm = shuffled(rng, x.size());
  perm.resize(a.size());
  return Morphism::function(a, x, perm);
}

Morphism random_surjection(Rng& rng, const FiniteObject& a, const FiniteObject& x) {
  if (a.size() < x.size()) throw PreconditionViolation("no surjection onto a larger object");
  auto order = shuffled(rng, a.size());
  std::vector<Index> map(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) map[order[k]] = k < x.size() ? k : rng.below(x.size());
  return Morphism::function(a, x, map);
}

Morphism random_bijection(Rng& rng, const FiniteObject& a, const FiniteObject& x) {
  if (a.size() != x.size()) throw PreconditionViolation("no bijection between objects of different sizes");
  return random_surjection(rng, a, x);
}

Morphism random_onto_rows(Rng& rng, const FiniteObject& c, const FiniteObject& b, const FiniteObject& a) {
  std::vector<Index> map;
  for (Index i = 0; i < c.size(); ++i) {
    auto row = random_surjection(rng, b, a).as_function();
    map.insert(map.end(), row.begin(), row.end());
  }
  return Morphism::function(c * b, a, map);
}

std::vector<std::pair<Index, Rational>> random_support_law(Rng& rng, const std::vector<Index>& candidates) {
  if (candidates.empty()) throw PreconditionViolation("empty support");
  auto w = random_weights(rng, candidates.size());
  std::vector<std::pair<Index, Rational>> out;
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (w[k] != 0) out.push_back({candidates[k], w[k]});
  return out;
}

Chart random_chart(Rng& rng, const Interface& src, const Interface& dst, const Interface& residual) {
  const auto &[a1, c1] = src;
  const auto &[a2, c2] = dst;
  const auto &[a12, c12] = residual;
  const auto g = random_stochastic(rng, c1, c12 * c2);
  Circuit c({{"c1", c1}, {"a1", a1}});
  c.copy("c1", "c1'");
  c.apply(g, {"c1'"}, {{"c12", c12}, {"c2", c2}});
  c.copy("c12", "c12'").copy("c2", "c2'");
  c.apply(random_stochastic(rng, c1 * a1 * c12 * c2, a12 * a2), {"c1", "a1", "c12'", "c2'"},
          {{"a12", a12}, {"a2", a2}});
  return make_chart(src, dst, residual, g, c.result({"c12", "c2", "a12", "a2"}));
}

DetLens random_liftable_lens(Rng& rng, const Interface& src, std::size_t max_size) {
  auto grow = [&](const FiniteObject& x, const char* prefix) {
    const auto n = x.size();
    return FiniteObject::range(rng.chance(1, 3) ? rng.between(n, std::max(n, max_size)) : n, prefix);
  };
  Interface dst{grow(src.a, "a"), grow(src.c, "c")};
  return make_lens(src, dst, random_injection(rng, src.c, dst.c), random_onto_rows(rng, src.c, dst.a, src.a));
}

namespace {

// Replaces the rows of `base` above the points c of its source outputs for
// which `row_for(c, a)` yields a row.
Chart override_rows(const Chart& base, const std::vector<std::optional<Row>>& g_rows,
                    const std::vector<std::optional<Row>>& gflat_rows) {
  auto g = base.g.rows();
  auto gf = base.gflat.rows();
  for (Index k = 0; k < g.size(); ++k)
    if (g_rows[k]) g[k] = *g_rows[k];
  for (Index k = 0; k < gf.size(); ++k)
    if (gflat_rows[k]) gf[k] = *gflat_rows[k];
  return make_chart(base.src, base.dst, base.residual, Morphism(base.g.dom(), base.g.cod(), Kind::Stoch, g),
                    Morphism(base.gflat.dom(), base.gflat.cod(), Kind::Stoch, gf));
}

std::vector<Index> preimage_rows(const Morphism& f, Index c, std::size_t width, Index target) {
  // points b with f(c, b) = target, where dom(f) = C ⊗ B and |B| = width
  std::vector<Index> out;
  for (Index b = 0; b < width; ++b)
    if (f.image(c * width + b) == target) out.push_back(b);
  return out;
}

}  // namespace

XYSquare lift_square(Rng& rng, const Chart& top, const DetLens& left, const DetLens& right, const DetLens& residual) {
  const auto& c1 = top.src.c;
  const auto& a3 = left.dst.a;
  const auto &[a12, c12] = top.residual;
  const auto &[a2, c2] = top.dst;
  const auto &[a34, c34] = residual.dst;
  const auto& a4 = right.dst.a;
  const auto n3 = a3.size(), nc2 = c2.size(), na12 = a12.size(), na2 = a2.size(), na34 = a34.size(),
             na4 = a4.size();

  std::vector<Row> srows;
  for (Index x = 0; x < c1.size(); ++x)
    for (Index a = 0; a < n3; ++a) {
      const Index a1 = left.fsharp.image(x * n3 + a);
      std::vector<std::pair<Index, Rational>> law;
      for (const auto& [col, w] : top.gflat.row(x * top.src.a.size() + a1)) {
        // col = ((k12 * |c2| + k2) * |a12| + j12) * |a2| + j2
        const Index j2 = col % na2, j12 = (col / na2) % na12, k2 = (col / na2 / na12) % nc2,
                    k12 = col / na2 / na12 / nc2;
        const auto p34 = preimage_rows(residual.fsharp, k12, na34, j12);
        const auto p4 = preimage_rows(right.fsharp, k2, na4, j2);
        std::vector<Index> cand;
        for (auto b34 : p34)
          for (auto b4 : p4) cand.push_back(((k12 * nc2 + k2) * na34 + b34) * na4 + b4);
        for (const auto& [c, v] : random_support_law(rng, cand)) law.push_back({c, Rational(w * v)});
      }
      srows.push_back(weights_row(law));
    }
  const Morphism s(c1 * a3, c12 * c2 * a34 * a4, Kind::Stoch, std::move(srows));

  // Bottom chart: pushforward of s above the image of f13, arbitrary elsewhere.
  const auto push = tensor({residual.f, right.f, identity(a34), identity(a4)});
  const auto base = random_chart(rng, left.dst, right.dst, residual.dst);
  std::vector<std::optional<Row>> g(base.g.dom().size()), gf(base.gflat.dom().size());
  const auto cpart = c34.rank() + right.dst.c.rank();
  for (Index x = 0; x < c1.size(); ++x) {
    const Index y = left.f.image(x);
    for (Index a = 0; a < n3; ++a) {
      const auto row = compose(restrict_row(s, x * n3 + a), push);
      gf[y * n3 + a] = row.row(0);
      if (a == 0) g[y] = marginal_range(row, 0, cpart).row(0);
    }
  }
  return {top, override_rows(base, g, gf), left, right, residual, s};
}

SysYMor noisy_sys_lens(Rng& rng, const FiniteObject& S, const Morphism& f, const FiniteObject& a,
                       const FiniteObject& noise) {
  Circuit c({{"s", S}, {"a", a}});
  c.copy("s", "s'").copy("a", "a'");
  c.apply(random_stochastic(rng, S * a, noise), {"s'", "a'"}, {{"n", noise}});
  const auto stilde = S * a * noise;
  SystemObject obj{stilde, S, wire(stilde, iota(0, S.rank()))};
  SysYMor l{obj, {a, f.cod()}, f, c.result({"s", "a", "n"})};
  if (auto ch = validate_sys_ymor(l); !ch) throw ValidationError("generated system lens: " + ch.law);
  return l;
}

SysYMor random_noisy_sys_lens(Rng& rng, const FiniteObject& S, std::size_t max_size) {
  const auto c = FiniteObject::range(rng.between(S.size(), std::max(S.size(), max_size)), "c");
  return noisy_sys_lens(rng, S, random_injection(rng, S, c), random_object(rng, 1, 2, "a"),
                        random_object(rng, 1, 2, "n"));
}

SysXYSquare lift_sys_square(Rng& rng, const SysYMor& left, const SysYMor& right, const Interface& residual) {
  const auto& S1 = left.src.s;
  const auto& S2 = right.src.s;
  const auto& a4 = left.dst.a;
  const auto &[a45, c45] = residual;
  const auto& a5 = right.dst.a;
  const auto k1 = random_stochastic(rng, S1, S2 * c45);
  const auto k2 = random_stochastic(rng, S1 * a4 * S2 * c45, a45 * a5);

  Circuit sc({{"S1", S1}, {"a4", a4}});
  sc.copy("S1", "S1'");
  sc.apply(k1, {"S1'"}, {{"S2", S2}, {"c45", c45}});
  sc.copy("S2", "S2'").copy("c45", "c45'");
  sc.apply(k2, {"S1", "a4", "S2'", "c45'"}, {{"a45", a45}, {"a5", a5}});
  const auto s = sc.result({"S2", "c45", "a45", "a5"});

  // f12♭(s1, a4, n) = (s ; π ; f25♯)(s1, a4)
  const auto& T1 = left.src.stilde;
  const auto noise1 = T1.slice(S1.rank() + a4.rank(), T1.rank() - S1.rank() - a4.rank());
  Circuit fc({{"S1", S1}, {"a4", a4}, {"n", noise1}});
  fc.apply(s, {"S1", "a4"}, {{"S2", S2}, {"c45", c45}, {"a45", a45}, {"a5", a5}});
  fc.apply(right.fsharp, {"S2", "a5"}, {{"T2", right.src.stilde}});
  SysXMor top{left.src, right.src, fc.result({"T2"}), marginal_range(k1, 0, S2.rank())};

  // Bottom chart from s above the image of f14.
  Circuit pc({{"S2", S2}, {"c45", c45}, {"a45", a45}, {"a5", a5}});
  pc.apply(right.f, {"S2"}, {{"c5", right.dst.c}});
  const auto push = pc.result({"c45", "c5", "a45", "a5"});
  const auto base = random_chart(rng, left.dst, right.dst, residual);
  std::vector<std::optional<Row>> g(base.g.dom().size()), gf(base.gflat.dom().size());
  const auto n4 = a4.size();
  for (Index x = 0; x < S1.size(); ++x) {
    const Index y = left.f.image(x);
    for (Index a = 0; a < n4; ++a) {
      const auto row = compose(restrict_row(s, x * n4 + a), push);
      gf[y * n4 + a] = row.row(0);
      if (a == 0) g[y] = marginal_range(row, 0, c45.rank() + right.dst.c.rank()).row(0);
    }
  }
  SysXYSquare sq{top, override_rows(base, g, gf), left, right, s};
  if (auto c = validate_sys_xy(sq); !c) throw ValidationError("generated system square: " + c.law + " " + c.detail);
  return sq;
}

ArenaGrid random_arena_grid(Rng& rng, std::size_t max_size) {
  const auto top = std::min<std::size_t>(2, max_size);
  const auto i1 = random_interface(rng, 1, top), i2 = random_interface(rng, 1, top), i3 = random_interface(rng, 1, top);
  const auto x1 = random_chart(rng, i1, i2, random_interface(rng, 1, top));
  const auto x2 = random_chart(rng, i2, i3, random_interface(rng, 1, top));
  const auto l1 = random_liftable_lens(rng, i1, max_size), l2 = random_liftable_lens(rng, i2, max_size),
             l3 = random_liftable_lens(rng, i3, max_size);
  const auto s = lift_square(rng, x1, l1, l2, random_liftable_lens(rng, x1.residual, max_size));
  const auto t = lift_square(rng, x2, l2, l3, random_liftable_lens(rng, x2.residual, max_size));
  const auto l5 = random_liftable_lens(rng, l2.dst, max_size);
  const auto u = lift_square(rng, s.bottom, random_liftable_lens(rng, l1.dst, max_size), l5,
                             random_liftable_lens(rng, s.bottom.residual, max_size));
  const auto v = lift_square(rng, t.bottom, l5, random_liftable_lens(rng, l3.dst, max_size),
                             random_liftable_lens(rng, t.bottom.residual, max_size));
  return {s, t, u, v};
}

SysGrid random_sys_grid(Rng& rng, std::size_t max_size) {
  const auto top = std::min<std::size_t>(2, max_size);
  const auto l1 = random_noisy_sys_lens(rng, random_object(rng, 1, top, "s"), max_size);
  const auto l2 = random_noisy_sys_lens(rng, random_object(rng, 1, top, "s"), max_size);
  const auto l3 = random_noisy_sys_lens(rng, random_object(rng, 1, top, "s"), max_size);
  const auto s = lift_sys_square(rng, l1, l2, random_interface(rng, 1, top));
  const auto t = lift_sys_square(rng, l2, l3, random_interface(rng, 1, top));
  const auto l5 = random_liftable_lens(rng, l2.dst, max_size);
  const auto u = lift_square(rng, s.bottom, random_liftable_lens(rng, l1.dst, max_size), l5,
                             random_liftable_lens(rng, s.bottom.residual, max_size));
  const auto v = lift_square(rng, t.bottom, l5, random_liftable_lens(rng, l3.dst, max_size),
                             random_liftable_lens(rng, t.bottom.residual, max_size));
  return {s, t, u, v};
}

std::array<XYSquare, 3> random_y_column(Rng& rng, std::size_t max_size) {
  const auto top = std::min<std::size_t>(2, max_size);
  const auto x = random_chart(rng, random_interface(rng, 1, top), random_interface(rng, 1, top),
                              random_interface(rng, 1, top));
  auto below = [&](const XYSquare& above) {
    return lift_square(rng, above.bottom, random_liftable_lens(rng, above.left.dst, max_size),
                       random_liftable_lens(rng, above.right.dst, max_size),
                       random_liftable_lens(rng, above.bottom.residual, max_size));
  };
  const auto s = lift_square(rng, x, random_liftable_lens(rng, x.src, max_size),
                             random_liftable_lens(rng, x.dst, max_size),
                             random_liftable_lens(rng, x.residual, max_size));
  const auto t = below(s);
  return {s, t, below(t)};
}

SysColumn random_sys_column(Rng& rng, std::size_t max_size) {
  const auto top = std::min<std::size_t>(2, max_size);
  const auto l1 = random_noisy_sys_lens(rng, random_object(rng, 1, top, "s"), max_size);
  const auto l2 = random_noisy_sys_lens(rng, random_object(rng, 1, top, "s"), max_size);
  const auto s = lift_sys_square(rng, l1, l2, random_interface(rng, 1, top));
  const auto t = lift_square(rng, s.bottom, random_liftable_lens(rng, l1.dst, max_size),
                             random_liftable_lens(rng, l2.dst, max_size),
                             random_liftable_lens(rng, s.bottom.residual, max_size));
  const auto u = lift_square(rng, t.bottom, random_liftable_lens(rng, t.left.dst, max_size),
                             random_liftable_lens(rng, t.right.dst, max_size),
                             random_liftable_lens(rng, t.bottom.residual, max_size));
  return {s, t, u};
}

NablaInstance random_nabla_instance(Rng& rng, std::size_t max_size) {
  const auto top = std::min<std::size_t>(2, max_size);
  const auto T = random_object(rng, 1, max_size, "t");
  const auto Tt = FiniteObject::range(T.size(), "u");
  const auto O0 = random_object(rng, 1, top, "o");
  const auto bij = random_bijection(rng, T, Tt);
  std::vector<Index> inv(T.size());
  for (Index k = 0; k < T.size(); ++k) inv[bij.image(k)] = k;
  const SystemObject obj0{Tt, T, Morphism::function(Tt, T, inv)};
  const SysYMor f0{obj0, {FiniteObject::unit(), O0}, random_function(rng, T, O0), bij};

  // Right systems with onto output maps so every output has a state above it.
  auto system = [&] {
    const auto S = random_object(rng, 1, max_size, "s");
    const auto O = random_object(rng, 1, S.size(), "o");
    return noisy_sys_lens(rng, S, random_surjection(rng, S, O), random_object(rng, 1, top, "i"),
                          random_object(rng, 1, 2, "n"));
  };
  const auto r1 = system(), r2 = system();
  const auto &I1 = r1.dst.a, &O1 = r1.dst.c, &I2 = r2.dst.a, &O2 = r2.dst.c;
  const auto g012 = random_chart(rng, f0.dst, {I1 * I2, O1 * O2}, Interface::unit());

  auto square = [&](const SysYMor& r, bool first) {
    const auto& S = r.src.s;
    const auto &I = r.dst.a, &O = r.dst.c;
    // K : T⊗O⊗I -> S supported on the fibre of O
    std::vector<Row> rows;
    for (Index t = 0; t < T.size(); ++t)
      for (Index o = 0; o < O.size(); ++o)
        for (Index i = 0; i < I.size(); ++i) {
          std::vector<Index> fibre;
          for (Index x = 0; x < S.size(); ++x)
            if (r.f.image(x) == o) fibre.push_back(x);
          rows.push_back(weights_row(random_support_law(rng, fibre)));
        }
    const Morphism k(T * O * I, S, Kind::Stoch, std::move(rows));
    Circuit c({{"T", T}});
    c.copy("T", "T'");
    c.apply(f0.f, {"T'"}, {{"O0", O0}});
    c.apply(g012.gflat, {"O0"}, {{"O1", O1}, {"O2", O2}, {"I1", I1}, {"I2", I2}});
    const char* o = first ? "O1" : "O2";
    const char* i = first ? "I1" : "I2";
    c.copy(i, "I'");
    c.apply(k, {"T", o, "I'"}, {{"S", S}});
    const auto s = c.result({"S", i});
    Circuit fl({{"Tt", Tt}});
    fl.apply(obj0.r, {"Tt"}, {{"T", T}});
    fl.apply(s, {"T"}, {{"S", S}, {"I", I}});
    fl.apply(r.fsharp, {"S", "I"}, {{"St", r.src.stilde}});
    SysXMor topm{obj0, r.src, fl.result({"St"}), marginal_range(s, 0, S.rank())};
    const auto bottom = first ? chart_marginal(g012, 0, I1.rank(), 0, O1.rank())
                              : chart_marginal(g012, I1.rank(), I2.rank(), O1.rank(), O2.rank());
    SysXYSquare sq{topm, bottom, f0, r, s};
    if (auto ch = validate_sys_xy(sq); !ch) throw ValidationError("generated behavior square: " + ch.law);
    return sq;
  };
  return {square(r1, true), square(r2, false), g012};
}

OpenSystem random_open_system(Rng& rng, std::size_t max_size, std::size_t horizon, bool injective_expose) {
  OpenSystem o;
  o.S = random_object(rng, 1, max_size, "s");
  o.I = random_object(rng, 1, max_size, "i");
  o.O = injective_expose ? FiniteObject::range(rng.between(o.S.size(), std::max(o.S.size(), max_size)), "o")
                         : random_object(rng, 1, max_size, "o");
  o.expose = injective_expose ? random_injection(rng, o.S, o.O) : random_function(rng, o.S, o.O);
  o.update = rng.chance(1, 4) ? random_function(rng, o.S * o.I, o.S) : random_stochastic(rng, o.S * o.I, o.S);
  o.initial = random_distribution(rng, o.S);
  o.sys = make_open_markov_system(o.S, o.I, o.O, o.expose, o.update, horizon);
  if (!o.I.is_unit()) {
    o.step = rng.chance(1, 2) ? compose(discard(o.O), random_distribution(rng, o.I)) : random_stochastic(rng, o.O, o.I);
    o.policy = markov_policy(o.step, o.O, o.I, horizon);
  }
  return o;
}

LiftedComposite random_lifted_composite(Rng& rng, std::size_t max_size, std::size_t horizon) {
  const auto S = random_object(rng, 1, max_size, "s");
  const auto I2 = random_object(rng, 1, max_size, "j");
  const auto I1 = random_object(rng, 1, I2.size(), "i");
  const auto O1 = FiniteObject::range(rng.between(S.size(), std::max(S.size(), max_size)), "o");
  const auto O2 = random_object(rng, 1, max_size, "p");
  const auto k = random_surjection(rng, I2, I1);
  const auto expose = random_injection(rng, S, O1);
  const auto update = random_stochastic(rng, S * I1, S);
  const auto sys = make_open_markov_system(S, I1, O1, expose, update, horizon);
  const auto traj = unroll_trajectory(sys, random_distribution(rng, S),
                                      exogenous_policy(random_distribution(rng, I1), O1, horizon));
  const auto step = make_lens({I1, O1}, {I2, O2}, random_function(rng, O1, O2),
                              compose(wire(O1 * I2, iota(O1.rank(), I2.rank())), k));
  const auto w = lift_lens(step, horizon);

  // Per step, i2 is drawn from the fibre of i1 under k, independently over time.
  std::vector<Row> crow;
  for (Index i = 0; i < I1.size(); ++i) {
    std::vector<Index> fibre;
    for (Index j = 0; j < I2.size(); ++j)
      if (k.image(j) == i) fibre.push_back(j);
    crow.push_back(weights_row(random_support_law(rng, fibre)));
  }
  const Morphism coupling(I1, I2, Kind::Stoch, std::move(crow));
  std::vector<Morphism> choice;
  for (std::size_t n = 0; n < horizon; ++n) {
    std::vector<Circuit::Port> in{{"o", sys.O.at[n]}};
    std::vector<std::string> out;
    for (std::size_t t = 0; t <= n; ++t) in.push_back({"i" + std::to_string(t), I1});
    Circuit c(in);
    for (std::size_t t = 0; t <= n; ++t) {
      c.apply(coupling, {"i" + std::to_string(t)}, {{"j" + std::to_string(t), I2}});
      out.push_back("j" + std::to_string(t));
    }
    choice.push_back(c.result(out));
  }
  const auto lifted = lift_trajectory(sys, traj, w, wiring_cells(sys, traj, w, choice));
  return {sys, w, traj, lifted};
}

GMealy random_history_mealy(Rng& rng, const IndexedObject& A, const IndexedObject& B, std::size_t max_size) {
  const auto X = random_object(rng, 1, max_size, "x");
  GMealy m{A, B, IndexedObject::history(X, A.horizon(), 1, "x"), {}};
  for (std::size_t n = 0; n < A.horizon(); ++n) {
    const auto& Sn = m.S.at[n];
    Circuit c({{"a", A.at[n + 1]}, {"s", Sn}});
    c.apply(identity(Sn), {"s"}, {{"old", Sn.slice(0, Sn.rank() - X.rank())}, {"last", X}});
    c.copy("last", "last'");
    c.apply(random_stochastic(rng, A.at[n + 1] * X, B.at[n + 1] * X), {"a", "last'"},
            {{"b", B.at[n + 1]}, {"new", X}});
    m.f.push_back(c.result({"b", "old", "last", "new"}));
  }
  return m;
}

}  // namespace mksys
