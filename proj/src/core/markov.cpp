#include "mksys/core/markov.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "mksys/core/circuit.hpp"

namespace mksys {

namespace detail {

// Sorts entries by column and merges repeats: weights add in the stochastic
// instance and saturate at 1 otherwise.
void merge_row(Row& r, Kind kind) {
  std::sort(r.begin(), r.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
  std::size_t out = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (out && r[out - 1].col == r[k].col) {
      if (kind == Kind::Stoch) r[out - 1].w += r[k].w;
    } else {
      if (out != k) r[out] = std::move(r[k]);
      ++out;
    }
  }
  r.resize(out);
}

}  // namespace detail

Kind join_kind(Kind a, Kind b) {
  if (a == Kind::Det) return b;
  if (b == Kind::Det || a == b) return a;
  throw InstanceMismatch("cannot mix " + kind_name(a) + " and " + kind_name(b) + " kernels");
}

Morphism compose(const Morphism& f, const Morphism& g) {
  if (!(f.cod() == g.dom()))
    throw ObjectMismatch("compose: codomain " + f.cod().describe() + " does not match domain " + g.dom().describe());
  const Kind kind = join_kind(f.kind(), g.kind());
  std::vector<Row> rows(f.dom().size());
  for (Index a = 0; a < rows.size(); ++a) {
    const auto& fr = f.row(a);
    if (fr.size() == 1) {
      rows[a] = g.row(fr[0].col);
      if (kind == Kind::Stoch && fr[0].w != 1)
        for (auto& e : rows[a]) e.w *= fr[0].w;
      continue;
    }
    Row acc;
    for (const auto& [m, w] : fr)
      for (const auto& [c, v] : g.row(m)) acc.push_back({c, kind == Kind::Stoch ? Rational(w * v) : Rational(1)});
    detail::merge_row(acc, kind);
    rows[a] = std::move(acc);
  }
  return Morphism(f.dom(), g.cod(), kind, std::move(rows), Morphism::Unchecked{});
}

Morphism compose(std::initializer_list<Morphism> chain) {
  auto it = chain.begin();
  Morphism out = *it++;
  for (; it != chain.end(); ++it) out = compose(out, *it);
  return out;
}

Morphism tensor(const Morphism& f, const Morphism& g) {
  const Kind kind = join_kind(f.kind(), g.kind());
  const auto nb = g.dom().size(), nd = g.cod().size();
  std::vector<Row> rows(f.dom().size() * nb);
  for (Index a = 0; a < f.dom().size(); ++a)
    for (Index b = 0; b < nb; ++b) {
      Row& r = rows[a * nb + b];
      r.reserve(f.row(a).size() * g.row(b).size());
      for (const auto& [c, v] : f.row(a))
        for (const auto& [d, w] : g.row(b)) r.push_back({c * nd + d, kind == Kind::Stoch ? Rational(v * w) : Rational(1)});
    }
  return Morphism(f.dom() * g.dom(), f.cod() * g.cod(), kind, std::move(rows), Morphism::Unchecked{});
}

Morphism tensor(std::initializer_list<Morphism> parts) {
  auto it = parts.begin();
  Morphism out = *it++;
  for (; it != parts.end(); ++it) out = tensor(out, *it);
  return out;
}

Morphism identity(const FiniteObject& x) {
  std::vector<Index> m(x.size());
  std::iota(m.begin(), m.end(), 0);
  return Morphism::function(x, x, m);
}

Morphism wire(const FiniteObject& x, const std::vector<std::size_t>& positions) {
  FactorMap fm(x.shape(), positions);
  std::vector<Row> rows(x.size());
  for (Index i = 0; i < rows.size(); ++i) rows[i].push_back({fm(i), 1});
  return Morphism(x, x.select(positions), Kind::Det, std::move(rows), Morphism::Unchecked{});
}

Morphism copy(const FiniteObject& x) {
  std::vector<std::size_t> pos;
  for (int twice = 0; twice < 2; ++twice)
    for (std::size_t k = 0; k < x.rank(); ++k) pos.push_back(k);
  return wire(x, pos);
}

Morphism discard(const FiniteObject& x) { return wire(x, {}); }

Morphism swap(const FiniteObject& x, const FiniteObject& y) {
  std::vector<std::size_t> pos;
  for (std::size_t k = 0; k < y.rank(); ++k) pos.push_back(x.rank() + k);
  for (std::size_t k = 0; k < x.rank(); ++k) pos.push_back(k);
  return wire(x * y, pos);
}

Morphism marginal(const Morphism& p, const std::vector<std::size_t>& keep) {
  return compose(p, wire(p.cod(), keep));
}

Morphism marginal_range(const Morphism& p, std::size_t first, std::size_t count) {
  if (first + count > p.cod().rank()) throw BadFactorSelection("marginal range exceeds the codomain rank");
  std::vector<std::size_t> keep(count);
  std::iota(keep.begin(), keep.end(), first);
  return marginal(p, keep);
}

bool is_deterministic(const Morphism& f) {
  return compose(f, copy(f.cod())) == compose(copy(f.dom()), tensor(f, f));
}

Morphism restrict_row(const Morphism& f, Index a) {
  return compose(Morphism::dirac(f.dom(), a), f);
}

namespace {

Morphism conditional_in(const Morphism& phi, std::size_t x_rank, ZeroMass fill, Kind kind) {
  if (x_rank > phi.cod().rank()) throw BadFactorSelection("conditional split exceeds the codomain rank");
  const FiniteObject X = phi.cod().slice(0, x_rank);
  const FiniteObject Y = phi.cod().slice(x_rank, phi.cod().rank() - x_rank);
  const Index nx = X.size(), ny = Y.size();
  std::vector<Row> rows(phi.dom().size() * nx);
  for (Index a = 0; a < phi.dom().size(); ++a) {
    const auto& r = phi.row(a);
    std::size_t k = 0;
    for (Index x = 0; x < nx; ++x) {
      Row& out = rows[a * nx + x];
      Rational mass = 0;
      std::size_t start = k;
      while (k < r.size() && r[k].col / ny == x) mass += r[k++].w;
      if (k == start) {
        if (fill == ZeroMass::FirstPoint) {
          out.push_back({0, 1});
        } else {
          Rational u = kind == Kind::Stoch ? Rational(1, ny) : Rational(1);
          for (Index y = 0; y < ny; ++y) out.push_back({y, u});
        }
        continue;
      }
      for (std::size_t j = start; j < k; ++j)
        out.push_back({r[j].col % ny, kind == Kind::Stoch ? Rational(r[j].w / mass) : Rational(1)});
    }
  }
  return Morphism(phi.dom() * X, Y, kind, std::move(rows), Morphism::Unchecked{});
}

}  // namespace

Morphism conditional(const Morphism& phi, std::size_t x_rank, ZeroMass fill) {
  return conditional_in(phi, x_rank, fill, phi.kind() == Kind::Det ? Kind::Stoch : phi.kind());
}

Morphism reconstruct(const Morphism& marginal_x, const Morphism& cond) {
  const auto& A = marginal_x.dom();
  const auto& X = marginal_x.cod();
  Circuit c({{"a", A}});
  c.copy("a", "a'");
  c.apply(marginal_x, {"a'"}, {{"x", X}});
  c.copy("x", "x'");
  c.apply(cond, {"a", "x'"}, {{"y", cond.cod()}});
  return c.result({"x", "y"});
}

Morphism conditional_product(const Morphism& f, const Morphism& g, std::size_t y_rank, ZeroMass fill) {
  if (!(f.dom() == g.dom())) throw ObjectMismatch("conditional product: domains differ");
  if (y_rank > f.cod().rank() || y_rank > g.cod().rank())
    throw BadFactorSelection("conditional product: shared factor count exceeds a codomain rank");
  const auto x_rank = f.cod().rank() - y_rank;
  const FiniteObject X = f.cod().slice(0, x_rank);
  const FiniteObject Y = f.cod().slice(x_rank, y_rank);
  const FiniteObject Z = g.cod().slice(y_rank, g.cod().rank() - y_rank);
  if (!(g.cod().slice(0, y_rank) == Y)) throw ObjectMismatch("conditional product: shared objects differ");
  const auto my_f = marginal_range(f, x_rank, y_rank);
  const auto my_g = marginal_range(g, 0, y_rank);
  if (!(my_f == my_g)) {
    long a = my_f.first_difference(my_g);
    throw MarginalMismatch("conditional product: shared marginals differ at input " + f.dom().label(a));
  }
  Kind kind = join_kind(f.kind(), g.kind());
  const auto g_y = conditional_in(g, y_rank, fill, kind == Kind::Det ? Kind::Stoch : kind);
  // A -> copy -> A A -> f⊗A -> X Y A -> X copy(Y) A -> X Y Y A -> X Y g|Y(A,Y) -> X Y Z
  Circuit c({{"a", f.dom()}});
  c.copy("a", "a'");
  c.apply(f, {"a"}, {{"x", X}, {"y", Y}});
  c.copy("y", "y'");
  c.apply(g_y, {"a'", "y'"}, {{"z", Z}});
  return c.result({"x", "y", "z"});
}

namespace {

bool cond_indep_grouped(const Morphism& q, std::size_t /*nx*/, std::size_t ny, std::size_t nz) {
  const auto& row = q.row(0);
  std::unordered_map<Index, Rational> pxy, pyz, py;
  for (const auto& [c, w] : row) {
    Index x = c / (ny * nz), y = (c / nz) % ny, z = c % nz;
    pxy[x * ny + y] += w;
    pyz[y * nz + z] += w;
    py[y] += w;
  }
  std::unordered_map<Index, std::size_t> nxy, nyz, nq;
  for (const auto& kv : pxy) ++nxy[kv.first % ny];
  for (const auto& kv : pyz) ++nyz[kv.first / nz];
  for (const auto& [c, w] : row) ++nq[(c / nz) % ny];
  for (const auto& [y, n] : nq)
    if (n != nxy[y] * nyz[y]) return false;
  if (q.kind() != Kind::Stoch) return true;
  for (const auto& [c, w] : row) {
    Index x = c / (ny * nz), y = (c / nz) % ny, z = c % nz;
    if (w * py[y] != pxy[x * ny + y] * pyz[y * nz + z]) return false;
  }
  return true;
}

}  // namespace

bool displays_cond_indep(const Morphism& p, const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ys,
                         const std::vector<std::size_t>& zs) {
  if (!p.dom().is_unit()) throw BadFactorSelection("conditional independence needs a state (unit domain)");
  std::vector<std::size_t> all(xs);
  all.insert(all.end(), ys.begin(), ys.end());
  all.insert(all.end(), zs.begin(), zs.end());
  for (auto k : all)
    if (k >= p.cod().rank()) throw BadFactorSelection("factor " + std::to_string(k) + " out of range");
  const auto q = marginal(p, all);
  auto size_of = [&](const std::vector<std::size_t>& pos) { return p.cod().select(pos).size(); };
  return cond_indep_grouped(q, size_of(xs), size_of(ys), size_of(zs));
}

bool displays_cond_indep(const Morphism& p, const Morphism& u, const Morphism& v, const Morphism& w) {
  if (!p.dom().is_unit()) throw BadFactorSelection("conditional independence needs a state (unit domain)");
  Circuit c({{"p", p.cod()}});
  c.copy("p", "p'").copy("p", "p''");
  c.apply(u, {"p"}, {{"x", u.cod()}});
  c.apply(v, {"p'"}, {{"y", v.cod()}});
  c.apply(w, {"p''"}, {{"z", w.cod()}});
  const auto q = compose(p, c.result({"x", "y", "z"}));
  return cond_indep_grouped(q, u.cod().size(), v.cod().size(), w.cod().size());
}

bool almost_surely_equal(const Morphism& phi, const Morphism& f, const Morphism& g) {
  if (!(phi.cod() == f.dom()) || !(phi.cod() == g.dom()) || !(f.cod() == g.cod()))
    throw ObjectMismatch("almost_surely_equal: objects do not match");
  auto side = [&](const Morphism& h) {
    Circuit c({{"a", phi.dom()}});
    c.apply(phi, {"a"}, {{"x", phi.cod()}});
    c.copy("x", "x'");
    c.apply(h, {"x"}, {{"y", h.cod()}});
    return c.result({"y", "x'"});
  };
  return side(f) == side(g);
}

}  // namespace mksys
