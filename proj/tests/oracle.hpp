#pragma once

// Reference computations used by the tests. They work on dense tables read
// cell by cell through Morphism::at and never call the library's algebra.

#include <functional>
#include <optional>
#include <vector>

#include "mksys/core/markov.hpp"

namespace oracle {

using mksys::Index;
using mksys::Morphism;
using mksys::Rational;
using Dense = std::vector<std::vector<Rational>>;

inline Dense dense(const Morphism& f) {
  Dense d(f.dom().size(), std::vector<Rational>(f.cod().size()));
  for (Index a = 0; a < d.size(); ++a)
    for (Index c = 0; c < d[a].size(); ++c) d[a][c] = f.at(a, c);
  return d;
}

inline Dense matmul(const Dense& a, const Dense& b) {
  Dense out(a.size(), std::vector<Rational>(b.empty() ? 0 : b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < out[i].size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

inline Dense kron(const Dense& a, const Dense& b) {
  const std::size_t bc = b[0].size();
  Dense out(a.size() * b.size(), std::vector<Rational>(a[0].size() * bc));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < a[i].size(); ++j)
        for (std::size_t l = 0; l < bc; ++l) out[i * b.size() + k][j * bc + l] = a[i][j] * b[k][l];
  return out;
}

// Relational composition on 0/1 tables.
inline Dense relcomp(const Dense& a, const Dense& b) {
  Dense out(a.size(), std::vector<Rational>(b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < out[i].size(); ++j)
          if (b[k][j] != 0) out[i][j] = 1;
  return out;
}

// Bayes quotient of one joint row over X⊗Y laid out x-major; nullopt where
// the x-marginal vanishes.
inline std::vector<std::optional<std::vector<Rational>>> bayes(const std::vector<Rational>& joint, std::size_t nx,
                                                               std::size_t ny) {
  std::vector<std::optional<std::vector<Rational>>> out(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    Rational m = 0;
    for (std::size_t y = 0; y < ny; ++y) m += joint[x * ny + y];
    if (m == 0) continue;
    std::vector<Rational> row(ny);
    for (std::size_t y = 0; y < ny; ++y) row[y] = joint[x * ny + y] / m;
    out[x] = row;
  }
  return out;
}

// p(x,y,z) m(y) = p(x,y) p(y,z) for every cell of a joint laid out x, y, z.
inline bool ci_cells(const std::vector<Rational>& p, std::size_t nx, std::size_t ny, std::size_t nz) {
  auto at = [&](std::size_t x, std::size_t y, std::size_t z) { return p[(x * ny + y) * nz + z]; };
  for (std::size_t y = 0; y < ny; ++y) {
    Rational m = 0;
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t z = 0; z < nz; ++z) m += at(x, y, z);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t z = 0; z < nz; ++z) {
        Rational pxy = 0, pyz = 0;
        for (std::size_t z2 = 0; z2 < nz; ++z2) pxy += at(x, y, z2);
        for (std::size_t x2 = 0; x2 < nx; ++x2) pyz += at(x2, y, z);
        if (at(x, y, z) * m != pxy * pyz) return false;
      }
  }
  return true;
}

inline std::vector<Rational> cumsum(const std::vector<Rational>& row) {
  std::vector<Rational> out{0};
  for (const auto& w : row) out.push_back(out.back() + w);
  return out;
}

// One-step open Markov data read densely: initial over S, update over
// (s, i) -> s', expose s -> o, and an optional input step o -> i.
struct Chain {
  std::vector<Rational> initial;
  Dense update;
  std::vector<Index> expose;
  std::optional<Dense> step;
  std::size_t ns = 1, ni = 1;
};

inline Chain chain(const Morphism& initial, const Morphism& update, const Morphism& expose,
                   const std::optional<Morphism>& step) {
  Chain c;
  c.initial = dense(initial)[0];
  c.update = dense(update);
  c.ns = initial.cod().size();
  c.ni = update.dom().size() / c.ns;
  for (Index s = 0; s < c.ns; ++s)
    for (Index o = 0; o < expose.cod().size(); ++o)
      if (expose.at(s, o) != 0) c.expose.push_back(o);
  if (step) c.step = dense(*step);
  return c;
}

// phi^n by depth-first search over every state path s0..sn and input path;
// the result is indexed by the path, s0 most significant.
inline std::vector<Rational> phi_by_paths(const Chain& c, std::size_t n) {
  std::size_t states = 1;
  for (std::size_t k = 0; k <= n; ++k) states *= c.ns;
  std::vector<Rational> out(states);
  std::function<void(std::size_t, Index, Index, Rational)> go = [&](std::size_t k, Index path, Index last,
                                                                    Rational w) {
    if (w == 0) return;
    if (k == n) {
      out[path] += w;
      return;
    }
    for (Index i = 0; i < c.ni; ++i) {
      const Rational wi = c.step ? (*c.step)[c.expose[last]][i] : Rational(1);
      for (Index s = 0; s < c.ns; ++s) go(k + 1, path * c.ns + s, s, w * wi * c.update[last * c.ni + i][s]);
    }
  };
  for (Index s = 0; s < c.ns; ++s) go(0, s, s, c.initial[s]);
  return out;
}

}  // namespace oracle
