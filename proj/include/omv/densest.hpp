#pragma once

// Exact densest subgraph: max over nonempty S of |E(S)|/|S|.

#include <set>
#include <utility>
#include <vector>

#include "omv/errors.hpp"
#include "omv/flow.hpp"
#include "omv/graph.hpp"
#include "omv/rational.hpp"

namespace omv {

struct DensestResult {
  Rational density;
  std::vector<Vertex> witness;  // sorted
};

inline Rational subgraph_density(const EdgeListGraph& g, const std::vector<Vertex>& s) {
  if (s.empty()) throw contract_error("density of an empty vertex set");
  std::vector<char> in(g.n, 0);
  for (auto v : s) in[v] = 1;
  std::int64_t e = 0;
  for (const auto& ed : g.edges) e += (in[ed.a] && in[ed.b]) ? 1 : 0;
  return Rational(e, static_cast<std::int64_t>(s.size()));
}

namespace detail {

inline void require_simple(const EdgeListGraph& g) {
  if (g.n == 0) throw contract_error("densest subgraph of an empty graph");
  std::set<std::pair<Vertex, Vertex>> seen;
  for (const auto& e : g.edges) {
    if (e.a >= g.n || e.b >= g.n) throw dimension_error("edge endpoint out of range");
    if (e.a == e.b) throw contract_error("self-loops are not allowed");
    if (!seen.emplace(std::min(e.a, e.b), std::max(e.a, e.b)).second) throw contract_error("parallel edges are not allowed");
  }
}

// Max-closure network (edge nodes worth q, vertex nodes costing p): returns
// the vertex set of a closure maximizing q|E(S)| - p|S|, and that value.
inline std::pair<std::vector<Vertex>, std::int64_t> max_closure(const EdgeListGraph& g, std::int64_t p, std::int64_t q) {
  const std::size_t m = g.edges.size();
  const std::size_t src = 0, sink = 1, edge0 = 2, vert0 = 2 + m;
  MaxFlow f(2 + m + g.n);
  for (std::size_t k = 0; k < m; ++k) {
    f.add_edge(src, edge0 + k, q);
    f.add_edge(edge0 + k, vert0 + g.edges[k].a, MaxFlow::kInfCap);
    f.add_edge(edge0 + k, vert0 + g.edges[k].b, MaxFlow::kInfCap);
  }
  for (std::size_t v = 0; v < g.n; ++v) f.add_edge(vert0 + v, sink, p);
  std::int64_t value = q * static_cast<std::int64_t>(m) - f.run(src, sink);
  auto side = f.source_side(src);
  std::vector<Vertex> s;
  for (std::size_t v = 0; v < g.n; ++v) {
    if (side[vert0 + v]) s.push_back(static_cast<Vertex>(v));
  }
  return {s, value};
}

}  // namespace detail

// Binary search over dyadic densities with a max-closure feasibility test.
// Distinct subgraph densities differ by at least 1/(n(n-1)), so once the
// bracket is narrower than that the last feasible set is optimal.
inline DensestResult densest_subgraph_exact(const EdgeListGraph& g) {
  detail::require_simple(g);
  if (g.edges.empty()) return {Rational(0), {0}};
  const auto n = static_cast<std::int64_t>(g.n);
  const Rational gap(1, n * (n - 1));
  Rational lo(0), hi(n);
  std::vector<Vertex> witness{std::min(g.edges[0].a, g.edges[0].b), std::max(g.edges[0].a, g.edges[0].b)};
  while (hi - lo >= gap) {
    Rational mid = (lo + hi) / Rational(2);
    auto [s, value] = detail::max_closure(g, mid.num(), mid.den());
    if (value > 0) {
      lo = mid;
      witness = std::move(s);
    } else {
      hi = mid;
    }
  }
  return {subgraph_density(g, witness), witness};
}

// Independent reference: Dinkelbach iteration on Goldberg's cut network.
inline DensestResult densest_subgraph_dinkelbach(const EdgeListGraph& g) {
  detail::require_simple(g);
  if (g.edges.empty()) return {Rational(0), {0}};
  const auto n = g.n;
  const auto m = static_cast<std::int64_t>(g.edges.size());
  std::vector<std::int64_t> deg(n, 0);
  for (const auto& e : g.edges) {
    ++deg[e.a];
    ++deg[e.b];
  }
  std::vector<Vertex> best(n);
  for (std::size_t v = 0; v < n; ++v) best[v] = static_cast<Vertex>(v);
  Rational rho = subgraph_density(g, best);
  while (true) {
    const std::int64_t p = rho.num(), q = rho.den();
    const std::size_t src = n, sink = n + 1;
    MaxFlow f(n + 2);
    for (std::size_t v = 0; v < n; ++v) {
      f.add_edge(src, v, m * q);
      f.add_edge(v, sink, m * q + 2 * p - deg[v] * q);
    }
    for (const auto& e : g.edges) f.add_edge(e.a, e.b, q, q);
    std::int64_t cut = f.run(src, sink);
    // cut = mqn + 2(p|S| - q|E(S)|) for the source side S
    if (cut >= m * q * static_cast<std::int64_t>(n)) break;
    auto side = f.source_side(src);
    std::vector<Vertex> s;
    for (std::size_t v = 0; v < n; ++v) {
      if (side[v]) s.push_back(static_cast<Vertex>(v));
    }
    auto next = subgraph_density(g, s);
    if (next <= rho) break;
    rho = next;
    best = std::move(s);
  }
  return {rho, best};
}

}  // namespace omv
