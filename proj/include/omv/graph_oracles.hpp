#pragma once

// Reference oracles for the dynamic graph problems. Each one answers queries
// by a direct search and exposes an uncounted recompute_* reference built on
// a different method.

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <vector>

#include "omv/bitcore.hpp"
#include "omv/counted.hpp"
#include "omv/densest.hpp"
#include "omv/dyngraph.hpp"
#include "omv/flow.hpp"

namespace omv {

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

inline bool components_connected(const DynGraph& g, Vertex s, Vertex t) {
  if (!g.active(s) || !g.active(t)) return false;
  UnionFind uf(g.order());
  for (const auto& e : g.edges()) {
    if (g.active(e.a) && g.active(e.b)) uf.unite(e.a, e.b);
  }
  return uf.find(s) == uf.find(t);
}

inline EdgeListGraph to_edge_list(const DynGraph& g) {
  EdgeListGraph el;
  el.n = g.order();
  el.edges = g.edges();
  return el;
}

}  // namespace detail

struct GraphState {
  DynGraph g;
};

// Vertex on/off toggles; connectivity inside the subgraph induced by the
// active vertices.
class SubgraphConnectivityOracle : public CountedOracle<GraphState> {
 public:
  explicit SubgraphConnectivityOracle(DynGraph g) { st_.g = std::move(g); }

  void turn_on(Vertex v) { toggle(v, true); }
  void turn_off(Vertex v) { toggle(v, false); }

  bool connected(Vertex s, Vertex t) {
    st_.g.check_vertex(s);
    st_.g.check_vertex(t);
    return deliver(bfs_levels(st_.g, s)[t] != kInf, [&] { return recompute_connected(s, t); });
  }
  bool connected_from(Vertex s, Vertex v) { return connected(s, v); }

  bool recompute_connected(Vertex s, Vertex t) const { return detail::components_connected(st_.g, s, t); }
  bool is_on(Vertex v) const { return st_.g.active(v); }
  const DynGraph& graph() const { return st_.g; }

 private:
  void toggle(Vertex v, bool on) {
    st_.g.check_vertex(v);
    if (st_.g.active(v) == on) throw contract_error(on ? "vertex already on" : "vertex already off");
    st_.g.set_active(v, on);
    count_update();
  }
};

// Unit-weight shortest paths (undirected) or reachability (directed) by BFS.
class DistanceOracle : public CountedOracle<GraphState> {
 public:
  explicit DistanceOracle(DynGraph g) { st_.g = std::move(g); }

  void insert_edge(Vertex a, Vertex b) {
    st_.g.insert_edge(a, b);
    count_update();
  }
  void delete_edge(Vertex a, Vertex b) {
    st_.g.delete_edge(a, b);
    count_update();
  }

  Dist dist(Vertex s, Vertex t) {
    st_.g.check_vertex(s);
    st_.g.check_vertex(t);
    return deliver(to_dist(bfs_levels(st_.g, s)[t]), [&] { return recompute_dist(s, t); });
  }
  bool reach(Vertex s, Vertex t) {
    st_.g.check_vertex(s);
    st_.g.check_vertex(t);
    return deliver(bfs_levels(st_.g, s)[t] != kInf, [&] { return recompute_dist(s, t).has_value(); });
  }

  Dist recompute_dist(Vertex s, Vertex t) const { return to_dist(relaxation_distances(st_.g, s)[t]); }
  const DynGraph& graph() const { return st_.g; }
};

// Decremental single-source distances (Even-Shiloach). Levels are lower
// bounds on the true distance that only increase; n stands for unreachable.
struct EvenShiloachState {
  DynGraph g;
  Vertex source = 0;
  std::vector<std::uint32_t> level;
};

class EvenShiloachOracle : public CountedOracle<EvenShiloachState> {
 public:
  EvenShiloachOracle() = default;
  EvenShiloachOracle(DynGraph g, Vertex source) {
    if (g.directed()) throw contract_error("Even-Shiloach oracle expects an undirected graph");
    g.check_vertex(source);
    st_.g = std::move(g);
    st_.source = source;
    auto d = bfs_levels(st_.g, source);
    const auto n = static_cast<std::uint32_t>(st_.g.order());
    st_.level.resize(n);
    for (std::size_t v = 0; v < n; ++v) st_.level[v] = d[v] == kInf ? n : d[v];
  }

  void insert_edge(Vertex, Vertex) { throw contract_error("insertions are not allowed in a decremental structure"); }

  void delete_edge(Vertex a, Vertex b) {
    st_.g.delete_edge(a, b);
    count_update();
    repair({a, b});
  }

  Dist dist(Vertex v) {
    st_.g.check_vertex(v);
    auto l = st_.level[v];
    return deliver(l >= st_.g.order() ? Dist() : Dist(l), [&] { return recompute_dist(v); });
  }

  Dist recompute_dist(Vertex v) const { return to_dist(bfs_levels(st_.g, st_.source)[v]); }
  std::uint32_t level(Vertex v) const { return st_.level[v]; }
  Vertex source() const noexcept { return st_.source; }
  const DynGraph& graph() const { return st_.g; }

 private:
  void repair(std::initializer_list<Vertex> seeds) {
    auto& g = st_.g;
    auto& level = st_.level;
    const auto n = static_cast<std::uint32_t>(g.order());
    std::vector<char> queued(n, 0);
    std::deque<Vertex> q;
    for (auto v : seeds) {
      if (!queued[v]) {
        queued[v] = 1;
        q.push_back(v);
      }
    }
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      queued[v] = 0;
      if (v == st_.source || level[v] >= n) continue;
      std::uint32_t best = n;
      for (Vertex w : g.out(v)) best = std::min(best, level[w] + 1);
      best = std::min(best, n);
      if (best <= level[v]) continue;
      std::uint32_t old = level[v];
      level[v] = best;
      for (Vertex w : g.out(v)) {
        if (level[w] > old && !queued[w]) {
          queued[w] = 1;
          q.push_back(w);
        }
      }
    }
  }
};

class TriangleOracle : public CountedOracle<GraphState> {
 public:
  explicit TriangleOracle(DynGraph g) { st_.g = std::move(g); }

  void insert_edge(Vertex a, Vertex b) {
    st_.g.insert_edge(a, b);
    count_update();
  }
  void delete_edge(Vertex a, Vertex b) {
    st_.g.delete_edge(a, b);
    count_update();
  }

  // Is there a triangle containing s?
  bool triangle_at(Vertex s) {
    st_.g.check_vertex(s);
    return deliver(scan_at(s), [&] { return recompute_triangle_at(s); });
  }
  bool has_triangle() {
    bool found = false;
    for (const auto& e : st_.g.edges()) {
      if (scan_at(e.a)) {
        found = true;
        break;
      }
    }
    return deliver(found, [&] { return recompute_has_triangle(); });
  }

  bool recompute_triangle_at(Vertex s) const {
    auto a = adjacency_matrix(detail::to_edge_list(st_.g));
    bool hit = false;
    a.row(s).for_each_set([&](std::size_t x) { hit = hit || a.row(x).intersects(a.row(s)); });
    return hit;
  }
  bool recompute_has_triangle() const {
    auto a = adjacency_matrix(detail::to_edge_list(st_.g));
    for (std::size_t s = 0; s < a.rows(); ++s) {
      bool hit = false;
      a.row(s).for_each_set([&](std::size_t x) { hit = hit || a.row(x).intersects(a.row(s)); });
      if (hit) return true;
    }
    return false;
  }
  const DynGraph& graph() const { return st_.g; }

 private:
  bool scan_at(Vertex s) const {
    const auto& nb = st_.g.out(s);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (st_.g.has_edge(nb[i], nb[j])) return true;
      }
    }
    return false;
  }
};

struct ColoredGraphState {
  DynGraph g;
  std::vector<std::uint32_t> color;
};

// Distance from a vertex to the nearest vertex of a given color.
class ColorDistanceOracle : public CountedOracle<ColoredGraphState> {
 public:
  ColorDistanceOracle(DynGraph g, std::vector<std::uint32_t> colors) {
    if (colors.size() != g.order()) throw dimension_error("one color per vertex required");
    st_.g = std::move(g);
    st_.color = std::move(colors);
  }

  void insert_edge(Vertex a, Vertex b) {
    st_.g.insert_edge(a, b);
    count_update();
  }
  void delete_edge(Vertex a, Vertex b) {
    st_.g.delete_edge(a, b);
    count_update();
  }
  void set_color(Vertex v, std::uint32_t c) {
    st_.g.check_vertex(v);
    st_.color[v] = c;
    count_update();
  }

  Dist dist_to_color(Vertex s, std::uint32_t c) {
    st_.g.check_vertex(s);
    auto d = bfs_levels(st_.g, s);
    std::uint32_t best = kInf;
    for (std::size_t v = 0; v < d.size(); ++v) {
      if (st_.color[v] == c) best = std::min(best, d[v]);
    }
    return deliver(to_dist(best), [&] { return recompute_dist_to_color(s, c); });
  }

  Dist recompute_dist_to_color(Vertex s, std::uint32_t c) const {
    auto d = relaxation_distances(st_.g, s);
    std::uint32_t best = kInf;
    for (std::size_t v = 0; v < d.size(); ++v) {
      if (st_.color[v] == c) best = std::min(best, d[v]);
    }
    return to_dist(best);
  }
  std::uint32_t color(Vertex v) const { return st_.color[v]; }
  const DynGraph& graph() const { return st_.g; }
};

// Each update rolls the graph back to the original and removes a batch of at
// most d vertices.
class DFailureOracle : public CountedOracle<GraphState> {
 public:
  DFailureOracle(DynGraph g, std::size_t d) : original_(g), d_(d) { st_.g = std::move(g); }

  void fail(const std::vector<Vertex>& batch) {
    if (batch.size() > d_) throw contract_error("failure batch larger than d");
    for (auto v : batch) st_.g.check_vertex(v);
    st_.g = original_;
    for (auto v : batch) st_.g.set_active(v, false);
    count_update();
  }
  void restore() { st_.g = original_; }

  bool connected(Vertex s, Vertex t) {
    st_.g.check_vertex(s);
    st_.g.check_vertex(t);
    return deliver(bfs_levels(st_.g, s)[t] != kInf, [&] { return recompute_connected(s, t); });
  }

  bool recompute_connected(Vertex s, Vertex t) const { return detail::components_connected(st_.g, s, t); }
  std::size_t d() const noexcept { return d_; }
  const DynGraph& graph() const { return st_.g; }

 private:
  DynGraph original_;
  std::size_t d_;
};

struct MatchingState {
  DynGraph g;
  std::vector<Vertex> mate;  // kInf-free: order() means unmatched
};

// Maximum bipartite matching kept maximum after every update by augmenting
// from the previous matching.
class MatchingOracle : public CountedOracle<MatchingState> {
 public:
  // right_side[v] = 1 for vertices on the right.
  MatchingOracle(DynGraph g, std::vector<char> right_side) : right_(std::move(right_side)) {
    if (g.directed()) throw contract_error("matching oracle expects an undirected graph");
    if (right_.size() != g.order()) throw dimension_error("one side flag per vertex required");
    for (const auto& e : g.edges()) check_bipartite(e.a, e.b);
    st_.g = std::move(g);
    st_.mate.assign(st_.g.order(), unmatched());
    augment_all();
  }

  void insert_edge(Vertex a, Vertex b) {
    st_.g.check_vertex(a);
    st_.g.check_vertex(b);
    check_bipartite(a, b);
    st_.g.insert_edge(a, b);
    count_update();
    augment_all();
  }
  void delete_edge(Vertex a, Vertex b) {
    st_.g.delete_edge(a, b);
    count_update();
    if (st_.mate[a] == b) {
      st_.mate[a] = unmatched();
      st_.mate[b] = unmatched();
      augment_all();
    }
  }

  std::size_t size() {
    return deliver(matched_edges(), [&] { return recompute_size(); });
  }

  std::size_t recompute_size() const {
    const std::size_t n = st_.g.order();
    MaxFlow f(n + 2);
    for (std::size_t v = 0; v < n; ++v) {
      if (right_[v]) {
        f.add_edge(v, n + 1, 1);
      } else {
        f.add_edge(n, v, 1);
      }
    }
    for (const auto& e : st_.g.edges()) {
      if (right_[e.a]) {
        f.add_edge(e.b, e.a, 1);
      } else {
        f.add_edge(e.a, e.b, 1);
      }
    }
    return static_cast<std::size_t>(f.run(n, n + 1));
  }
  Vertex mate(Vertex v) const { return st_.mate[v]; }
  bool is_matched(Vertex v) const { return st_.mate[v] != unmatched(); }
  const DynGraph& graph() const { return st_.g; }

 private:
  Vertex unmatched() const { return static_cast<Vertex>(st_.g.order()); }

  void check_bipartite(Vertex a, Vertex b) const {
    if (right_[a] == right_[b]) throw contract_error("edge inside one side of the bipartition");
  }

  std::size_t matched_edges() const {
    std::size_t k = 0;
    for (std::size_t v = 0; v < st_.mate.size(); ++v) k += (!right_[v] && st_.mate[v] != unmatched()) ? 1 : 0;
    return k;
  }

  bool try_kuhn(Vertex l, std::vector<char>& seen) {
    for (Vertex r : st_.g.out(l)) {
      if (seen[r]) continue;
      seen[r] = 1;
      if (st_.mate[r] == unmatched() || try_kuhn(st_.mate[r], seen)) {
        st_.mate[l] = r;
        st_.mate[r] = l;
        return true;
      }
    }
    return false;
  }

  void augment_all() {
    const std::size_t n = st_.g.order();
    for (bool grew = true; grew;) {
      grew = false;
      std::vector<char> seen(n, 0);
      for (std::size_t v = 0; v < n && !grew; ++v) {
        if (!right_[v] && st_.mate[v] == unmatched()) grew = try_kuhn(static_cast<Vertex>(v), seen);
      }
    }
  }

  std::vector<char> right_;
};

// Diameter of a {0,1}-weighted undirected graph; absent when disconnected.
class DiameterOracle : public CountedOracle<GraphState> {
 public:
  explicit DiameterOracle(DynGraph g) {
    if (g.directed()) throw contract_error("diameter oracle expects an undirected graph");
    st_.g = std::move(g);
  }

  void insert_edge(Vertex a, Vertex b, std::uint8_t w) {
    st_.g.insert_edge(a, b, w);
    count_update();
  }
  void delete_edge(Vertex a, Vertex b) {
    st_.g.delete_edge(a, b);
    count_update();
  }

  Dist diameter() {
    std::uint32_t best = 0;
    for (std::size_t s = 0; s < st_.g.order() && best != kInf; ++s) {
      auto d = zero_one_bfs(st_.g, static_cast<Vertex>(s));
      best = std::max(best, *std::max_element(d.begin(), d.end()));
    }
    return deliver(to_dist(best), [&] { return recompute_diameter(); });
  }

  // Dijkstra from every vertex.
  Dist recompute_diameter() const {
    const std::size_t n = st_.g.order();
    std::uint32_t best = 0;
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::uint32_t> d(n, kInf);
      using Item = std::pair<std::uint32_t, Vertex>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      d[s] = 0;
      pq.emplace(0, static_cast<Vertex>(s));
      while (!pq.empty()) {
        auto [dv, v] = pq.top();
        pq.pop();
        if (dv != d[v]) continue;
        for (Vertex w : st_.g.out(v)) {
          auto nd = dv + st_.g.weight(v, w);
          if (nd < d[w]) {
            d[w] = nd;
            pq.emplace(nd, w);
          }
        }
      }
      best = std::max(best, *std::max_element(d.begin(), d.end()));
    }
    return to_dist(best);
  }
  const DynGraph& graph() const { return st_.g; }
};

// Directed reachability.
class TransitiveClosureOracle : public CountedOracle<GraphState> {
 public:
  explicit TransitiveClosureOracle(DynGraph g) {
    if (!g.directed()) throw contract_error("transitive closure oracle expects a directed graph");
    st_.g = std::move(g);
  }

  void insert_edge(Vertex a, Vertex b) {
    st_.g.insert_edge(a, b);
    count_update();
  }
  void delete_edge(Vertex a, Vertex b) {
    st_.g.delete_edge(a, b);
    count_update();
  }

  bool reachable(Vertex u, Vertex v) {
    st_.g.check_vertex(u);
    st_.g.check_vertex(v);
    return deliver(bfs_levels(st_.g, u)[v] != kInf, [&] { return recompute_reachable(u, v); });
  }

  // Warshall closure over bit rows.
  bool recompute_reachable(Vertex u, Vertex v) const {
    const std::size_t n = st_.g.order();
    BoolMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i) r.set(i, i);
    for (const auto& e : st_.g.edges()) r.set(e.a, e.b);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        if (r.get(i, k)) r.row(i) |= BoolVector(r.row(k));
      }
    }
    return r.get(u, v);
  }
  const DynGraph& graph() const { return st_.g; }
};

class DensestSubgraphOracle : public CountedOracle<GraphState> {
 public:
  explicit DensestSubgraphOracle(DynGraph g) {
    if (g.directed()) throw contract_error("densest subgraph oracle expects an undirected graph");
    if (g.order() == 0) throw contract_error("densest subgraph of an empty graph");
    st_.g = std::move(g);
  }

  void insert_edge(Vertex a, Vertex b) {
    st_.g.insert_edge(a, b);
    count_update();
  }
  void delete_edge(Vertex a, Vertex b) {
    st_.g.delete_edge(a, b);
    count_update();
  }

  Rational densest() {
    auto r = densest_subgraph_exact(detail::to_edge_list(st_.g));
    last_witness_ = r.witness;
    return deliver(r.density, [&] { return recompute_densest(); });
  }

  Rational recompute_densest() const { return densest_subgraph_dinkelbach(detail::to_edge_list(st_.g)).density; }
  const std::vector<Vertex>& last_witness() const noexcept { return last_witness_; }
  const DynGraph& graph() const { return st_.g; }

 private:
  std::vector<Vertex> last_witness_;
};

}  // namespace omv
