#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <unordered_map>
#include <vector>

#include "omv/errors.hpp"
#include "omv/graph.hpp"

namespace omv {

inline constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

// Simple graph (undirected or directed) under edge insertions/deletions, with
// {0,1} edge weights and per-vertex active flags.
class DynGraph {
 public:
  DynGraph() = default;
  explicit DynGraph(std::size_t n, bool directed = false)
      : directed_(directed), out_(n), in_(directed ? n : 0), active_(n, 1) {}

  static DynGraph from(const EdgeListGraph& g, bool directed = false) {
    DynGraph d(g.n, directed);
    for (const auto& e : g.edges) d.insert_edge(e.a, e.b, e.w);
    return d;
  }

  std::size_t order() const noexcept { return out_.size(); }
  std::size_t edge_count() const noexcept { return weights_.size(); }
  bool directed() const noexcept { return directed_; }

  Vertex add_vertex() {
    out_.emplace_back();
    if (directed_) in_.emplace_back();
    active_.push_back(1);
    return static_cast<Vertex>(out_.size() - 1);
  }

  void check_vertex(Vertex v) const {
    if (v >= out_.size()) throw dimension_error("unknown vertex " + std::to_string(v));
  }

  bool has_edge(Vertex a, Vertex b) const {
    check_vertex(a);
    check_vertex(b);
    return weights_.count(key(a, b)) != 0;
  }

  std::uint8_t weight(Vertex a, Vertex b) const {
    auto it = weights_.find(key(a, b));
    if (it == weights_.end()) throw contract_error("no such edge");
    return it->second;
  }

  void insert_edge(Vertex a, Vertex b, std::uint8_t w = 1) {
    check_vertex(a);
    check_vertex(b);
    if (a == b) throw contract_error("self-loops are not allowed");
    if (w > 1) throw contract_error("edge weights must be 0 or 1");
    if (!weights_.emplace(key(a, b), w).second) throw contract_error("duplicate edge insertion");
    out_[a].push_back(b);
    if (directed_) {
      in_[b].push_back(a);
    } else {
      out_[b].push_back(a);
    }
  }

  void delete_edge(Vertex a, Vertex b) {
    check_vertex(a);
    check_vertex(b);
    if (weights_.erase(key(a, b)) == 0) throw contract_error("deleting a missing edge");
    erase_from(out_[a], b);
    if (directed_) {
      erase_from(in_[b], a);
    } else {
      erase_from(out_[b], a);
    }
  }

  // Neighbors (undirected) or out-neighbors (directed).
  const std::vector<Vertex>& out(Vertex v) const { return out_[v]; }
  const std::vector<Vertex>& in(Vertex v) const { return directed_ ? in_[v] : out_[v]; }

  bool active(Vertex v) const { return active_[v] != 0; }
  void set_active(Vertex v, bool on) {
    check_vertex(v);
    active_[v] = on ? 1 : 0;
  }

  std::vector<WeightedEdge> edges() const {
    std::vector<WeightedEdge> es;
    es.reserve(weights_.size());
    for (const auto& [k, w] : weights_) {
      es.push_back({static_cast<Vertex>(k >> 32), static_cast<Vertex>(k & 0xffffffffu), w});
    }
    std::sort(es.begin(), es.end(), [](const auto& x, const auto& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
    return es;
  }

 private:
  std::uint64_t key(Vertex a, Vertex b) const noexcept {
    if (!directed_ && a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  static void erase_from(std::vector<Vertex>& list, Vertex x) {
    auto it = std::find(list.begin(), list.end(), x);
    *it = list.back();
    list.pop_back();
  }

  bool directed_ = false;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
  std::vector<char> active_;
  std::unordered_map<std::uint64_t, std::uint8_t> weights_;
};

// Hop distances from s over active vertices, following out-edges.
inline std::vector<std::uint32_t> bfs_levels(const DynGraph& g, Vertex s) {
  std::vector<std::uint32_t> dist(g.order(), kInf);
  if (!g.active(s)) return dist;
  std::deque<Vertex> q{s};
  dist[s] = 0;
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop_front();
    for (Vertex w : g.out(v)) {
      if (dist[w] == kInf && g.active(w)) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
    }
  }
  return dist;
}

// Weighted distances from s with {0,1} weights (deque relaxation).
inline std::vector<std::uint32_t> zero_one_bfs(const DynGraph& g, Vertex s) {
  std::vector<std::uint32_t> dist(g.order(), kInf);
  std::deque<Vertex> q{s};
  dist[s] = 0;
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop_front();
    for (Vertex w : g.out(v)) {
      std::uint32_t wt = g.weight(v, w);
      if (dist[v] + wt < dist[w]) {
        dist[w] = dist[v] + wt;
        if (wt == 0) {
          q.push_front(w);
        } else {
          q.push_back(w);
        }
      }
    }
  }
  return dist;
}

inline Dist to_dist(std::uint32_t d) { return d == kInf ? Dist() : Dist(d); }

// Edge-relaxation distances (Bellman-Ford style), used as an independent
// recompute reference for the BFS-based oracles.
inline std::vector<std::uint32_t> relaxation_distances(const DynGraph& g, Vertex s) {
  std::vector<std::uint32_t> dist(g.order(), kInf);
  if (!g.active(s)) return dist;
  dist[s] = 0;
  auto es = g.edges();
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : es) {
      if (!g.active(e.a) || !g.active(e.b)) continue;
      if (dist[e.a] != kInf && dist[e.a] + e.w < dist[e.b]) {
        dist[e.b] = dist[e.a] + e.w;
        changed = true;
      }
      if (!g.directed() && dist[e.b] != kInf && dist[e.b] + e.w < dist[e.a]) {
        dist[e.a] = dist[e.b] + e.w;
        changed = true;
      }
    }
  }
  return dist;
}

}  // namespace omv
