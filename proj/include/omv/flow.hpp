#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace omv {

// Dinic maximum flow with 64-bit capacities.
class MaxFlow {
 public:
  using Cap = std::int64_t;
  static constexpr Cap kInfCap = std::numeric_limits<Cap>::max() / 4;

  explicit MaxFlow(std::size_t n) : adj_(n), level_(n), it_(n) {}

  std::size_t add_node() {
    adj_.emplace_back();
    level_.push_back(0);
    it_.push_back(0);
    return adj_.size() - 1;
  }

  void add_edge(std::size_t a, std::size_t b, Cap cap, Cap reverse_cap = 0) {
    adj_[a].push_back({b, adj_[b].size(), cap});
    adj_[b].push_back({a, adj_[a].size() - 1, reverse_cap});
  }

  Cap run(std::size_t s, std::size_t t) {
    Cap flow = 0;
    while (build_levels(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (Cap f = push(s, t, kInfCap)) flow += f;
    }
    return flow;
  }

  // Vertices reachable from s in the residual graph after run().
  std::vector<char> source_side(std::size_t s) const {
    std::vector<char> seen(adj_.size(), 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (const auto& e : adj_[v]) {
        if (e.cap > 0 && !seen[e.to]) {
          seen[e.to] = 1;
          stack.push_back(e.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Edge {
    std::size_t to;
    std::size_t rev;
    Cap cap;
  };

  bool build_levels(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      auto v = q.front();
      q.pop();
      for (const auto& e : adj_[v]) {
        if (e.cap > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[v] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  Cap push(std::size_t v, std::size_t t, Cap limit) {
    if (v == t) return limit;
    for (auto& i = it_[v]; i < adj_[v].size(); ++i) {
      auto& e = adj_[v][i];
      if (e.cap <= 0 || level_[e.to] != level_[v] + 1) continue;
      if (Cap f = push(e.to, t, std::min(limit, e.cap))) {
        e.cap -= f;
        adj_[e.to][e.rev].cap += f;
        return f;
      }
    }
    return 0;
  }

  std::vector<std::vector<Edge>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

}  // namespace omv
