#pragma once

// Static edge-list graphs and their text format: "n m" header, then m lines
// "a b [w]" with 0-based endpoints and optional weight 0/1.

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "omv/bitcore.hpp"

namespace omv {

using Vertex = std::uint32_t;

struct WeightedEdge {
  Vertex a = 0;
  Vertex b = 0;
  std::uint8_t w = 1;
  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

struct EdgeListGraph {
  std::size_t n = 0;
  std::vector<WeightedEdge> edges;

  void add(Vertex a, Vertex b, std::uint8_t w = 1) { edges.push_back({a, b, w}); }
};

// Symmetric adjacency matrix of an undirected simple graph.
inline BoolMatrix adjacency_matrix(const EdgeListGraph& g) {
  BoolMatrix m(g.n, g.n);
  for (const auto& e : g.edges) {
    if (e.a >= g.n || e.b >= g.n) throw dimension_error("edge endpoint out of range");
    if (e.a == e.b) throw dimension_error("self-loops are not allowed");
    m.set(e.a, e.b);
    m.set(e.b, e.a);
  }
  return m;
}

inline EdgeListGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw parse_error("missing graph header", lineno);
  EdgeListGraph g;
  std::size_t m = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> g.n >> m)) throw parse_error("graph header must be 'n m'", lineno);
  }
  for (std::size_t k = 0; k < m; ++k) {
    ++lineno;
    if (!std::getline(in, line)) throw parse_error("missing edge line", lineno);
    std::istringstream ls(line);
    long long a = -1, b = -1, w = 1;
    if (!(ls >> a >> b)) throw parse_error("edge line must be 'a b [w]'", lineno);
    if (!(ls >> w)) w = 1;
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= g.n || static_cast<std::size_t>(b) >= g.n) {
      throw parse_error("edge endpoint out of range", lineno);
    }
    if (w != 0 && w != 1) throw parse_error("edge weight must be 0 or 1", lineno);
    g.add(static_cast<Vertex>(a), static_cast<Vertex>(b), static_cast<std::uint8_t>(w));
  }
  return g;
}

inline void write_graph(std::ostream& out, const EdgeListGraph& g, bool with_weights = false) {
  out << g.n << ' ' << g.edges.size() << '\n';
  for (const auto& e : g.edges) {
    out << e.a << ' ' << e.b;
    if (with_weights) out << ' ' << static_cast<int>(e.w);
    out << '\n';
  }
}

}  // namespace omv
