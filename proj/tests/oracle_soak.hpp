#pragma once

// Random operation scripts against each dynamic oracle. After every
// operation one query is compared with the oracle's from-scratch recompute.

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "omv/dynoracles.hpp"

namespace omv::test {

struct SoakResult {
  std::size_t ops = 0;
  std::size_t mismatches = 0;
  std::size_t monotonic_violations = 0;
};

namespace soak_detail {

inline DynGraph random_graph(std::mt19937_64& rng, std::size_t n, unsigned percent, bool directed = false) {
  DynGraph g(n, directed);
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = directed ? 0 : a + 1; b < n; ++b) {
      if (a != b && rng() % 100 < percent) g.insert_edge(a, b);
    }
  }
  return g;
}

inline Vertex pick(std::mt19937_64& rng, std::size_t n) { return static_cast<Vertex>(rng() % n); }

// Toggle a random pair: delete it if present, insert it otherwise.
template <class Oracle, class Insert>
void flip_edge(Oracle& o, std::mt19937_64& rng, std::size_t n, Insert insert) {
  Vertex a = pick(rng, n), b = pick(rng, n);
  while (a == b) b = pick(rng, n);
  if (o.graph().has_edge(a, b)) {
    o.delete_edge(a, b);
  } else {
    insert(a, b);
  }
}

// Occasional snapshot/rollback pairs keep the restore path under test.
template <class Oracle>
void maybe_snapshot(Oracle& o, std::mt19937_64& rng) {
  auto r = rng() % 100;
  if (r < 2) {
    o.snapshot();
  } else if (r < 4 && o.snapshot_depth() > 0) {
    o.rollback();
  }
}

}  // namespace soak_detail

inline SoakResult soak_subgraph_connectivity(std::uint64_t seed, std::size_t ops) {
  using namespace soak_detail;
  std::mt19937_64 rng(seed);
  const std::size_t n = 48;
  SubgraphConnectivityOracle o(random_graph(rng, n, 5));
  SoakResult r;
  for (; r.ops < ops; ++r.ops) {
    Vertex v = pick(rng, n);
    if (o.is_on(v)) {
      o.turn_off(v);
    } else {
      o.turn_on(v);
    }
    maybe_snapshot(o, rng);
    Vertex s = pick(rng, n), t = pick(rng, n);
    if (o.connected(s, t) != o.recompute_connected(s, t)) ++r.mismatches;
  }
  return r;
}

inline SoakResult soak_distance(std::uint64_t seed, std::size_t ops, bool directed) {
  using namespace soak_detail;
  std::mt19937_64 rng(seed);
  const std::size_t n = 40;
  DistanceOracle o(random_graph(rng, n, 6, directed));
  SoakResult r;
  for (; r.ops < ops; ++r.ops) {
    flip_edge(o, rng, n, [&](Vertex a, Vertex b) { o.insert_edge(a, b); });
    maybe_snapshot(o, rng);
    Vertex s = pick(rng, n), t = pick(rng, n);
    Dist d = o.dist(s, t);
    if (d != o.recompute_dist(s, t)) ++r.mismatches;
    if (o.reach(s, t) != d.has_value()) ++r.mismatches;
  }
  return r;
}

// Deletes edges of K_64 one at a time; levels must never decrease.
inline SoakResult soak_even_shiloach(std::uint64_t seed, std::size_t ops) {
  using namespace soak_detail;
  std::mt19937_64 rng(seed);
  const std::size_t n = 64;
  auto g = random_graph(rng, n, 100);
  auto edges = g.edges();
  std::shuffle(edges.begin(), edges.end(), rng);
  EvenShiloachOracle o(std::move(g), 0);
  std::vector<std::uint32_t> prev(n);
  for (Vertex v = 0; v < n; ++v) prev[v] = o.level(v);
  SoakResult r;
  for (; r.ops < ops && r.ops < edges.size(); ++r.ops) {
    o.delete_edge(edges[r.ops].a, edges[r.ops].b);
    for (Vertex v = 0; v < n; ++v) {
      if (o.level(v) < prev[v]) ++r.monotonic_violations;
      prev[v] = o.level(v);
    }
    Vertex v = pick(rng, n);
    if (o.dist(v) != o.recompute_dist(v)) ++r.mismatches;
  }
  return r;
}

inline SoakResult soak_triangle(std::uint64_t seed, std::size_t ops) {
  using namespace soak_detail;
  std::mt19937_64 rng(seed);
  const std::size_t n = 30;
  TriangleOracle o(random_graph(rng, n, 4));
  SoakResult r;
  for (; r.ops < ops; ++r.ops) {
    flip_edge(o, rng, n, [&](Vertex a, Vertex b) { o.insert_edge(a, b); });
    maybe_snapshot(o, rng);
    Vertex s = pick(rng, n);
    if (o.triangle_at(s) != o.recompute_triangle_at(s)) ++r.mismatches;
    if (o.has_triangle() != o.recompute_has_triangle()) ++r.mismatches;
  }
  return r;
}

inline SoakResult soak_color(std::uint64_t seed, std::size_t ops) {
  using namespace soak_detail;
  std::mt19937_64 rng(seed);
  const std::size_t n = 40, colors = 5;
  std::vector<std::uint32_t> c(n);
  for (auto& x : c) x = static_cast<std::uint32_t>(rng() % colors);
  ColorDistanceOracle o(random_graph(rng, n, 6), c);
  SoakResult r;
  for (; r.ops < ops; ++r.ops) {
    if (rng() % 3 == 0) {
      o.set_color(pick(rng, n), static_cast<std::uint32_t>(rng() % colors));
    } else {
      flip_edge(o, rng, n, [&](Vertex a, Vertex b) { o.insert_edge(a, b); });
    }
    maybe_snapshot(o, rng);
    Vertex s = pick(rng, n);
    auto col = static_cast<std::uint32_t>(rng() % (colors + 1));
    if (o.dist_to_color(s, col) != o.recompute_dist_to_color(s, col)) ++r.mismatches;
  }
  return r;
}

inline SoakResult soak_dfailure(std::uint64_t seed, std::size_t ops) {
  using namespace soak_detail;
  std::mt19937_64 rng(seed);
  const std::size_t n = 40, d = 8;
  DFailureOracle o(random_graph(rng, n, 8), d);
  SoakResult r;
  for (; r.ops < ops; ++r.ops) {
    if (rng() % 4 == 0) {
      o.restore();
    } else {
      std::vector<Vertex> batch;
      auto k = rng() % (d + 1);
      for (std::size_t x = 0; x < k; ++x) {
        Vertex v = pick(rng, n);
        if (std::find(batch.begin(), batch.end(), v) == batch.end()) batch.push_back(v);
      }
      o.fail(batch);
    }
    Vertex s = pick(rng, n), t = pick(rng, n);
    if (o.connected(s, t) != o.recompute_connected(s, t)) ++r.mismatches;
  }
  return r;
}

inline SoakResult soak_matching(std::uint64_t seed, std::size_t ops) {
  using namespace soak_detail;
  std::mt19937_64 rng(seed);
  const std::size_t half = 24, n = 2 * half;
  std::vector<char> right(n, 0);
  for (std::size_t v = half; v < n; ++v) right[v] = 1;
  DynGraph g(n);
  for (Vertex a = 0; a < half; ++a) {
    for (Vertex b = half; b < n; ++b) {
      if (rng() % 100 < 8) g.insert_edge(a, b);
    }
  }
  MatchingOracle o(std::move(g), right);
  SoakResult r;
  for (; r.ops < ops; ++r.ops) {
    Vertex a = pick(rng, half), b = static_cast<Vertex>(half + pick(rng, half));
    if (o.graph().has_edge(a, b)) {
      o.delete_edge(a, b);
    } else {
      o.insert_edge(a, b);
    }
    maybe_snapshot(o, rng);
    if (o.size() != o.recompute_size()) ++r.mismatches;
  }
  return r;
}

inline SoakResult soak_diameter(std::uint64_t seed, std::size_t ops) {
  using namespace soak_detail;
  std::mt19937_64 rng(seed);
  const std::size_t n = 24;
  DynGraph g(n);
  for (Vertex v = 0; v + 1 < n; ++v) g.insert_edge(v, v + 1, static_cast<std::uint8_t>(rng() % 2));
  DiameterOracle o(std::move(g));
  SoakResult r;
  for (; r.ops < ops; ++r.ops) {
    flip_edge(o, rng, n, [&](Vertex a, Vertex b) { o.insert_edge(a, b, static_cast<std::uint8_t>(rng() % 2)); });
    maybe_snapshot(o, rng);
    if (o.diameter() != o.recompute_diameter()) ++r.mismatches;
  }
  return r;
}

inline SoakResult soak_transitive_closure(std::uint64_t seed, std::size_t ops) {
  using namespace soak_detail;
  std::mt19937_64 rng(seed);
  const std::size_t n = 40;
  TransitiveClosureOracle o(random_graph(rng, n, 3, true));
  SoakResult r;
  for (; r.ops < ops; ++r.ops) {
    flip_edge(o, rng, n, [&](Vertex a, Vertex b) { o.insert_edge(a, b); });
    maybe_snapshot(o, rng);
    Vertex s = pick(rng, n), t = pick(rng, n);
    if (o.reachable(s, t) != o.recompute_reachable(s, t)) ++r.mismatches;
  }
  return r;
}

inline SoakResult soak_densest(std::uint64_t seed, std::size_t ops) {
  using namespace soak_detail;
  std::mt19937_64 rng(seed);
  const std::size_t n = 12;
  DensestSubgraphOracle o(random_graph(rng, n, 30));
  SoakResult r;
  for (; r.ops < ops; ++r.ops) {
    flip_edge(o, rng, n, [&](Vertex a, Vertex b) { o.insert_edge(a, b); });
    maybe_snapshot(o, rng);
    if (o.densest() != o.recompute_densest()) ++r.mismatches;
  }
  return r;
}

inline SoakResult soak_pagh(std::uint64_t seed, std::size_t ops) {
  std::mt19937_64 rng(seed);
  const std::size_t universe = 40, base = 12;
  std::vector<BoolVector> family;
  for (std::size_t k = 0; k < base; ++k) {
    BoolVector x(universe);
    for (std::size_t e = 0; e < universe; ++e) x.set(e, rng() % 100 < 85);
    family.push_back(std::move(x));
  }
  PaghOracle o(universe, family);
  SoakResult r;
  for (; r.ops < ops; ++r.ops) {
    auto f = o.family_size();
    if (rng() % 10 == 0) o.snapshot();
    if (rng() % 10 == 0 && o.snapshot_depth() > 0) o.rollback();
    f = o.family_size();
    auto idx = o.insert_intersection(rng() % f, rng() % f);
    auto x = rng() % universe;
    if (o.member(idx, x) != o.recompute_member(idx, x)) ++r.mismatches;
    auto other = rng() % o.family_size();
    if (o.member(other, x) != o.recompute_member(other, x)) ++r.mismatches;
  }
  return r;
}

inline SoakResult soak_zero_prefix(std::uint64_t seed, std::size_t ops) {
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> a(50);
  for (auto& x : a) x = static_cast<std::int64_t>(rng() % 7) - 3;
  ZeroPrefixOracle o(a);
  SoakResult r;
  for (; r.ops < ops; ++r.ops) {
    o.set(rng() % o.size(), static_cast<std::int64_t>(rng() % 7) - 3);
    soak_detail::maybe_snapshot(o, rng);
    if (o.has_zero_prefix() != o.recompute_has_zero_prefix()) ++r.mismatches;
  }
  return r;
}

inline SoakResult soak_erickson(std::uint64_t seed, std::size_t ops) {
  std::mt19937_64 rng(seed);
  const std::size_t rows = 10, cols = 12;
  std::vector<std::int64_t> cells(rows * cols);
  for (auto& x : cells) x = static_cast<std::int64_t>(rng() % 20);
  EricksonOracle o(rows, cols, cells);
  SoakResult r;
  for (; r.ops < ops; ++r.ops) {
    if (rng() % 2) {
      o.inc_row(rng() % rows);
    } else {
      o.inc_col(rng() % cols);
    }
    soak_detail::maybe_snapshot(o, rng);
    if (o.max() != o.recompute_max()) ++r.mismatches;
  }
  return r;
}

inline std::vector<std::pair<std::string, std::function<SoakResult(std::uint64_t, std::size_t)>>> all_soaks() {
  return {
      {"subgraph-connectivity", soak_subgraph_connectivity},
      {"distance", [](std::uint64_t s, std::size_t k) { return soak_distance(s, k, false); }},
      {"reachability", [](std::uint64_t s, std::size_t k) { return soak_distance(s, k, true); }},
      {"even-shiloach", soak_even_shiloach},
      {"triangle", soak_triangle},
      {"color-distance", soak_color},
      {"d-failure", soak_dfailure},
      {"matching", soak_matching},
      {"diameter", soak_diameter},
      {"transitive-closure", soak_transitive_closure},
      {"densest", soak_densest},
      {"pagh", soak_pagh},
      {"zero-prefix", soak_zero_prefix},
      {"erickson", soak_erickson},
  };
}

// Densest density by enumerating every nonempty vertex subset.
inline Rational exhaustive_densest(const EdgeListGraph& g) {
  Rational best(0);
  for (std::uint32_t mask = 1; mask < (1u << g.n); ++mask) {
    std::int64_t e = 0, k = std::popcount(mask);
    for (const auto& ed : g.edges) e += ((mask >> ed.a) & 1) && ((mask >> ed.b) & 1);
    best = std::max(best, Rational(e, k));
  }
  return best;
}

inline EdgeListGraph random_simple_graph(std::mt19937_64& rng, std::size_t n, unsigned percent) {
  EdgeListGraph g;
  g.n = n;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      if (rng() % 100 < percent) g.add(a, b);
    }
  }
  return g;
}

}  // namespace omv::test
