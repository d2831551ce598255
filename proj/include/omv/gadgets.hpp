#pragma once

// One construction per reduction: build the dynamic instance from M, stream
// vector pairs, drive the oracle, decode one bit per round and record the
// operations used against the construction's count budget.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "omv/bitcore.hpp"
#include "omv/dynoracles.hpp"
#include "omv/errors.hpp"
#include "omv/rational.hpp"

namespace omv {

enum class UndoMode { undo, snapshot };

inline std::string to_string(UndoMode m) { return m == UndoMode::undo ? "undo" : "snapshot"; }

inline UndoMode parse_undo_mode(const std::string& s) {
  if (s == "undo") return UndoMode::undo;
  if (s == "snapshot") return UndoMode::snapshot;
  throw usage_error("undo mode must be 'undo' or 'snapshot', got '" + s + "'");
}

struct GadgetConfig {
  Rational epsilon{1};
  Rational delta{1, 2};
  UndoMode mode = UndoMode::undo;
  bool incremental = false;  // partially dynamic gadgets: run the insertion-only mirror
  bool audit = false;
  std::optional<std::uint64_t> fault_query;
};

struct VectorPair {
  BoolVector u;
  BoolVector v;
};

// One measured oracle answer: value is absent for an infinite distance.
struct Probe {
  std::size_t round = 0;
  std::size_t index = 0;
  std::optional<Rational> value;
  std::int64_t aux = 0;
  friend bool operator==(const Probe&, const Probe&) = default;
};

struct GadgetRun {
  std::string kind;
  std::size_t rounds = 0;
  std::vector<bool> recovered;
  std::uint64_t updates_used = 0;
  std::uint64_t queries_used = 0;
  std::uint64_t budget_updates = 0;
  std::uint64_t budget_queries = 0;
  UndoMode undo_mode = UndoMode::undo;
  std::uint64_t gap_violations = 0;
  std::uint64_t audit_failures = 0;
  bool fault_fired = false;
  std::map<std::string, std::string> derived;
  std::vector<Probe> probes;

  bool within_budget() const noexcept { return updates_used <= budget_updates && queries_used <= budget_queries; }
  friend bool operator==(const GadgetRun&, const GadgetRun&) = default;
};

namespace gadget_detail {

inline void validate(const BoolMatrix& m, const std::vector<VectorPair>& pairs) {
  if (m.rows() == 0 || m.cols() == 0) throw dimension_error("gadget matrix must be nonempty");
  for (const auto& p : pairs) {
    if (p.u.size() != m.rows() || p.v.size() != m.cols()) throw dimension_error("vector pair does not match matrix shape");
  }
}

template <class Oracle>
void arm(Oracle& o, const GadgetConfig& cfg) {
  o.set_audit(cfg.audit);
  if (cfg.fault_query) o.inject_fault(*cfg.fault_query);
}

template <class Oracle>
void collect(GadgetRun& run, const Oracle& o) {
  run.updates_used = o.updates();
  run.queries_used = o.queries();
  run.audit_failures = o.audit_failures();
  run.fault_fired = o.fault_fired();
}

inline GadgetRun start(const std::string& kind, const std::vector<VectorPair>& pairs, UndoMode mode) {
  GadgetRun run;
  run.kind = kind;
  run.rounds = pairs.size();
  run.undo_mode = mode;
  return run;
}

inline Probe probe(std::size_t round, std::size_t index, const Dist& d) {
  return {round, index, d ? std::optional<Rational>(Rational(*d)) : std::nullopt, 0};
}
inline Probe probe(std::size_t round, std::size_t index, bool b) { return {round, index, Rational(b ? 1 : 0), 0}; }
inline Probe probe(std::size_t round, std::size_t index, std::int64_t x) { return {round, index, Rational(x), 0}; }

inline bool at_least(const Dist& d, std::uint32_t bound) { return !d || *d >= bound; }

// Bipartite G_M: l_i = i, r_j = n1 + j, edge (r_j, l_i) iff M_ij = 1.
struct Bipartite {
  std::size_t n1 = 0, n2 = 0;
  Vertex l(std::size_t i) const { return static_cast<Vertex>(i); }
  Vertex r(std::size_t j) const { return static_cast<Vertex>(n1 + j); }
  std::size_t size() const { return n1 + n2; }
};

inline Bipartite bipartite(const BoolMatrix& m) { return {m.rows(), m.cols()}; }

inline void add_gm(DynGraph& g, const BoolMatrix& m, const Bipartite& b, bool r_to_l = false) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    m.row(i).for_each_set([&](std::size_t j) {
      if (r_to_l) {
        g.insert_edge(b.r(j), b.l(i));
      } else {
        g.insert_edge(b.l(i), b.r(j));
      }
    });
  }
}

inline std::uint64_t undo_factor(UndoMode mode) { return mode == UndoMode::undo ? 2 : 1; }

}  // namespace gadget_detail

// ---------------------------------------------------------------------------
// Fully dynamic gadgets: each round is reset before the next, by inverse
// operations (undo mode, counted) or by rollback (snapshot mode, uncounted).

// Vertex toggles, then one s-t connectivity query.
inline GadgetRun st_subconn_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  auto b = bipartite(m);
  const Vertex s = static_cast<Vertex>(b.size()), t = s + 1;
  DynGraph g(b.size() + 2);
  add_gm(g, m, b);
  for (std::size_t i = 0; i < b.n1; ++i) g.insert_edge(t, b.l(i));
  for (std::size_t j = 0; j < b.n2; ++j) g.insert_edge(b.r(j), s);
  SubgraphConnectivityOracle o(std::move(g));
  arm(o, cfg);

  auto run = start("st-subconn", pairs, cfg.mode);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [u, v] = pairs[k];
    if (cfg.mode == UndoMode::snapshot) o.snapshot();
    std::vector<Vertex> off;
    for (std::size_t i = 0; i < b.n1; ++i) {
      if (!u.get(i)) off.push_back(b.l(i));
    }
    for (std::size_t j = 0; j < b.n2; ++j) {
      if (!v.get(j)) off.push_back(b.r(j));
    }
    for (auto x : off) o.turn_off(x);
    bool c = o.connected(s, t);
    run.recovered.push_back(c);
    run.probes.push_back(probe(k, 0, c));
    if (cfg.mode == UndoMode::undo) {
      for (auto x : off) o.turn_on(x);
    } else {
      o.rollback();
    }
  }
  collect(run, o);
  run.budget_updates = pairs.size() * undo_factor(cfg.mode) * (b.n1 + b.n2);
  run.budget_queries = pairs.size();
  return run;
}

namespace gadget_detail {

// G_M plus s, t with (t, l_i) and (r_j, s); each G_M edge optionally
// replaced by a path of `subdivide` edges.
struct StGraph {
  DynGraph g;
  Vertex s = 0, t = 0;
};

inline StGraph st_graph(const BoolMatrix& m, std::size_t subdivide) {
  auto b = bipartite(m);
  StGraph out;
  out.s = static_cast<Vertex>(b.size());
  out.t = out.s + 1;
  out.g = DynGraph(b.size() + 2);
  for (std::size_t i = 0; i < b.n1; ++i) {
    m.row(i).for_each_set([&](std::size_t j) {
      Vertex prev = b.l(i);
      for (std::size_t step = 1; step < subdivide; ++step) {
        Vertex mid = out.g.add_vertex();
        out.g.insert_edge(prev, mid);
        prev = mid;
      }
      out.g.insert_edge(prev, b.r(j));
    });
  }
  for (std::size_t i = 0; i < b.n1; ++i) out.g.insert_edge(out.t, b.l(i));
  for (std::size_t j = 0; j < b.n2; ++j) out.g.insert_edge(b.r(j), out.s);
  return out;
}

// Shared driver for the two s-t distance gadgets: delete (t,l_i) iff u_i = 0
// and (r_j,s) iff v_j = 0, then query d(s,t).
inline GadgetRun st_distance_rounds(const std::string& kind, const BoolMatrix& m, const std::vector<VectorPair>& pairs,
                                    const GadgetConfig& cfg, std::size_t subdivide) {
  validate(m, pairs);
  auto b = bipartite(m);
  auto sg = st_graph(m, subdivide);
  DistanceOracle o(std::move(sg.g));
  arm(o, cfg);
  const auto hit = static_cast<std::uint32_t>(2 + subdivide);
  const auto miss = static_cast<std::uint32_t>(2 + 3 * subdivide);

  auto run = start(kind, pairs, cfg.mode);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [u, v] = pairs[k];
    if (cfg.mode == UndoMode::snapshot) o.snapshot();
    std::vector<std::pair<Vertex, Vertex>> removed;
    for (std::size_t i = 0; i < b.n1; ++i) {
      if (!u.get(i)) removed.emplace_back(sg.t, b.l(i));
    }
    for (std::size_t j = 0; j < b.n2; ++j) {
      if (!v.get(j)) removed.emplace_back(b.r(j), sg.s);
    }
    for (auto [x, y] : removed) o.delete_edge(x, y);
    Dist d = o.dist(sg.s, sg.t);
    run.recovered.push_back(d && *d == hit);
    run.probes.push_back(probe(k, 0, d));
    if (!(d && *d == hit) && !at_least(d, miss)) ++run.gap_violations;
    if (cfg.mode == UndoMode::undo) {
      for (auto [x, y] : removed) o.insert_edge(x, y);
    } else {
      o.rollback();
    }
  }
  collect(run, o);
  run.budget_updates = pairs.size() * undo_factor(cfg.mode) * (b.n1 + b.n2);
  run.budget_queries = pairs.size();
  return run;
}

}  // namespace gadget_detail

// d(s,t) = 3 iff the product is 1, otherwise d(s,t) >= 5.
inline GadgetRun st_sp_3v5_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  return gadget_detail::st_distance_rounds("st-sp-3v5", m, pairs, cfg, 1);
}

inline std::size_t subdivision_length(const Rational& epsilon) {
  if (epsilon <= Rational(0)) throw std::invalid_argument("epsilon must be positive");
  return static_cast<std::size_t>(std::max<std::int64_t>(1, (Rational(4) / epsilon).ceil()));
}

// Every G_M edge subdivided into L = ceil(4/eps) edges: d = 2+L vs >= 2+3L.
inline GadgetRun stsp_3eps_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  const auto len = subdivision_length(cfg.epsilon);
  auto run = gadget_detail::st_distance_rounds("st-sp-3eps", m, pairs, cfg, len);
  run.derived["epsilon"] = cfg.epsilon.str();
  run.derived["subdivision"] = std::to_string(len);
  return run;
}

// Hub s adjacent to L and R; triangle through s iff the product is 1.
inline GadgetRun triangle_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  auto b = bipartite(m);
  const Vertex s = static_cast<Vertex>(b.size());
  DynGraph g(b.size() + 1);
  add_gm(g, m, b);
  for (std::size_t i = 0; i < b.n1; ++i) g.insert_edge(s, b.l(i));
  for (std::size_t j = 0; j < b.n2; ++j) g.insert_edge(b.r(j), s);
  TriangleOracle o(std::move(g));
  arm(o, cfg);

  auto run = start("triangle", pairs, cfg.mode);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [u, v] = pairs[k];
    if (cfg.mode == UndoMode::snapshot) o.snapshot();
    std::vector<std::pair<Vertex, Vertex>> removed;
    for (std::size_t i = 0; i < b.n1; ++i) {
      if (!u.get(i)) removed.emplace_back(s, b.l(i));
    }
    for (std::size_t j = 0; j < b.n2; ++j) {
      if (!v.get(j)) removed.emplace_back(b.r(j), s);
    }
    for (auto [x, y] : removed) o.delete_edge(x, y);
    bool at_s = o.triangle_at(s);
    if (at_s != o.recompute_has_triangle()) ++run.gap_violations;
    run.recovered.push_back(at_s);
    run.probes.push_back(probe(k, 0, at_s));
    if (cfg.mode == UndoMode::undo) {
      for (auto [x, y] : removed) o.insert_edge(x, y);
    } else {
      o.rollback();
    }
  }
  collect(run, o);
  run.budget_updates = pairs.size() * undo_factor(cfg.mode) * (b.n1 + b.n2);
  run.budget_queries = pairs.size();
  return run;
}

// Turn off r_j iff v_j = 0, then ask whether s reaches l_i for each i with u_i = 1.
inline GadgetRun ss_subconn_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  auto b = bipartite(m);
  const Vertex s = static_cast<Vertex>(b.size());
  DynGraph g(b.size() + 1);
  add_gm(g, m, b);
  for (std::size_t j = 0; j < b.n2; ++j) g.insert_edge(b.r(j), s);
  SubgraphConnectivityOracle o(std::move(g));
  arm(o, cfg);

  auto run = start("ss-subconn", pairs, cfg.mode);
  run.derived["delta"] = cfg.delta.str();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [u, v] = pairs[k];
    if (cfg.mode == UndoMode::snapshot) o.snapshot();
    std::vector<Vertex> off;
    for (std::size_t j = 0; j < b.n2; ++j) {
      if (!v.get(j)) off.push_back(b.r(j));
    }
    for (auto x : off) o.turn_off(x);
    bool any = false;
    u.for_each_set([&](std::size_t i) {
      bool c = o.connected_from(s, b.l(i));
      run.probes.push_back(probe(k, i, c));
      any = any || c;
    });
    run.recovered.push_back(any);
    if (cfg.mode == UndoMode::undo) {
      for (auto x : off) o.turn_on(x);
    } else {
      o.rollback();
    }
  }
  collect(run, o);
  run.budget_updates = pairs.size() * undo_factor(cfg.mode) * b.n2;
  run.budget_queries = pairs.size() * b.n1;
  return run;
}

// Delete (r_j, s) iff v_j = 0; some d(s,l_i) = 2 iff the product is 1, else all >= 4.
inline GadgetRun ss_sp_2v4_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  auto b = bipartite(m);
  const Vertex s = static_cast<Vertex>(b.size());
  DynGraph g(b.size() + 1);
  add_gm(g, m, b);
  for (std::size_t j = 0; j < b.n2; ++j) g.insert_edge(b.r(j), s);
  DistanceOracle o(std::move(g));
  arm(o, cfg);

  auto run = start("ss-sp-2v4", pairs, cfg.mode);
  run.derived["delta"] = cfg.delta.str();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [u, v] = pairs[k];
    if (cfg.mode == UndoMode::snapshot) o.snapshot();
    std::vector<Vertex> cut;
    for (std::size_t j = 0; j < b.n2; ++j) {
      if (!v.get(j)) cut.push_back(b.r(j));
    }
    for (auto x : cut) o.delete_edge(x, s);
    bool any = false;
    u.for_each_set([&](std::size_t i) {
      Dist d = o.dist(s, b.l(i));
      run.probes.push_back(probe(k, i, d));
      if (d && *d == 2) {
        any = true;
      } else if (!at_least(d, 4)) {
        ++run.gap_violations;
      }
    });
    run.recovered.push_back(any);
    if (cfg.mode == UndoMode::undo) {
      for (auto x : cut) o.insert_edge(x, s);
    } else {
      o.rollback();
    }
  }
  collect(run, o);
  run.budget_updates = pairs.size() * undo_factor(cfg.mode) * b.n2;
  run.budget_queries = pairs.size() * b.n1;
  return run;
}

// L colored c, R colored c'; recolor l_i to c' iff u_i = 0 and query
// d(r_j, c) for v_j = 1: distance 1 iff the product is 1, else >= 3.
inline GadgetRun color_oracle_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  constexpr std::uint32_t c = 0, c_other = 1;
  validate(m, pairs);
  auto b = bipartite(m);
  DynGraph g(b.size());
  add_gm(g, m, b);
  std::vector<std::uint32_t> colors(b.size(), c_other);
  for (std::size_t i = 0; i < b.n1; ++i) colors[b.l(i)] = c;
  ColorDistanceOracle o(std::move(g), std::move(colors));
  arm(o, cfg);

  auto run = start("color-oracle", pairs, cfg.mode);
  run.derived["delta"] = cfg.delta.str();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [u, v] = pairs[k];
    if (cfg.mode == UndoMode::snapshot) o.snapshot();
    std::vector<Vertex> recolored;
    for (std::size_t i = 0; i < b.n1; ++i) {
      if (!u.get(i)) recolored.push_back(b.l(i));
    }
    for (auto x : recolored) o.set_color(x, c_other);
    bool any = false;
    v.for_each_set([&](std::size_t j) {
      Dist d = o.dist_to_color(b.r(j), c);
      run.probes.push_back(probe(k, j, d));
      if (d && *d == 1) {
        any = true;
      } else if (!at_least(d, 3)) {
        ++run.gap_violations;
      }
    });
    run.recovered.push_back(any);
    if (cfg.mode == UndoMode::undo) {
      for (auto x : recolored) o.set_color(x, c);
    } else {
      o.rollback();
    }
  }
  collect(run, o);
  run.budget_updates = pairs.size() * undo_factor(cfg.mode) * b.n1;
  run.budget_queries = pairs.size() * b.n2;
  return run;
}

// One batch turning off every r_j with v_j = 0, then connectivity from s to
// each l_i with u_i = 1. The oracle rolls back to the original graph itself.
inline GadgetRun dfailure_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  auto b = bipartite(m);
  const Vertex s = static_cast<Vertex>(b.size());
  DynGraph g(b.size() + 1);
  add_gm(g, m, b);
  for (std::size_t j = 0; j < b.n2; ++j) g.insert_edge(b.r(j), s);
  DFailureOracle o(std::move(g), b.n2);
  arm(o, cfg);

  auto run = start("d-failure", pairs, UndoMode::snapshot);
  run.derived["d"] = std::to_string(b.n2);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [u, v] = pairs[k];
    std::vector<Vertex> batch;
    for (std::size_t j = 0; j < b.n2; ++j) {
      if (!v.get(j)) batch.push_back(b.r(j));
    }
    o.fail(batch);
    bool any = false;
    u.for_each_set([&](std::size_t i) {
      bool c = o.connected(s, b.l(i));
      run.probes.push_back(probe(k, i, c));
      any = any || c;
    });
    run.recovered.push_back(any);
    o.restore();
  }
  collect(run, o);
  run.budget_updates = pairs.size();
  run.budget_queries = pairs.size() * b.n1;
  return run;
}

// Family of complemented rows; the intersection over u's rows misses some j
// with v_j = 1 iff the product is 1. The family is truncated back by rollback.
inline GadgetRun pagh_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  auto comp = m.complement();
  std::vector<BoolVector> family;
  for (std::size_t i = 0; i < m.rows(); ++i) family.push_back(comp.row(i));
  PaghOracle o(m.cols(), std::move(family));
  arm(o, cfg);

  auto run = start("pagh", pairs, UndoMode::snapshot);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [u, v] = pairs[k];
    auto idx = u.ones_indices();
    if (idx.empty()) {
      // an empty family intersects to the whole universe
      run.recovered.push_back(false);
      continue;
    }
    o.snapshot();
    std::size_t cur = idx[0];
    for (std::size_t a = 1; a < idx.size(); ++a) cur = o.insert_intersection(cur, idx[a]);
    bool any = false;
    v.for_each_set([&](std::size_t j) {
      bool in = o.member(cur, j);
      run.probes.push_back(probe(k, j, in));
      any = any || !in;
    });
    run.recovered.push_back(any);
    o.rollback();
  }
  collect(run, o);
  run.budget_updates = pairs.size() * m.rows();
  run.budget_queries = pairs.size() * m.cols();
  return run;
}

// Zero-prefix array of size 1 + n1(2 n2 + 2): row i is 0, pairs (1,1) for a
// set bit and (2,0) for a clear bit, then -2 n2.
inline std::vector<std::int64_t> langerman_array(const BoolMatrix& m, std::int64_t r0 = 1) {
  const std::size_t n1 = m.rows(), n2 = m.cols(), width = 2 * n2 + 2;
  std::vector<std::int64_t> a(1 + n1 * width, 0);
  a[0] = r0;
  for (std::size_t i = 0; i < n1; ++i) {
    std::size_t base = 1 + i * width;
    a[base] = 0;
    for (std::size_t j = 0; j < n2; ++j) {
      a[base + 1 + 2 * j] = m.get(i, j) ? 1 : 2;
      a[base + 2 + 2 * j] = m.get(i, j) ? 1 : 0;
    }
    a[base + width - 1] = -static_cast<std::int64_t>(2 * n2);
  }
  return a;
}

inline GadgetRun langerman_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  const std::size_t n1 = m.rows(), n2 = m.cols(), width = 2 * n2 + 2;
  const auto low = -static_cast<std::int64_t>(2 * n2);
  ZeroPrefixOracle o(langerman_array(m));
  arm(o, cfg);

  auto run = start("langerman", pairs, cfg.mode);
  run.derived["array_size"] = std::to_string(o.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [u, v] = pairs[k];
    if (cfg.mode == UndoMode::snapshot) o.snapshot();
    const auto r0_before = o.at(0);
    auto swapped = u.ones_indices();
    for (auto i : swapped) {
      o.set(1 + i * width, low);
      o.set(i * width + width, 0);
    }
    bool any = false;
    v.for_each_set([&](std::size_t j) {
      o.set(0, 2 * static_cast<std::int64_t>(n2 - (j + 1)) + 1);
      bool z = o.has_zero_prefix();
      run.probes.push_back(probe(k, j, z));
      any = any || z;
    });
    run.recovered.push_back(any);
    if (cfg.mode == UndoMode::undo) {
      for (auto i : swapped) {
        o.set(1 + i * width, 0);
        o.set(i * width + width, low);
      }
      if (o.at(0) != r0_before) o.set(0, r0_before);
    } else {
      o.rollback();
    }
  }
  collect(run, o);
  run.budget_updates = pairs.size() * (cfg.mode == UndoMode::undo ? 4 * n1 + n2 + 1 : 2 * n1 + n2);
  run.budget_queries = pairs.size() * n2;
  return run;
}

// Row/column increments; the max after round t's partial increments is
// 2t+1 (1-based t) iff the product is 1.
inline GadgetRun erickson_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  auto o = EricksonOracle::from_matrix(m);
  arm(o, cfg);

  auto run = start("erickson", pairs, cfg.mode);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [u, v] = pairs[k];
    const auto t = static_cast<std::int64_t>(k + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (u.get(i)) o.inc_row(i);
    }
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (v.get(j)) o.inc_col(j);
    }
    auto mx = o.max();
    run.probes.push_back(probe(k, 0, mx));
    run.recovered.push_back(mx == 2 * t + 1);
    if (mx > 2 * t + 1 || mx < 2 * t - 2) ++run.gap_violations;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (!u.get(i)) o.inc_row(i);
    }
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!v.get(j)) o.inc_col(j);
    }
  }
  collect(run, o);
  run.budget_updates = pairs.size() * (m.rows() + m.cols());
  run.budget_queries = pairs.size();
  return run;
}

inline std::size_t ceil_sqrt(std::size_t n) {
  auto s = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (s * s < n) ++s;
  while (s > 0 && (s - 1) * (s - 1) >= n) --s;
  return s;
}

namespace gadget_detail {

inline BoolVector pad_to(const BoolVector& x, std::size_t len) {
  BoolVector y(len);
  x.for_each_set([&](std::size_t i) { y.set(i); });
  return y;
}

inline BoolMatrix pad_matrix(const BoolMatrix& m, std::size_t rows, std::size_t cols) {
  BoolMatrix p(rows, cols);
  for (std::size_t i = 0; i < m.rows(); ++i) m.row(i).for_each_set([&](std::size_t j) { p.set(i, j); });
  return p;
}

}  // namespace gadget_detail

// Vector graphs: per row of M and one for v, each two s-cliques (s^2 >= n2)
// with a cross edge (b_x, c_y) iff the bit at x*s+y is 0. Per stage the
// diameter is 1 if M_i and v are disjoint and 2 otherwise.
inline GadgetRun diameter_gadget(const BoolMatrix& m_in, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m_in, pairs);
  const std::size_t n1 = m_in.rows(), n2 = m_in.cols();
  const std::size_t s = ceil_sqrt(n2), padded = s * s;
  const BoolMatrix m = pad_matrix(m_in, n1, padded);

  auto bv = [&](std::size_t h, std::size_t x) { return static_cast<Vertex>(h * 2 * s + x); };
  auto cv = [&](std::size_t h, std::size_t y) { return static_cast<Vertex>(h * 2 * s + s + y); };
  const std::size_t hv = n1;  // index of H^v
  const Vertex a = static_cast<Vertex>((n1 + 1) * 2 * s), z = a + 1;

  DynGraph g((n1 + 1) * 2 * s + 2);
  auto add_vector_graph = [&](std::size_t h, const BoolVector& bits) {
    for (std::size_t x = 0; x < s; ++x) {
      for (std::size_t y = x + 1; y < s; ++y) {
        g.insert_edge(bv(h, x), bv(h, y), 1);
        g.insert_edge(cv(h, x), cv(h, y), 1);
      }
    }
    for (std::size_t x = 0; x < s; ++x) {
      for (std::size_t y = 0; y < s; ++y) {
        if (!bits.get(x * s + y)) g.insert_edge(bv(h, x), cv(h, y), 1);
      }
    }
  };
  for (std::size_t i = 0; i < n1; ++i) add_vector_graph(i, m.row(i));
  add_vector_graph(hv, BoolVector(padded));
  for (std::size_t x = 0; x < s; ++x) {
    g.insert_edge(a, bv(hv, x), 1);
    g.insert_edge(a, cv(hv, x), 1);
  }
  g.insert_edge(z, a, 0);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t x = 0; x < s; ++x) {
      g.insert_edge(z, bv(i, x), 0);
      g.insert_edge(z, cv(i, x), 0);
    }
  }
  DiameterOracle o(std::move(g));
  arm(o, cfg);

  auto run = start("diameter", pairs, cfg.mode);
  run.derived["padded_n2"] = std::to_string(padded);
  run.derived["clique"] = std::to_string(s);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [u, v] = pairs[k];
    if (cfg.mode == UndoMode::snapshot) o.snapshot();
    auto vbits = v.ones_indices();
    for (auto p : vbits) o.delete_edge(bv(hv, p / s), cv(hv, p % s));
    bool any = false;
    u.for_each_set([&](std::size_t i) {
      if (cfg.mode == UndoMode::snapshot) o.snapshot();
      for (std::size_t x = 0; x < s; ++x) {
        o.delete_edge(z, bv(i, x));
        o.delete_edge(z, cv(i, x));
      }
      for (std::size_t x = 0; x < s; ++x) {
        o.insert_edge(a, bv(i, x), 1);
        o.insert_edge(a, cv(i, x), 1);
      }
      for (std::size_t x = 0; x < s; ++x) {
        o.insert_edge(bv(i, x), bv(hv, x), 0);
        o.insert_edge(cv(i, x), cv(hv, x), 0);
      }
      Dist d = o.diameter();
      run.probes.push_back(probe(k, i, d));
      if (d && *d == 2) any = true;
      if (!d || (*d != 1 && *d != 2)) ++run.gap_violations;
      if (cfg.mode == UndoMode::undo) {
        for (std::size_t x = 0; x < s; ++x) {
          o.delete_edge(bv(i, x), bv(hv, x));
          o.delete_edge(cv(i, x), cv(hv, x));
          o.delete_edge(a, bv(i, x));
          o.delete_edge(a, cv(i, x));
          o.insert_edge(z, bv(i, x), 0);
          o.insert_edge(z, cv(i, x), 0);
        }
      } else {
        o.rollback();
      }
    });
    run.recovered.push_back(any);
    if (cfg.mode == UndoMode::undo) {
      for (auto p : vbits) o.insert_edge(bv(hv, p / s), cv(hv, p % s), 1);
    } else {
      o.rollback();
    }
  }
  collect(run, o);
  run.budget_updates = pairs.size() * undo_factor(cfg.mode) * (n2 + 6 * s * n1);
  run.budget_queries = pairs.size() * n1;
  return run;
}

inline Rational densest_threshold(std::size_t n) {
  const auto k = static_cast<std::int64_t>(6 * n);
  return Rational(k + 7, k + 6);
}

// Bit graphs B_ij (k-vertex paths when M_ij = 1), 3-vertex row and column
// graphs with spokes to the bit graphs' special vertices. Revealing u, v
// closes the row/column graphs into triangles; some subgraph reaches
// density (k+7)/(k+6) iff the product is 1.
inline GadgetRun densest_gadget(const BoolMatrix& m_in, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m_in, pairs);
  const std::size_t n = std::max(m_in.rows(), m_in.cols()), k = 6 * n;
  const BoolMatrix m = pad_matrix(m_in, n, n);
  auto bit_vertex = [&](std::size_t i, std::size_t j, std::size_t x) { return static_cast<Vertex>((i * n + j) * k + x); };
  auto row_vertex = [&](std::size_t i, std::size_t x) { return static_cast<Vertex>(n * n * k + 3 * i + x); };
  auto col_vertex = [&](std::size_t j, std::size_t x) { return static_cast<Vertex>(n * n * k + 3 * n + 3 * j + x); };

  DynGraph g(n * n * k + 6 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m.get(i, j)) {
        for (std::size_t x = 0; x + 1 < k; ++x) g.insert_edge(bit_vertex(i, j, x), bit_vertex(i, j, x + 1));
      }
      g.insert_edge(row_vertex(i, 0), bit_vertex(i, j, 0));
      g.insert_edge(col_vertex(j, 0), bit_vertex(i, j, k - 1));
    }
  }
  DensestSubgraphOracle o(std::move(g));
  arm(o, cfg);
  const Rational threshold = densest_threshold(n);

  auto triangle = [](auto vertex, std::size_t idx) {
    return std::vector<std::pair<Vertex, Vertex>>{
        {vertex(idx, 0), vertex(idx, 1)}, {vertex(idx, 1), vertex(idx, 2)}, {vertex(idx, 0), vertex(idx, 2)}};
  };

  auto run = start("densest", pairs, cfg.mode);
  run.derived["n"] = std::to_string(n);
  run.derived["k"] = std::to_string(k);
  run.derived["threshold"] = threshold.str();
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto& [u, v] = pairs[r];
    if (cfg.mode == UndoMode::snapshot) o.snapshot();
    std::vector<std::pair<Vertex, Vertex>> added;
    u.for_each_set([&](std::size_t i) {
      for (auto e : triangle(row_vertex, i)) added.push_back(e);
    });
    v.for_each_set([&](std::size_t j) {
      for (auto e : triangle(col_vertex, j)) added.push_back(e);
    });
    for (auto [x, y] : added) o.insert_edge(x, y);
    Rational rho = o.densest();
    Probe p{r, 0, rho, static_cast<std::int64_t>(o.last_witness().size())};
    run.probes.push_back(p);
    run.recovered.push_back(rho >= threshold);
    if (cfg.mode == UndoMode::undo) {
      for (auto [x, y] : added) o.delete_edge(x, y);
    } else {
      o.rollback();
    }
  }
  collect(run, o);
  run.budget_updates = pairs.size() * undo_factor(cfg.mode) * 6 * n;
  run.budget_queries = pairs.size();
  return run;
}

// ---------------------------------------------------------------------------
// Partially dynamic gadgets. Round t uses its own round vertex p_t / q_t, so
// nothing is ever undone. Rounds are indexed from 0 here.

namespace gadget_detail {

// Paths P and Q (or a plain set Q) next to G_M. Decremental layouts start
// with every spoke present; incremental layouts start without spokes.
struct RoundLayout {
  Bipartite b;
  std::size_t n3 = 0;
  Vertex p(std::size_t t) const { return static_cast<Vertex>(b.size() + t); }
  Vertex q(std::size_t t) const { return static_cast<Vertex>(b.size() + n3 + t); }
  std::size_t order() const { return b.size() + 2 * n3; }
};

inline void add_path(DynGraph& g, const RoundLayout& lay, bool p_side) {
  for (std::size_t t = 0; t + 1 < lay.n3; ++t) {
    if (p_side) {
      g.insert_edge(lay.p(t), lay.p(t + 1));
    } else {
      g.insert_edge(lay.q(t), lay.q(t + 1));
    }
  }
}

}  // namespace gadget_detail

// Incremental s-s' distance with the construction itself made of counted
// insertions: with rounds indexed from 0, d(s,s') = 2(n3-t)+1 iff the product
// is 1, otherwise d >= 2(n3-t)+2.
inline GadgetRun incr_stsp_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  if (pairs.empty()) throw dimension_error("incremental st-SP gadget needs at least one round");
  RoundLayout lay{bipartite(m), pairs.size()};
  const std::size_t n1 = lay.b.n1, n2 = lay.b.n2, n3 = lay.n3;
  const Vertex s = lay.p(n3 - 1), s2 = lay.q(n3 - 1);
  DistanceOracle o{DynGraph(lay.order())};
  arm(o, cfg);
  for (std::size_t i = 0; i < n1; ++i) m.row(i).for_each_set([&](std::size_t j) { o.insert_edge(lay.b.r(j), lay.b.l(i)); });
  for (std::size_t t = 0; t + 1 < n3; ++t) {
    o.insert_edge(lay.p(t), lay.p(t + 1));
    o.insert_edge(lay.q(t), lay.q(t + 1));
  }

  auto run = start("incr-st-sp", pairs, cfg.mode);
  for (std::size_t t = 0; t < n3; ++t) {
    const auto& [u, v] = pairs[t];
    u.for_each_set([&](std::size_t i) { o.insert_edge(lay.p(t), lay.b.l(i)); });
    v.for_each_set([&](std::size_t j) { o.insert_edge(lay.q(t), lay.b.r(j)); });
    Dist d = o.dist(s, s2);
    const auto hit = static_cast<std::uint32_t>(2 * (n3 - t) + 1);
    run.probes.push_back(probe(t, 0, d));
    run.recovered.push_back(d && *d == hit);
    if (!(d && *d == hit) && !at_least(d, hit + 1)) ++run.gap_violations;
  }
  collect(run, o);
  run.budget_updates = n1 * n2 + n1 * n3 + n2 * n3 + 2 * n3;
  run.budget_queries = n3;
  return run;
}

// Decremental: every p_t, q_t starts fully attached; round t keeps only the
// spokes selected by u, v, queries d(p_0, q_0) = 2t+3 (= 2t+1 with 1-based
// rounds) iff the product is 1, then drops the round's remaining spokes.
inline GadgetRun partial_stsp_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  RoundLayout lay{bipartite(m), pairs.size()};
  const std::size_t n1 = lay.b.n1, n2 = lay.b.n2, n3 = lay.n3;
  auto run = start("partial-st-sp", pairs, cfg.mode);
  run.derived["direction"] = cfg.incremental ? "incremental" : "decremental";
  if (n3 == 0) return run;

  DynGraph g(lay.order());
  add_gm(g, m, lay.b);
  add_path(g, lay, true);
  add_path(g, lay, false);
  if (!cfg.incremental) {
    for (std::size_t t = 0; t < n3; ++t) {
      for (std::size_t i = 0; i < n1; ++i) g.insert_edge(lay.p(t), lay.b.l(i));
      for (std::size_t j = 0; j < n2; ++j) g.insert_edge(lay.q(t), lay.b.r(j));
    }
  }
  DistanceOracle o(std::move(g));
  arm(o, cfg);
  const Vertex s = cfg.incremental ? lay.p(n3 - 1) : lay.p(0);
  const Vertex s2 = cfg.incremental ? lay.q(n3 - 1) : lay.q(0);

  for (std::size_t t = 0; t < n3; ++t) {
    const auto& [u, v] = pairs[t];
    if (cfg.incremental) {
      u.for_each_set([&](std::size_t i) { o.insert_edge(lay.p(t), lay.b.l(i)); });
      v.for_each_set([&](std::size_t j) { o.insert_edge(lay.q(t), lay.b.r(j)); });
    } else {
      for (std::size_t i = 0; i < n1; ++i) {
        if (!u.get(i)) o.delete_edge(lay.p(t), lay.b.l(i));
      }
      for (std::size_t j = 0; j < n2; ++j) {
        if (!v.get(j)) o.delete_edge(lay.q(t), lay.b.r(j));
      }
    }
    Dist d = o.dist(s, s2);
    const auto hit = static_cast<std::uint32_t>(cfg.incremental ? 2 * (n3 - t) + 1 : 2 * t + 3);
    run.probes.push_back(probe(t, 0, d));
    run.recovered.push_back(d && *d == hit);
    if (!(d && *d == hit) && !at_least(d, hit + 1)) ++run.gap_violations;
    if (!cfg.incremental) {
      u.for_each_set([&](std::size_t i) { o.delete_edge(lay.p(t), lay.b.l(i)); });
      v.for_each_set([&](std::size_t j) { o.delete_edge(lay.q(t), lay.b.r(j)); });
    }
  }
  collect(run, o);
  run.budget_updates = n3 * (n1 + n2);
  run.budget_queries = n3;
  return run;
}

// Path Q with s at one end and fans q_t -> R. Decremental runs use the
// Even-Shiloach structure: d(s, l_i) = t+2 (0-based t) for some i with
// u_i = 1 iff the product is 1.
inline GadgetRun partial_sssp_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  RoundLayout lay{bipartite(m), pairs.size()};
  const std::size_t n1 = lay.b.n1, n2 = lay.b.n2, n3 = lay.n3;
  auto run = start("partial-ss-sp", pairs, cfg.mode);
  run.derived["direction"] = cfg.incremental ? "incremental" : "decremental";
  run.derived["delta"] = cfg.delta.str();
  if (n3 == 0) return run;

  DynGraph g(lay.order());
  add_gm(g, m, lay.b);
  add_path(g, lay, false);
  if (!cfg.incremental) {
    for (std::size_t t = 0; t < n3; ++t) {
      for (std::size_t j = 0; j < n2; ++j) g.insert_edge(lay.q(t), lay.b.r(j));
    }
  }
  const Vertex s = cfg.incremental ? lay.q(n3 - 1) : lay.q(0);

  auto rounds = [&](auto& o, auto dist) {
    arm(o, cfg);
    for (std::size_t t = 0; t < n3; ++t) {
      const auto& [u, v] = pairs[t];
      if (cfg.incremental) {
        v.for_each_set([&](std::size_t j) { o.insert_edge(lay.q(t), lay.b.r(j)); });
      } else {
        for (std::size_t j = 0; j < n2; ++j) {
          if (!v.get(j)) o.delete_edge(lay.q(t), lay.b.r(j));
        }
      }
      const auto hit = static_cast<std::uint32_t>(cfg.incremental ? n3 - t + 1 : t + 2);
      bool any = false;
      u.for_each_set([&](std::size_t i) {
        Dist d = dist(o, lay.b.l(i));
        run.probes.push_back(probe(t, i, d));
        if (d && *d == hit) {
          any = true;
        } else if (!at_least(d, hit + 1)) {
          ++run.gap_violations;
        }
      });
      run.recovered.push_back(any);
      if (!cfg.incremental) v.for_each_set([&](std::size_t j) { o.delete_edge(lay.q(t), lay.b.r(j)); });
    }
    collect(run, o);
  };
  if (cfg.incremental) {
    DistanceOracle o(std::move(g));
    rounds(o, [&](DistanceOracle& x, Vertex l) { return x.dist(s, l); });
  } else {
    EvenShiloachOracle o(std::move(g), s);
    rounds(o, [](EvenShiloachOracle& x, Vertex l) { return x.dist(l); });
  }
  run.budget_updates = n3 * n2;
  run.budget_queries = n3 * n1;
  return run;
}

// Plain set Q with fans q_t -> R: d(q_t, l_i) = 2 for some i with u_i = 1 iff
// the product is 1, otherwise every such distance is >= 4.
inline GadgetRun partial_apsp_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  RoundLayout lay{bipartite(m), pairs.size()};
  const std::size_t n1 = lay.b.n1, n2 = lay.b.n2, n3 = lay.n3;
  DynGraph g(lay.order());
  add_gm(g, m, lay.b);
  if (!cfg.incremental) {
    for (std::size_t t = 0; t < n3; ++t) {
      for (std::size_t j = 0; j < n2; ++j) g.insert_edge(lay.q(t), lay.b.r(j));
    }
  }
  DistanceOracle o(std::move(g));
  arm(o, cfg);

  auto run = start("partial-ap-sp", pairs, cfg.mode);
  run.derived["direction"] = cfg.incremental ? "incremental" : "decremental";
  run.derived["delta"] = cfg.delta.str();
  for (std::size_t t = 0; t < n3; ++t) {
    const auto& [u, v] = pairs[t];
    if (cfg.incremental) {
      v.for_each_set([&](std::size_t j) { o.insert_edge(lay.q(t), lay.b.r(j)); });
    } else {
      for (std::size_t j = 0; j < n2; ++j) {
        if (!v.get(j)) o.delete_edge(lay.q(t), lay.b.r(j));
      }
    }
    bool any = false;
    u.for_each_set([&](std::size_t i) {
      Dist d = o.dist(lay.q(t), lay.b.l(i));
      run.probes.push_back(probe(t, i, d));
      if (d && *d == 2) {
        any = true;
      } else if (!at_least(d, 4)) {
        ++run.gap_violations;
      }
    });
    run.recovered.push_back(any);
    if (!cfg.incremental) v.for_each_set([&](std::size_t j) { o.delete_edge(lay.q(t), lay.b.r(j)); });
  }
  collect(run, o);
  run.budget_updates = n3 * n2;
  run.budget_queries = n3 * n1;
  return run;
}

// Directed G_M (R -> L) with q_t -> R: q_t reaches some l_i with u_i = 1 iff
// the product is 1.
inline GadgetRun partial_tc_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  RoundLayout lay{bipartite(m), pairs.size()};
  const std::size_t n1 = lay.b.n1, n2 = lay.b.n2, n3 = lay.n3;
  DynGraph g(lay.order(), true);
  add_gm(g, m, lay.b, true);
  if (!cfg.incremental) {
    for (std::size_t t = 0; t < n3; ++t) {
      for (std::size_t j = 0; j < n2; ++j) g.insert_edge(lay.q(t), lay.b.r(j));
    }
  }
  TransitiveClosureOracle o(std::move(g));
  arm(o, cfg);

  auto run = start("partial-tc", pairs, cfg.mode);
  run.derived["direction"] = cfg.incremental ? "incremental" : "decremental";
  run.derived["delta"] = cfg.delta.str();
  for (std::size_t t = 0; t < n3; ++t) {
    const auto& [u, v] = pairs[t];
    if (cfg.incremental) {
      v.for_each_set([&](std::size_t j) { o.insert_edge(lay.q(t), lay.b.r(j)); });
    } else {
      for (std::size_t j = 0; j < n2; ++j) {
        if (!v.get(j)) o.delete_edge(lay.q(t), lay.b.r(j));
      }
    }
    bool any = false;
    u.for_each_set([&](std::size_t i) {
      bool c = o.reachable(lay.q(t), lay.b.l(i));
      run.probes.push_back(probe(t, i, c));
      any = any || c;
    });
    run.recovered.push_back(any);
    if (!cfg.incremental) v.for_each_set([&](std::size_t j) { o.delete_edge(lay.q(t), lay.b.r(j)); });
  }
  collect(run, o);
  run.budget_updates = n3 * n2;
  run.budget_queries = n3 * n1;
  return run;
}

// Perfect-matching scaffold: l-l', r-r', x_t-x'_t, y_t-y'_t, with G_M between
// L and R and stage spokes x_{t,i}-l'_i, y_{t,j}-r'_j. Deleting x-x' for
// u_i = 1 and y-y' for v_j = 1 (d_t edges) lowers the maximum matching by d_t
// unless an augmenting path x-l'-l-r-r'-y exists, which happens iff the
// product is 1.
inline GadgetRun partial_matching_gadget(const BoolMatrix& m, const std::vector<VectorPair>& pairs, const GadgetConfig& cfg) {
  using namespace gadget_detail;
  validate(m, pairs);
  const std::size_t n1 = m.rows(), n2 = m.cols(), n3 = pairs.size(), block = 2 * (n1 + n2);
  auto l = [&](std::size_t i) { return static_cast<Vertex>(i); };
  auto lp = [&](std::size_t i) { return static_cast<Vertex>(n1 + i); };
  auto r = [&](std::size_t j) { return static_cast<Vertex>(2 * n1 + j); };
  auto rp = [&](std::size_t j) { return static_cast<Vertex>(2 * n1 + n2 + j); };
  auto x = [&](std::size_t t, std::size_t i) { return static_cast<Vertex>(block * (t + 1) + i); };
  auto xp = [&](std::size_t t, std::size_t i) { return static_cast<Vertex>(block * (t + 1) + n1 + i); };
  auto y = [&](std::size_t t, std::size_t j) { return static_cast<Vertex>(block * (t + 1) + 2 * n1 + j); };
  auto yp = [&](std::size_t t, std::size_t j) { return static_cast<Vertex>(block * (t + 1) + 2 * n1 + n2 + j); };

  const std::size_t order = block * (n3 + 1);
  DynGraph g(order);
  std::vector<char> right(order, 0);
  for (std::size_t i = 0; i < n1; ++i) {
    g.insert_edge(l(i), lp(i));
    right[lp(i)] = 1;
  }
  for (std::size_t j = 0; j < n2; ++j) {
    g.insert_edge(rp(j), r(j));
    right[r(j)] = 1;
  }
  for (std::size_t i = 0; i < n1; ++i) m.row(i).for_each_set([&](std::size_t j) { g.insert_edge(l(i), r(j)); });
  for (std::size_t t = 0; t < n3; ++t) {
    for (std::size_t i = 0; i < n1; ++i) {
      g.insert_edge(x(t, i), xp(t, i));
      g.insert_edge(x(t, i), lp(i));
      right[xp(t, i)] = 1;
    }
    for (std::size_t j = 0; j < n2; ++j) {
      g.insert_edge(yp(t, j), y(t, j));
      g.insert_edge(y(t, j), rp(j));
      right[y(t, j)] = 1;
    }
  }
  MatchingOracle o(std::move(g), std::move(right));
  arm(o, cfg);

  auto run = start("partial-matching", pairs, cfg.mode);
  run.derived["direction"] = "decremental";
  std::int64_t baseline = static_cast<std::int64_t>(order / 2);
  for (std::size_t t = 0; t < n3; ++t) {
    const auto& [u, v] = pairs[t];
    std::int64_t dt = 0;
    u.for_each_set([&](std::size_t i) {
      o.delete_edge(x(t, i), xp(t, i));
      ++dt;
    });
    v.for_each_set([&](std::size_t j) {
      o.delete_edge(y(t, j), yp(t, j));
      ++dt;
    });
    auto size = static_cast<std::int64_t>(o.size());
    std::int64_t drop = baseline - size;
    Probe p = probe(t, 0, drop);
    p.aux = dt;
    run.probes.push_back(p);
    run.recovered.push_back(drop <= dt - 1);
    if (drop < 0 || drop > dt) ++run.gap_violations;
    for (std::size_t i = 0; i < n1; ++i) o.delete_edge(x(t, i), lp(i));
    for (std::size_t j = 0; j < n2; ++j) o.delete_edge(y(t, j), rp(j));
    baseline -= dt;
  }
  collect(run, o);
  run.budget_updates = n3 * 2 * (n1 + n2);
  run.budget_queries = n3;
  return run;
}

// ---------------------------------------------------------------------------

using GadgetFn = GadgetRun (*)(const BoolMatrix&, const std::vector<VectorPair>&, const GadgetConfig&);

enum class GadgetShape {
  any,       // arbitrary n1 x n2
  square,    // n1 = n2
  tradeoff,  // n1 = floor(n2^(delta/(1-delta)))
  wide,      // n1 = floor(n2^((1-delta)/delta))
};

struct GadgetInfo {
  std::string name;
  GadgetFn run;
  GadgetShape shape;
  bool partially_dynamic;
  std::size_t max_side = 0;  // cap on the shaped side length, 0 = none
};

inline const std::vector<GadgetInfo>& gadget_registry() {
  static const std::vector<GadgetInfo> registry{
      {"st-subconn", st_subconn_gadget, GadgetShape::square, false},
      {"st-sp-3v5", st_sp_3v5_gadget, GadgetShape::square, false},
      {"triangle", triangle_gadget, GadgetShape::square, false},
      {"ss-subconn", ss_subconn_gadget, GadgetShape::tradeoff, false},
      {"ss-sp-2v4", ss_sp_2v4_gadget, GadgetShape::tradeoff, false},
      {"color-oracle", color_oracle_gadget, GadgetShape::tradeoff, false},
      {"st-sp-3eps", stsp_3eps_gadget, GadgetShape::square, false},
      {"d-failure", dfailure_gadget, GadgetShape::wide, false},
      {"pagh", pagh_gadget, GadgetShape::any, false},
      {"langerman", langerman_gadget, GadgetShape::square, false},
      {"erickson", erickson_gadget, GadgetShape::square, false},
      {"diameter", diameter_gadget, GadgetShape::any, false},
      {"densest", densest_gadget, GadgetShape::square, false, 8},
      {"incr-st-sp", incr_stsp_gadget, GadgetShape::square, true},
      {"partial-st-sp", partial_stsp_gadget, GadgetShape::square, true},
      {"partial-ss-sp", partial_sssp_gadget, GadgetShape::wide, true},
      {"partial-ap-sp", partial_apsp_gadget, GadgetShape::wide, true},
      {"partial-tc", partial_tc_gadget, GadgetShape::wide, true},
      {"partial-matching", partial_matching_gadget, GadgetShape::square, true},
  };
  return registry;
}

inline const GadgetInfo* find_gadget(const std::string& name) {
  for (const auto& g : gadget_registry()) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

// Matrix shape (n1, n2) used for a gadget when the campaign asks for n1 x n2.
inline std::pair<std::size_t, std::size_t> shape_for(GadgetShape shape, std::size_t n1, std::size_t n2, const Rational& delta) {
  if (!(Rational(0) < delta && delta < Rational(1))) throw std::invalid_argument("delta must lie in (0,1)");
  switch (shape) {
    case GadgetShape::any:
      return {n1, n2};
    case GadgetShape::square:
      return {n2, n2};
    case GadgetShape::tradeoff:
      return {std::max<std::size_t>(1, promise_rows(n2, delta / (Rational(1) - delta))), n2};
    case GadgetShape::wide:
      return {std::max<std::size_t>(1, promise_rows(n2, (Rational(1) - delta) / delta)), n2};
  }
  return {n1, n2};
}

inline std::pair<std::size_t, std::size_t> shape_for(const GadgetInfo& info, std::size_t n1, std::size_t n2,
                                                     const Rational& delta) {
  auto [a, b] = shape_for(info.shape, n1, n2, delta);
  if (info.max_side) {
    a = std::min(a, info.max_side);
    b = std::min(b, info.max_side);
  }
  return {a, b};
}

struct RunCheck {
  std::size_t decode_mismatches = 0;
  bool budget_ok = true;
  bool gap_ok = true;
  bool audit_ok = true;
  bool ok() const noexcept { return decode_mismatches == 0 && budget_ok && gap_ok && audit_ok; }
};

inline RunCheck check_run(const GadgetRun& run, const BoolMatrix& m, const std::vector<VectorPair>& pairs) {
  RunCheck c;
  if (run.recovered.size() != pairs.size()) {
    c.decode_mismatches = pairs.size();
  } else {
    for (std::size_t t = 0; t < pairs.size(); ++t) {
      if (run.recovered[t] != vec_mat_vec(pairs[t].u, m, pairs[t].v)) ++c.decode_mismatches;
    }
  }
  c.budget_ok = run.within_budget();
  c.gap_ok = run.gap_violations == 0;
  c.audit_ok = run.audit_failures == 0;
  return c;
}

}  // namespace omv
