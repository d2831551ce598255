#pragma once

// Vector-matrix-vector (u^T M v) machinery: witness listing by binary search,
// OMv reconstructed from an OuMv oracle, and the graph / 2-CNF query problems
// that are equivalent to OuMv.

#include <cstdint>
#include <functional>
#include <istream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "omv/bitcore.hpp"
#include "omv/engines.hpp"
#include "omv/graph.hpp"

namespace omv {

class OuMvOracle {
 public:
  virtual ~OuMvOracle() = default;

  void preprocess(const BoolMatrix& m) {
    rows_ = m.rows();
    cols_ = m.cols();
    do_preprocess(m);
    ready_ = true;
  }

  bool query(const BoolVector& u, const BoolVector& v) {
    if (!ready_) throw std::logic_error("OuMv query before preprocess");
    if (u.size() != rows_ || v.size() != cols_) throw dimension_error("OuMv query dimensions do not match matrix");
    ++queries_;
    return do_query(u, v);
  }

  // Restores the post-preprocessing state; the query counter is kept.
  void rollback() {
    ++rollbacks_;
    do_rollback();
  }

  std::uint64_t queries_used() const noexcept { return queries_; }
  std::uint64_t rollbacks() const noexcept { return rollbacks_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

 protected:
  virtual void do_preprocess(const BoolMatrix& m) = 0;
  virtual bool do_query(const BoolVector& u, const BoolVector& v) = 0;
  virtual void do_rollback() {}

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint64_t queries_ = 0;
  std::uint64_t rollbacks_ = 0;
  bool ready_ = false;
};

using OuMvFactory = std::function<std::unique_ptr<OuMvOracle>()>;

class DirectOuMvOracle final : public OuMvOracle {
 protected:
  void do_preprocess(const BoolMatrix& m) override { matrix_ = m; }
  bool do_query(const BoolVector& u, const BoolVector& v) override { return vec_mat_vec(u, matrix_, v); }

 private:
  BoolMatrix matrix_;
};

// u^T (M v) through an OMv engine. When `capacity` is nonzero the engine is
// rolled back to its preprocessed state after every `capacity` queries, the
// way a fixed-n3 algorithm must be reused.
class EngineOuMvOracle final : public OuMvOracle {
 public:
  explicit EngineOuMvOracle(EngineFactory factory, std::size_t capacity = 0)
      : factory_(std::move(factory)), capacity_(capacity) {}

 protected:
  void do_preprocess(const BoolMatrix& m) override {
    engine_ = factory_();
    engine_->preprocess(m);
    since_reset_ = 0;
  }
  bool do_query(const BoolVector& u, const BoolVector& v) override {
    if (capacity_ != 0 && since_reset_ == capacity_) rollback();
    ++since_reset_;
    return u.intersects(engine_->next(v));
  }
  void do_rollback() override {
    engine_->reset_to_preprocessed();
    since_reset_ = 0;
  }

 private:
  EngineFactory factory_;
  std::size_t capacity_;
  std::size_t since_reset_ = 0;
  std::unique_ptr<OmvEngine> engine_;
};

struct WitnessSet {
  std::vector<std::size_t> indices;  // sorted

  std::size_t size() const noexcept { return indices.size(); }
  bool contains(std::size_t i) const { return std::binary_search(indices.begin(), indices.end(), i); }
  friend bool operator==(const WitnessSet&, const WitnessSet&) = default;
};

// Query budget we assert for list_witnesses: one existence query, then per
// witness a binary search plus one re-check of the remaining set.
constexpr std::uint64_t witness_query_budget(std::size_t n1, std::size_t witnesses) {
  return 1 + static_cast<std::uint64_t>(witnesses) * (2 * ceil_log2(n1) + 1);
}

// Lists {i : u_i and (M v)_i} using only existence queries on masked copies
// of u. Each search halves the candidate set, taking the lower
// floor(|I|/2) indices as the probe.
inline WitnessSet list_witnesses(OuMvOracle& oracle, const BoolVector& u, const BoolVector& v) {
  if (u.size() != oracle.rows() || v.size() != oracle.cols()) {
    throw dimension_error("list_witnesses: vector dimensions do not match oracle");
  }
  auto masked = [&](const std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi) {
    BoolVector m(u.size());
    for (std::size_t k = lo; k < hi; ++k) m.set(idx[k]);
    return m;
  };

  WitnessSet found;
  std::vector<std::size_t> remaining = u.ones_indices();
  if (!oracle.query(masked(remaining, 0, remaining.size()), v)) return found;

  while (true) {
    std::size_t lo = 0, hi = remaining.size();
    while (hi - lo > 1) {
      std::size_t half = (hi - lo) / 2;
      if (oracle.query(masked(remaining, lo, lo + half), v)) {
        hi = lo + half;
      } else {
        lo += half;
      }
    }
    found.indices.push_back(remaining[lo]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(lo));
    if (remaining.empty() || !oracle.query(masked(remaining, 0, remaining.size()), v)) break;
  }
  std::sort(found.indices.begin(), found.indices.end());
  return found;
}

// OMv answered through per-block OuMv instances: for every block-row the
// left vector starts all-ones and each witness found in one block-column is
// cleared before the next, so witnesses are never reported twice.
class OuMvBackedEngine final : public OmvEngine {
 public:
  OuMvBackedEngine(OuMvFactory factory, std::size_t k1, std::size_t k2)
      : factory_(std::move(factory)), k1_(k1), k2_(k2) {
    if (k1 == 0 || k2 == 0) throw std::invalid_argument("block sizes must be >= 1");
  }

  std::string name() const override {
    return "oumv:" + std::to_string(k1_) + "," + std::to_string(k2_);
  }

  std::uint64_t oracle_queries() const {
    std::uint64_t q = 0;
    for (const auto& i : instances_) q += i->queries_used();
    return q;
  }
  const std::vector<std::size_t>& witnesses_per_round() const noexcept { return witnesses_per_round_; }
  std::size_t instance_count() const noexcept { return instances_.size(); }

 protected:
  void do_preprocess(const BoolMatrix& m) override {
    if (k1_ > m.rows() || k2_ > m.cols()) throw std::invalid_argument("block sizes must satisfy k1 <= n1, k2 <= n2");
    row_tiles_ = tile_ranges(m.rows(), k1_);
    col_tiles_ = tile_ranges(m.cols(), k2_);
    instances_.clear();
    fresh_rows_.clear();
    for (std::size_t x = 0; x < row_tiles_.size(); ++x) {
      // rows shared with the previous (overlapping) tile are owned by it
      BoolVector own = BoolVector::ones(k1_);
      if (x > 0) {
        for (std::size_t i = row_tiles_[x].begin; i < row_tiles_[x - 1].end; ++i) own.reset(i - row_tiles_[x].begin);
      }
      fresh_rows_.push_back(std::move(own));
      for (const auto& c : col_tiles_) {
        auto inst = factory_();
        inst->preprocess(block(m, row_tiles_[x], c));
        instances_.push_back(std::move(inst));
      }
    }
    witnesses_per_round_.clear();
  }

  BoolVector do_next(const BoolVector& v) override {
    BoolVector out(rows());
    std::size_t round_witnesses = 0;
    std::vector<BoolVector> parts;
    for (const auto& c : col_tiles_) parts.push_back(v.slice(c.begin, c.size()));
    for (std::size_t x = 0; x < row_tiles_.size(); ++x) {
      BoolVector u = fresh_rows_[x];
      for (std::size_t y = 0; y < col_tiles_.size() && u.any(); ++y) {
        auto w = list_witnesses(*instances_[x * col_tiles_.size() + y], u, parts[y]);
        for (auto i : w.indices) {
          out.set(row_tiles_[x].begin + i);
          u.reset(i);
        }
        round_witnesses += w.size();
      }
    }
    witnesses_per_round_.push_back(round_witnesses);
    return out;
  }

  void do_reset() override {
    for (auto& i : instances_) i->rollback();
    witnesses_per_round_.clear();
  }

 private:
  OuMvFactory factory_;
  std::size_t k1_, k2_;
  std::vector<Range> row_tiles_, col_tiles_;
  std::vector<BoolVector> fresh_rows_;
  std::vector<std::unique_ptr<OuMvOracle>> instances_;
  std::vector<std::size_t> witnesses_per_round_;
};

struct OmvViaOuMvResult {
  std::vector<BoolVector> outputs;
  std::vector<std::size_t> witnesses_per_round;
  std::size_t total_witnesses = 0;
  std::uint64_t oracle_queries = 0;
};

inline OmvViaOuMvResult omv_via_oumv(OuMvFactory factory, const BoolMatrix& m, const std::vector<BoolVector>& vectors,
                                     std::size_t k1, std::size_t k2) {
  OuMvBackedEngine engine(std::move(factory), k1, k2);
  engine.preprocess(m);
  OmvViaOuMvResult r;
  for (const auto& v : vectors) r.outputs.push_back(engine.next(v));
  r.witnesses_per_round = engine.witnesses_per_round();
  for (auto w : r.witnesses_per_round) r.total_witnesses += w;
  r.oracle_queries = engine.oracle_queries();
  return r;
}

// ---------------------------------------------------------------------------
// Query problems equivalent to OuMv. Each adapter has an engine-backed path
// and a direct edge-scan path.

namespace detail {

inline void require_vertex_set(const EdgeListGraph& g, const BoolVector& s) {
  if (s.size() != g.n) throw dimension_error("vertex set length does not match graph order");
}

}  // namespace detail

inline EdgeListGraph graph_from_adjacency(const BoolMatrix& a) {
  if (a.rows() != a.cols()) throw dimension_error("adjacency matrix must be square");
  EdgeListGraph g;
  g.n = a.rows();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    a.row(i).for_each_set([&](std::size_t j) {
      if (i < j) g.add(static_cast<Vertex>(i), static_cast<Vertex>(j));
    });
  }
  return g;
}

// Is S independent? Engine path: S^T A S = 0. Vertex cover: V \ S independent.
class IndependentSetQuery {
 public:
  IndependentSetQuery(const EdgeListGraph& g, const EngineFactory& factory) : graph_(g), engine_(factory()) {
    engine_->preprocess(adjacency_matrix(g));
  }

  bool is_independent(const BoolVector& s) {
    detail::require_vertex_set(graph_, s);
    return !s.intersects(engine_->next(s));
  }
  bool is_vertex_cover(const BoolVector& s) { return is_independent(~s); }

  static bool direct_is_independent(const EdgeListGraph& g, const BoolVector& s) {
    detail::require_vertex_set(g, s);
    for (const auto& e : g.edges) {
      if (s.get(e.a) && s.get(e.b)) return false;
    }
    return true;
  }
  static bool direct_is_vertex_cover(const EdgeListGraph& g, const BoolVector& s) {
    detail::require_vertex_set(g, s);
    for (const auto& e : g.edges) {
      if (!s.get(e.a) && !s.get(e.b)) return false;
    }
    return true;
  }

  const OmvEngine& engine() const { return *engine_; }

 private:
  EdgeListGraph graph_;
  std::unique_ptr<OmvEngine> engine_;
};

// Is there an edge with one endpoint in S and the other in T? Engine path: S^T A T.
class EdgeQuery {
 public:
  EdgeQuery(const EdgeListGraph& g, const EngineFactory& factory) : graph_(g), engine_(factory()) {
    engine_->preprocess(adjacency_matrix(g));
  }

  bool has_edge_between(const BoolVector& s, const BoolVector& t) {
    detail::require_vertex_set(graph_, s);
    detail::require_vertex_set(graph_, t);
    return s.intersects(engine_->next(t));
  }

  static bool direct_has_edge_between(const EdgeListGraph& g, const BoolVector& s, const BoolVector& t) {
    detail::require_vertex_set(g, s);
    detail::require_vertex_set(g, t);
    for (const auto& e : g.edges) {
      if ((s.get(e.a) && t.get(e.b)) || (s.get(e.b) && t.get(e.a))) return true;
    }
    return false;
  }

 private:
  EdgeListGraph graph_;
  std::unique_ptr<OmvEngine> engine_;
};

// S dominates G iff (A S) OR S is all-ones: a single OMv call per query.
class DominatingSetQuery {
 public:
  DominatingSetQuery(const EdgeListGraph& g, const EngineFactory& factory) : graph_(g), engine_(factory()) {
    engine_->preprocess(adjacency_matrix(g));
  }

  bool is_dominating(const BoolVector& s) {
    detail::require_vertex_set(graph_, s);
    return (engine_->next(s) | s).all();
  }

  static bool direct_is_dominating(const EdgeListGraph& g, const BoolVector& s) {
    detail::require_vertex_set(g, s);
    BoolVector covered = s;
    for (const auto& e : g.edges) {
      if (s.get(e.a)) covered.set(e.b);
      if (s.get(e.b)) covered.set(e.a);
    }
    return covered.all();
  }

 private:
  EdgeListGraph graph_;
  std::unique_ptr<OmvEngine> engine_;
};

// u^T M v answered by graph-query structures on the graph whose adjacency is
// [[0, M], [M^T, 0]]: the product is 1 iff u||v is not independent, and iff
// some edge joins u||0 and 0||v.
inline bool oumv_via_independent_set(const BoolMatrix& m, const BoolVector& u, const BoolVector& v) {
  if (u.size() != m.rows() || v.size() != m.cols()) throw dimension_error("oumv_via_independent_set: dimensions");
  auto g = graph_from_adjacency(symmetrize(m));
  return !IndependentSetQuery::direct_is_independent(g, lift_vectors(u, v).w);
}

inline bool oumv_via_edge_query(const BoolMatrix& m, const BoolVector& u, const BoolVector& v) {
  if (u.size() != m.rows() || v.size() != m.cols()) throw dimension_error("oumv_via_edge_query: dimensions");
  auto g = graph_from_adjacency(symmetrize(m));
  auto lifted = lift_vectors(u, v);
  return EdgeQuery::direct_has_edge_between(g, lifted.x, lifted.y);
}

// 2-CNF over variables 1..n. Literals are signed 1-based indices.
struct Cnf2 {
  std::size_t variables = 0;
  std::vector<std::pair<int, int>> clauses;

  bool literal_true(int lit, const BoolVector& x) const {
    auto var = static_cast<std::size_t>(lit < 0 ? -lit : lit) - 1;
    return lit > 0 ? x.get(var) : !x.get(var);
  }

  bool evaluate(const BoolVector& x) const {
    if (x.size() != variables) throw dimension_error("assignment length does not match variable count");
    for (auto [a, b] : clauses) {
      if (!literal_true(a, x) && !literal_true(b, x)) return false;
    }
    return true;
  }

  // One clause per line: two signed 1-based indices. Blank lines are skipped.
  static Cnf2 parse(std::istream& in, std::size_t variables) {
    Cnf2 f;
    f.variables = variables;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream ls(line);
      long long a = 0, b = 0;
      std::string extra;
      if (!(ls >> a >> b) || (ls >> extra)) throw parse_error("clause must be two signed variable indices", lineno);
      for (auto lit : {a, b}) {
        if (lit == 0 || static_cast<std::size_t>(lit < 0 ? -lit : lit) > variables) {
          throw parse_error("literal out of range", lineno);
        }
      }
      f.clauses.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
    return f;
  }

  static std::size_t literal_vertex(int lit) {
    auto var = static_cast<std::size_t>(lit < 0 ? -lit : lit) - 1;
    return 2 * var + (lit < 0 ? 1 : 0);
  }
};

// F(X) = 1 iff the literals X falsifies form an independent set of the
// conflict graph (one vertex per literal, one edge per clause). A clause
// repeating a literal cannot be an edge and is checked directly.
class Cnf2Query {
 public:
  Cnf2Query(const Cnf2& f, const EngineFactory& factory) : formula_(f) {
    EdgeListGraph g;
    g.n = 2 * f.variables;
    BoolMatrix seen(g.n, g.n);
    for (auto [a, b] : f.clauses) {
      auto va = Cnf2::literal_vertex(a), vb = Cnf2::literal_vertex(b);
      if (va == vb) {
        unit_literals_.push_back(a);
      } else if (!seen.get(va, vb)) {
        seen.set(va, vb);
        seen.set(vb, va);
        g.add(static_cast<Vertex>(va), static_cast<Vertex>(vb));
      }
    }
    independent_ = std::make_unique<IndependentSetQuery>(g, factory);
  }

  bool satisfied(const BoolVector& x) {
    if (x.size() != formula_.variables) throw dimension_error("assignment length does not match variable count");
    for (int lit : unit_literals_) {
      if (!formula_.literal_true(lit, x)) return false;
    }
    BoolVector falsified(2 * formula_.variables);
    for (std::size_t k = 0; k < formula_.variables; ++k) falsified.set(2 * k + (x.get(k) ? 1 : 0));
    return independent_->is_independent(falsified);
  }

 private:
  Cnf2 formula_;
  std::vector<int> unit_literals_;
  std::unique_ptr<IndependentSetQuery> independent_;
};

}  // namespace omv
