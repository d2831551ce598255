#pragma once

// Operation scripts: one operation per line, '#' starts a comment.
//
//   on v | off v                 vertex toggles (subgraph connectivity)
//   ins a b [w] | del a b        edge updates
//   fail v1 v2 ... | restore     d-failure batch / roll back to original
//   color v c                    recolor a vertex
//   q s t                        connectivity, distance or reachability
//   qs v                         single-source distance (Even-Shiloach)
//   qc s c                       distance from s to color c
//   tri s | anytri               triangle through s / anywhere
//   match | diam | dens          matching size, diameter, densest density
//   inter i j | mem i x          intersection insert / membership
//   set i x | zp                 array write / zero-prefix query
//   incr i | incc j | max        row/column increment / max query
//   snap | roll                  snapshot / rollback

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "omv/array_oracles.hpp"
#include "omv/errors.hpp"
#include "omv/graph_oracles.hpp"

namespace omv {

struct ScriptOp {
  std::string op;
  std::vector<std::int64_t> args;
  std::size_t line = 0;
};

namespace detail {

// -1 marks a variable argument count.
inline const std::map<std::string, int>& script_arity() {
  static const std::map<std::string, int> table{
      {"on", 1},    {"off", 1},  {"ins", -1},  {"del", 2},     {"fail", -1}, {"restore", 0}, {"color", 2},
      {"q", 2},     {"qs", 1},   {"qc", 2},    {"tri", 1},     {"anytri", 0}, {"match", 0},  {"diam", 0},
      {"dens", 0},  {"inter", 2}, {"mem", 2},  {"set", 2},     {"zp", 0},    {"incr", 1},    {"incc", 1},
      {"max", 0},   {"snap", 0}, {"roll", 0}};
  return table;
}

inline Vertex vtx(const ScriptOp& op, std::size_t k) {
  if (op.args[k] < 0) throw parse_error("negative vertex index", op.line);
  return static_cast<Vertex>(op.args[k]);
}

inline std::string bit(bool b) { return b ? "1" : "0"; }

[[noreturn]] inline void unsupported(const ScriptOp& op) {
  throw usage_error("line " + std::to_string(op.line) + ": operation '" + op.op + "' not supported by this oracle");
}

inline bool common_op(OracleCounters& o, const ScriptOp& op) {
  if (op.op == "snap") {
    o.snapshot();
    return true;
  }
  if (op.op == "roll") {
    o.rollback();
    return true;
  }
  return false;
}

}  // namespace detail

inline std::vector<ScriptOp> parse_script(std::istream& in) {
  std::vector<ScriptOp> ops;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    ScriptOp op;
    op.line = lineno;
    if (!(ls >> op.op)) continue;
    auto it = detail::script_arity().find(op.op);
    if (it == detail::script_arity().end()) throw parse_error("unknown operation '" + op.op + "'", lineno);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        op.args.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::logic_error&) {
        throw parse_error("bad integer '" + tok + "'", lineno);
      }
    }
    int arity = it->second;
    bool ok = arity >= 0 ? op.args.size() == static_cast<std::size_t>(arity)
                         : (op.op == "ins" ? (op.args.size() == 2 || op.args.size() == 3) : true);
    if (!ok) throw parse_error("wrong argument count for '" + op.op + "'", lineno);
    ops.push_back(std::move(op));
  }
  return ops;
}

inline std::optional<std::string> apply(SubgraphConnectivityOracle& o, const ScriptOp& op) {
  using namespace detail;
  if (common_op(o, op)) return std::nullopt;
  if (op.op == "on") {
    o.turn_on(vtx(op, 0));
  } else if (op.op == "off") {
    o.turn_off(vtx(op, 0));
  } else if (op.op == "q") {
    return bit(o.connected(vtx(op, 0), vtx(op, 1)));
  } else {
    unsupported(op);
  }
  return std::nullopt;
}

inline std::optional<std::string> apply(DistanceOracle& o, const ScriptOp& op) {
  using namespace detail;
  if (common_op(o, op)) return std::nullopt;
  if (op.op == "ins") {
    o.insert_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "del") {
    o.delete_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "q") {
    return o.graph().directed() ? bit(o.reach(vtx(op, 0), vtx(op, 1))) : dist_string(o.dist(vtx(op, 0), vtx(op, 1)));
  } else {
    unsupported(op);
  }
  return std::nullopt;
}

inline std::optional<std::string> apply(EvenShiloachOracle& o, const ScriptOp& op) {
  using namespace detail;
  if (common_op(o, op)) return std::nullopt;
  if (op.op == "ins") {
    o.insert_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "del") {
    o.delete_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "qs") {
    return dist_string(o.dist(vtx(op, 0)));
  } else {
    unsupported(op);
  }
  return std::nullopt;
}

inline std::optional<std::string> apply(TriangleOracle& o, const ScriptOp& op) {
  using namespace detail;
  if (common_op(o, op)) return std::nullopt;
  if (op.op == "ins") {
    o.insert_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "del") {
    o.delete_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "tri") {
    return bit(o.triangle_at(vtx(op, 0)));
  } else if (op.op == "anytri") {
    return bit(o.has_triangle());
  } else {
    unsupported(op);
  }
  return std::nullopt;
}

inline std::optional<std::string> apply(ColorDistanceOracle& o, const ScriptOp& op) {
  using namespace detail;
  if (common_op(o, op)) return std::nullopt;
  if (op.op == "ins") {
    o.insert_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "del") {
    o.delete_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "color") {
    o.set_color(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "qc") {
    return dist_string(o.dist_to_color(vtx(op, 0), vtx(op, 1)));
  } else {
    unsupported(op);
  }
  return std::nullopt;
}

inline std::optional<std::string> apply(DFailureOracle& o, const ScriptOp& op) {
  using namespace detail;
  if (common_op(o, op)) return std::nullopt;
  if (op.op == "fail") {
    std::vector<Vertex> batch;
    for (std::size_t k = 0; k < op.args.size(); ++k) batch.push_back(vtx(op, k));
    o.fail(batch);
  } else if (op.op == "restore") {
    o.restore();
  } else if (op.op == "q") {
    return bit(o.connected(vtx(op, 0), vtx(op, 1)));
  } else {
    unsupported(op);
  }
  return std::nullopt;
}

inline std::optional<std::string> apply(MatchingOracle& o, const ScriptOp& op) {
  using namespace detail;
  if (common_op(o, op)) return std::nullopt;
  if (op.op == "ins") {
    o.insert_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "del") {
    o.delete_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "match") {
    return std::to_string(o.size());
  } else {
    unsupported(op);
  }
  return std::nullopt;
}

inline std::optional<std::string> apply(DiameterOracle& o, const ScriptOp& op) {
  using namespace detail;
  if (common_op(o, op)) return std::nullopt;
  if (op.op == "ins") {
    auto w = op.args.size() == 3 ? op.args[2] : 1;
    if (w != 0 && w != 1) throw parse_error("edge weight must be 0 or 1", op.line);
    o.insert_edge(vtx(op, 0), vtx(op, 1), static_cast<std::uint8_t>(w));
  } else if (op.op == "del") {
    o.delete_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "diam") {
    return dist_string(o.diameter());
  } else {
    unsupported(op);
  }
  return std::nullopt;
}

inline std::optional<std::string> apply(TransitiveClosureOracle& o, const ScriptOp& op) {
  using namespace detail;
  if (common_op(o, op)) return std::nullopt;
  if (op.op == "ins") {
    o.insert_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "del") {
    o.delete_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "q") {
    return bit(o.reachable(vtx(op, 0), vtx(op, 1)));
  } else {
    unsupported(op);
  }
  return std::nullopt;
}

inline std::optional<std::string> apply(DensestSubgraphOracle& o, const ScriptOp& op) {
  using namespace detail;
  if (common_op(o, op)) return std::nullopt;
  if (op.op == "ins") {
    o.insert_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "del") {
    o.delete_edge(vtx(op, 0), vtx(op, 1));
  } else if (op.op == "dens") {
    return o.densest().str();
  } else {
    unsupported(op);
  }
  return std::nullopt;
}

inline std::optional<std::string> apply(PaghOracle& o, const ScriptOp& op) {
  using namespace detail;
  if (common_op(o, op)) return std::nullopt;
  if (op.op == "inter") {
    return std::to_string(o.insert_intersection(vtx(op, 0), vtx(op, 1)));
  } else if (op.op == "mem") {
    return bit(o.member(vtx(op, 0), vtx(op, 1)));
  } else {
    unsupported(op);
  }
}

inline std::optional<std::string> apply(ZeroPrefixOracle& o, const ScriptOp& op) {
  using namespace detail;
  if (common_op(o, op)) return std::nullopt;
  if (op.op == "set") {
    o.set(vtx(op, 0), op.args[1]);
  } else if (op.op == "zp") {
    return bit(o.has_zero_prefix());
  } else {
    unsupported(op);
  }
  return std::nullopt;
}

inline std::optional<std::string> apply(EricksonOracle& o, const ScriptOp& op) {
  using namespace detail;
  if (common_op(o, op)) return std::nullopt;
  if (op.op == "incr") {
    o.inc_row(vtx(op, 0));
  } else if (op.op == "incc") {
    o.inc_col(vtx(op, 0));
  } else if (op.op == "max") {
    return std::to_string(o.max());
  } else {
    unsupported(op);
  }
  return std::nullopt;
}

}  // namespace omv
