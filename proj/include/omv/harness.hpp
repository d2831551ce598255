#pragma once

// Campaign driver behind omvtool: instance generation, verification,
// benchmarking and report summaries. All randomness comes from one seed;
// each (target, size, trial) draws from its own substream.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <locale>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "omv/bitcore.hpp"
#include "omv/engines.hpp"
#include "omv/errors.hpp"
#include "omv/gadgets.hpp"
#include "omv/rational.hpp"

namespace omv {

struct SizeTriple {
  std::size_t n1 = 0, n2 = 0, n3 = 0;
  friend bool operator==(const SizeTriple&, const SizeTriple&) = default;
};

struct Campaign {
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::vector<SizeTriple> sizes{{8, 8, 4}};
  Rational density{1, 2};
  std::vector<std::string> targets;
  UndoMode mode = UndoMode::undo;
  Rational epsilon{1};
  Rational delta{1, 2};
  bool incremental = false;
  bool inject_faults = false;
};

inline std::string to_string(const SizeTriple& s) {
  return std::to_string(s.n1) + "x" + std::to_string(s.n2) + "x" + std::to_string(s.n3);
}

inline std::vector<SizeTriple> parse_sizes(std::string_view text) {
  std::vector<SizeTriple> out;
  std::string item;
  if (!text.empty() && text.back() == ',') throw usage_error("trailing comma in size list");
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    SizeTriple s;
    char x1 = 0, x2 = 0;
    std::istringstream is(item);
    if (!(is >> s.n1 >> x1 >> s.n2 >> x2 >> s.n3) || x1 != 'x' || x2 != 'x' || is.peek() != EOF) {
      throw usage_error("size must look like n1xn2xn3, got '" + item + "'");
    }
    if (s.n1 == 0 || s.n2 == 0) throw usage_error("matrix dimensions must be positive in '" + item + "'");
    out.push_back(s);
  }
  if (out.empty()) throw usage_error("empty size list");
  return out;
}

inline std::vector<std::string> default_engine_targets() {
  return {"naive", "lookup", "lookup:4", "tiled:2,3:naive", "majority:5:lookup:2"};
}

// Comma-separated, except the comma inside "tiled:k1,k2:...". Aliases:
// "gadgets" for every gadget, "engines" for the default engine set.
inline std::vector<std::string> parse_targets(std::string_view text) {
  std::vector<std::string> raw, out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) raw.push_back(item);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    std::string t = raw[k];
    auto colon = t.rfind(':');
    bool open_tile = t.find("tiled:") != std::string::npos && colon != std::string::npos &&
                     t.find_first_not_of("0123456789", colon + 1) == std::string::npos && k + 1 < raw.size();
    if (open_tile) t += "," + raw[++k];
    if (t == "gadgets") {
      for (const auto& g : gadget_registry()) out.push_back(g.name);
    } else if (t == "engines") {
      for (auto& e : default_engine_targets()) out.push_back(e);
    } else if (!t.empty()) {
      out.push_back(t);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Randomness

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

inline std::uint64_t substream(std::uint64_t seed, std::string_view target, std::size_t size_index, std::size_t trial) {
  return splitmix64(splitmix64(splitmix64(seed) ^ fnv1a(target)) ^ splitmix64((size_index << 32) ^ trial));
}

inline bool draw_bit(std::mt19937_64& rng, const Rational& density) {
  const auto q = static_cast<std::uint64_t>(density.den());
  const auto p = static_cast<std::uint64_t>(density.num());
  return rng() % q < p;
}

inline BoolVector random_vector(std::mt19937_64& rng, std::size_t len, const Rational& density) {
  BoolVector v(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (draw_bit(rng, density)) v.set(i);
  }
  return v;
}

inline BoolMatrix random_matrix(std::mt19937_64& rng, std::size_t n1, std::size_t n2, const Rational& density) {
  BoolMatrix m(n1, n2);
  for (std::size_t i = 0; i < n1; ++i) m.row(i) = random_vector(rng, n2, density);
  return m;
}

struct TrialInstance {
  BoolMatrix matrix;
  std::vector<VectorPair> pairs;
  std::uint64_t stream = 0;
};

inline TrialInstance make_instance(const Campaign& c, std::string_view target, std::size_t size_index, std::size_t trial,
                                   std::size_t n1, std::size_t n2, std::size_t n3) {
  TrialInstance inst;
  inst.stream = substream(c.seed, target, size_index, trial);
  std::mt19937_64 rng(inst.stream);
  inst.matrix = random_matrix(rng, n1, n2, c.density);
  for (std::size_t t = 0; t < n3; ++t) {
    auto u = random_vector(rng, n1, c.density);
    auto v = random_vector(rng, n2, c.density);
    inst.pairs.push_back({std::move(u), std::move(v)});
  }
  return inst;
}

inline void check_density(const Rational& d) {
  if (d < Rational(0) || d > Rational(1)) throw usage_error("density must lie in [0, 1]");
}

inline std::ostringstream classic_stream() {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  return os;
}

// ---------------------------------------------------------------------------
// gen

struct GeneratedFile {
  std::filesystem::path matrix_path;
  std::filesystem::path vectors_path;
  std::size_t popcount = 0;
};

// Writes m_<size>_<trial>.txt (matrix format) and v_<size>_<trial>.txt
// (alternating u and v lines) plus a manifest with matrix popcounts.
inline std::vector<GeneratedFile> cmd_gen(const Campaign& c, const std::filesystem::path& dir) {
  check_density(c.density);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create directory '" + dir.string() + "': " + ec.message());
  auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw io_error("cannot write '" + p.string() + "'");
    return f;
  };
  std::vector<GeneratedFile> files;
  auto manifest = open(dir / "manifest.txt");
  for (std::size_t s = 0; s < c.sizes.size(); ++s) {
    const auto& sz = c.sizes[s];
    for (std::size_t t = 0; t < c.trials; ++t) {
      auto inst = make_instance(c, "gen", s, t, sz.n1, sz.n2, sz.n3);
      auto tag = to_string(sz) + "_" + std::to_string(t);
      GeneratedFile g{dir / ("m_" + tag + ".txt"), dir / ("v_" + tag + ".txt"), inst.matrix.popcount()};
      auto mf = open(g.matrix_path);
      write_matrix(mf, inst.matrix);
      auto vf = open(g.vectors_path);
      for (const auto& p : inst.pairs) {
        write_vector(vf, p.u);
        write_vector(vf, p.v);
      }
      if (!mf || !vf) throw io_error("write failed under '" + dir.string() + "'");
      manifest << g.matrix_path.filename().string() << " popcount=" << g.popcount << '\n';
      files.push_back(std::move(g));
    }
  }
  if (!manifest) throw io_error("write failed for manifest");
  return files;
}

// ---------------------------------------------------------------------------
// verify

struct TargetSummary {
  std::string target;
  std::size_t trials = 0;
  std::size_t rounds = 0;
  std::size_t mismatches = 0;
  std::uint64_t gap_violations = 0;
  std::uint64_t audit_failures = 0;
  std::uint64_t budget_violations = 0;
  Rational worst_update_ratio{0};
  Rational worst_query_ratio{0};
  std::size_t fault_trials = 0;
  std::size_t faults_fired = 0;
  std::size_t faults_detected = 0;

  bool clean() const noexcept {
    return mismatches == 0 && gap_violations == 0 && audit_failures == 0 && budget_violations == 0;
  }
};

struct VerifyReport {
  std::vector<TargetSummary> targets;
  std::string text;
  bool pass = true;
};

namespace harness_detail {

inline Rational ratio(std::uint64_t used, std::uint64_t budget) {
  if (budget == 0) return Rational(used == 0 ? 0 : 1'000'000);
  return Rational(static_cast<std::int64_t>(used), static_cast<std::int64_t>(budget));
}

inline GadgetConfig config_for(const Campaign& c) {
  GadgetConfig cfg;
  cfg.epsilon = c.epsilon;
  cfg.delta = c.delta;
  cfg.mode = c.mode;
  cfg.incremental = c.incremental;
  return cfg;
}

inline void verify_gadget(const Campaign& c, const GadgetInfo& info, TargetSummary& sum) {
  const auto cfg = config_for(c);
  for (std::size_t s = 0; s < c.sizes.size(); ++s) {
    auto [n1, n2] = shape_for(info, c.sizes[s].n1, c.sizes[s].n2, c.delta);
    for (std::size_t t = 0; t < c.trials; ++t) {
      auto inst = make_instance(c, info.name, s, t, n1, n2, c.sizes[s].n3);
      auto run = info.run(inst.matrix, inst.pairs, cfg);
      auto chk = check_run(run, inst.matrix, inst.pairs);
      ++sum.trials;
      sum.rounds += run.rounds;
      sum.mismatches += chk.decode_mismatches;
      sum.gap_violations += run.gap_violations;
      sum.audit_failures += run.audit_failures;
      if (!chk.budget_ok) ++sum.budget_violations;
      sum.worst_update_ratio = std::max(sum.worst_update_ratio, ratio(run.updates_used, run.budget_updates));
      sum.worst_query_ratio = std::max(sum.worst_query_ratio, ratio(run.queries_used, run.budget_queries));
      if (!c.inject_faults || run.queries_used == 0) continue;
      // Flip one answer among those the clean run actually asked.
      auto faulty = cfg;
      faulty.audit = true;
      faulty.fault_query = splitmix64(inst.stream ^ 0xFA17ULL) % run.queries_used;
      auto bad = info.run(inst.matrix, inst.pairs, faulty);
      auto bad_chk = check_run(bad, inst.matrix, inst.pairs);
      ++sum.fault_trials;
      if (bad.fault_fired) ++sum.faults_fired;
      if (bad.fault_fired && (bad_chk.decode_mismatches > 0 || bad.audit_failures > 0)) ++sum.faults_detected;
    }
  }
}

inline void verify_engine(const Campaign& c, const std::string& spec, TargetSummary& sum) {
  auto factory = make_engine_factory(spec);
  for (std::size_t s = 0; s < c.sizes.size(); ++s) {
    const auto& sz = c.sizes[s];
    for (std::size_t t = 0; t < c.trials; ++t) {
      auto inst = make_instance(c, spec, s, t, sz.n1, sz.n2, sz.n3);
      auto engine = factory();
      engine->preprocess(inst.matrix);
      ++sum.trials;
      for (const auto& p : inst.pairs) {
        ++sum.rounds;
        if (engine->next(p.v) != mat_vec(inst.matrix, p.v)) ++sum.mismatches;
      }
    }
  }
}

}  // namespace harness_detail

// Deterministic key=value report. Fails on any mismatch, gap or budget
// violation, audit failure, or detected injected fault.
inline VerifyReport cmd_verify(const Campaign& c) {
  check_density(c.density);
  if (c.targets.empty()) throw usage_error("no targets given");
  VerifyReport rep;
  auto os = classic_stream();
  os << "campaign seed=" << c.seed << " trials=" << c.trials << " sizes=";
  for (std::size_t s = 0; s < c.sizes.size(); ++s) os << (s ? "," : "") << to_string(c.sizes[s]);
  os << " density=" << c.density << " undo_mode=" << to_string(c.mode) << " epsilon=" << c.epsilon
     << " delta=" << c.delta << " incremental=" << (c.incremental ? 1 : 0) << " inject_faults=" << (c.inject_faults ? 1 : 0)
     << '\n';
  for (const auto& target : c.targets) {
    TargetSummary sum;
    sum.target = target;
    if (const auto* info = find_gadget(target)) {
      harness_detail::verify_gadget(c, *info, sum);
    } else {
      harness_detail::verify_engine(c, target, sum);
    }
    bool ok = sum.clean() && sum.faults_detected == 0;
    rep.pass = rep.pass && ok;
    os << "target=" << sum.target << " trials=" << sum.trials << " rounds=" << sum.rounds
       << " mismatches=" << sum.mismatches << " gap_violations=" << sum.gap_violations
       << " audit_failures=" << sum.audit_failures << " budget_violations=" << sum.budget_violations
       << " worst_update_ratio=" << sum.worst_update_ratio << " worst_query_ratio=" << sum.worst_query_ratio;
    if (c.inject_faults) {
      os << " fault_trials=" << sum.fault_trials << " faults_fired=" << sum.faults_fired
         << " faults_detected=" << sum.faults_detected;
    }
    os << " status=" << (ok ? "pass" : "fail") << '\n';
    rep.targets.push_back(std::move(sum));
  }
  os << "result=" << (rep.pass ? "pass" : "fail") << '\n';
  rep.text = os.str();
  return rep;
}

// ---------------------------------------------------------------------------
// bench

struct BenchRow {
  std::string target;
  std::size_t n1 = 0, n2 = 0, n3 = 0, trials = 0;
  std::uint64_t preprocess_ns = 0, total_ns = 0, updates = 0, queries = 0, table_bytes = 0;
};

inline const char* bench_header() { return "target,n1,n2,n3,trials,preprocess_ns,total_ns,updates,queries,table_bytes"; }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

inline std::string to_csv(const std::vector<BenchRow>& rows) {
  auto os = classic_stream();
  os << bench_header() << '\n';
  for (const auto& r : rows) {
    os << csv_field(r.target) << ',' << r.n1 << ',' << r.n2 << ',' << r.n3 << ',' << r.trials << ',' << r.preprocess_ns
       << ',' << r.total_ns << ',' << r.updates << ',' << r.queries << ',' << r.table_bytes << '\n';
  }
  return os.str();
}

// One row per (target, size). For engines total_ns sums the per-vector times;
// for gadgets it is the whole run. Timing is report-only.
inline std::vector<BenchRow> cmd_bench(const Campaign& c) {
  check_density(c.density);
  if (c.targets.empty()) throw usage_error("no targets given");
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  const auto cfg = harness_detail::config_for(c);
  for (const auto& target : c.targets) {
    const auto* info = find_gadget(target);
    EngineFactory factory = info ? EngineFactory{} : make_engine_factory(target);
    for (std::size_t s = 0; s < c.sizes.size(); ++s) {
      const auto& sz = c.sizes[s];
      BenchRow row{target, sz.n1, sz.n2, sz.n3, c.trials};
      if (info) std::tie(row.n1, row.n2) = shape_for(*info, sz.n1, sz.n2, c.delta);
      for (std::size_t t = 0; t < c.trials; ++t) {
        auto inst = make_instance(c, "bench", s, t, row.n1, row.n2, sz.n3);
        if (info) {
          auto start = clock::now();
          auto run = info->run(inst.matrix, inst.pairs, cfg);
          row.total_ns += static_cast<std::uint64_t>(std::chrono::duration_cast<Nanos>(clock::now() - start).count());
          row.updates += run.updates_used;
          row.queries += run.queries_used;
        } else {
          auto engine = factory();
          engine->preprocess(inst.matrix);
          for (const auto& p : inst.pairs) engine->next(p.v);
          row.preprocess_ns += static_cast<std::uint64_t>(engine->stats().preprocess_elapsed.count());
          row.total_ns += static_cast<std::uint64_t>(engine->stats().total_elapsed().count());
          row.table_bytes = std::max<std::uint64_t>(row.table_bytes, engine->stats().table_bytes);
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// report

inline std::vector<std::string> split_csv_line(const std::string& line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    char ch = line[k];
    if (quoted) {
      if (ch == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw parse_error("unterminated quote", lineno);
  out.push_back(std::move(cur));
  return out;
}

inline std::vector<BenchRow> parse_bench_csv(std::istream& in) {
  std::vector<BenchRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  auto num = [](const std::string& s, std::size_t ln) -> std::uint64_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw parse_error("bad number '" + s + "'", ln);
    try {
      return std::stoull(s);
    } catch (const std::out_of_range&) {
      throw parse_error("number out of range '" + s + "'", ln);
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != bench_header()) throw parse_error("expected header '" + std::string(bench_header()) + "'", lineno);
      header = true;
      continue;
    }
    auto f = split_csv_line(line, lineno);
    if (f.size() != 10) throw parse_error("expected 10 fields, got " + std::to_string(f.size()), lineno);
    BenchRow r;
    r.target = f[0];
    r.n1 = num(f[1], lineno);
    r.n2 = num(f[2], lineno);
    r.n3 = num(f[3], lineno);
    r.trials = num(f[4], lineno);
    r.preprocess_ns = num(f[5], lineno);
    r.total_ns = num(f[6], lineno);
    r.updates = num(f[7], lineno);
    r.queries = num(f[8], lineno);
    r.table_bytes = num(f[9], lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline double per_vector_ns(const BenchRow& r) {
  const double denom = static_cast<double>(std::max<std::size_t>(1, r.trials * r.n3));
  return static_cast<double>(r.total_ns) / denom;
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  auto k = xs.size() / 2;
  return xs.size() % 2 ? xs[k] : (xs[k - 1] + xs[k]) / 2;
}

// Per-target medians, then one ratio line per lookup row that has a naive
// row of the same size.
inline std::string cmd_report(const std::vector<BenchRow>& rows) {
  auto os = classic_stream();
  os << std::fixed << std::setprecision(1);
  std::vector<std::string> order;
  std::map<std::string, std::vector<const BenchRow*>> by_target;
  for (const auto& r : rows) {
    if (!by_target.count(r.target)) order.push_back(r.target);
    by_target[r.target].push_back(&r);
  }
  for (const auto& t : order) {
    std::vector<double> pre, tot, per;
    for (const auto* r : by_target[t]) {
      pre.push_back(static_cast<double>(r->preprocess_ns));
      tot.push_back(static_cast<double>(r->total_ns));
      per.push_back(per_vector_ns(*r));
    }
    os << "target=" << t << " rows=" << by_target[t].size() << " median_preprocess_ns=" << median(pre)
       << " median_total_ns=" << median(tot) << " median_per_vector_ns=" << median(per) << '\n';
  }
  os << std::setprecision(4);
  for (const auto& r : rows) {
    if (r.target.rfind("lookup", 0) != 0) continue;
    for (const auto& base : rows) {
      if (base.target != "naive" || base.n1 != r.n1 || base.n2 != r.n2 || base.n3 != r.n3) continue;
      double b = per_vector_ns(base);
      os << "ratio target=" << r.target << " baseline=naive size=" << to_string(SizeTriple{r.n1, r.n2, r.n3})
         << " per_vector_ratio=" << (b > 0 ? per_vector_ns(r) / b : 0.0) << '\n';
      break;
    }
  }
  return os.str();
}

// Long format for plotting: target,n1,n2,n3,metric,value.
inline std::string report_long_csv(const std::vector<BenchRow>& rows) {
  auto os = classic_stream();
  os << "target,n1,n2,n3,metric,value\n";
  for (const auto& r : rows) {
    auto emit = [&](const char* metric, std::uint64_t v) {
      os << csv_field(r.target) << ',' << r.n1 << ',' << r.n2 << ',' << r.n3 << ',' << metric << ',' << v << '\n';
    };
    emit("preprocess_ns", r.preprocess_ns);
    emit("total_ns", r.total_ns);
    emit("updates", r.updates);
    emit("queries", r.queries);
    emit("table_bytes", r.table_bytes);
  }
  return os.str();
}

}  // namespace omv
