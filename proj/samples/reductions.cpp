// Walks through the main pieces on small inputs: engines, witness listing,
// a few gadget reductions, and the multiphase composition.

#include <iostream>
#include <random>
#include <sstream>

#include "omv/omv.hpp"

using namespace omv;

namespace {

BoolVector random_vector(std::mt19937_64& rng, std::size_t n, unsigned one_in = 2) {
  BoolVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, rng() % one_in == 0);
  return v;
}

}  // namespace

int main() {
  std::mt19937_64 rng(1);
  const std::size_t n = 12;
  BoolMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.row(i) = random_vector(rng, n, 9);

  std::cout << "matrix:\n";
  write_matrix(std::cout, m);

  // The same vector stream through three engines.
  auto naive = make_engine("naive");
  auto lookup = make_engine("lookup:3");
  auto tiled = make_engine("tiled:5,5:lookup:2");
  for (auto* e : {naive.get(), lookup.get(), tiled.get()}) e->preprocess(m);
  for (int t = 0; t < 3; ++t) {
    auto v = random_vector(rng, n);
    auto a = naive->next(v), b = lookup->next(v), c = tiled->next(v);
    std::cout << "v=" << v.to_string() << "  Mv=" << a.to_string() << (a == b && b == c ? "  (engines agree)" : "  MISMATCH")
              << '\n';
  }

  // Witnesses of u^T M v from existence queries alone.
  DirectOuMvOracle oracle;
  oracle.preprocess(m);
  auto u = random_vector(rng, n), v = random_vector(rng, n);
  auto w = list_witnesses(oracle, u, v);
  std::cout << "witnesses:";
  for (auto i : w.indices) std::cout << ' ' << i;
  std::cout << "  queries=" << oracle.queries_used() << " budget=" << witness_query_budget(n, w.size()) << '\n';

  // Gadgets decode u^T M v from dynamic-structure answers.
  std::vector<VectorPair> pairs;
  for (int t = 0; t < 4; ++t) pairs.push_back({random_vector(rng, n, 4), random_vector(rng, n, 4)});
  for (const char* name : {"st-subconn", "st-sp-3v5", "erickson", "partial-st-sp"}) {
    const auto* info = find_gadget(name);
    auto run = info->run(m, pairs, GadgetConfig{});
    auto check = check_run(run, m, pairs);
    std::cout << name << ": decoded";
    for (bool b : run.recovered) std::cout << ' ' << b;
    std::cout << "  updates=" << run.updates_used << '/' << run.budget_updates << " queries=" << run.queries_used << '/'
              << run.budget_queries << (check.ok() ? "  ok" : "  FAILED") << '\n';
  }

  // Densest subgraph on the smallest instance.
  auto d = densest_gadget(BoolMatrix::from_strings({"1"}), {{BoolVector::ones(1), BoolVector::ones(1)}}, {});
  std::cout << "densest n=1: density " << *d.probes[0].value << " on " << d.probes[0].aux << " vertices\n";

  // A script against a dynamic oracle.
  DistanceOracle dist(DynGraph(4));
  std::istringstream script("ins 0 1\nins 1 2\nins 2 3\nq 0 3\ndel 1 2\nq 0 3\n");
  for (const auto& op : parse_script(script)) {
    if (auto out = apply(dist, op)) std::cout << "script line " << op.line << ": " << *out << '\n';
  }

  // Subgraph connectivity turned into an OMv solver through the multiphase view.
  std::vector<BoolVector> vs;
  for (int t = 0; t < 4; ++t) vs.push_back(random_vector(rng, n));
  auto sched = omv_via_dynamic_multiphase<SubgraphConnectivityOracle>(subconn_multiphase_plan(), m, vs);
  bool same = true;
  for (std::size_t t = 0; t < vs.size(); ++t) same = same && sched.outputs[t] == mat_vec(m, vs[t]);
  std::cout << "multiphase: operations=" << sched.operations << " bound=" << sched.bound
            << (same ? "  outputs match" : "  MISMATCH") << '\n';
  return 0;
}
