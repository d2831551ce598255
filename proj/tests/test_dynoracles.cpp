#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "omv/densest.hpp"
#include "omv/dynoracles.hpp"
#include "omv/flow.hpp"
#include "oracle_soak.hpp"

using namespace omv;
using namespace omv::test;

namespace {

DynGraph path(std::size_t n) {
  DynGraph g(n);
  for (Vertex v = 0; v + 1 < n; ++v) g.insert_edge(v, v + 1);
  return g;
}

std::vector<std::string> run(auto& oracle, const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (const auto& op : parse_script(in)) {
    if (auto line = apply(oracle, op)) out.push_back(*line);
  }
  return out;
}

}  // namespace

TEST(Soak, EveryOracleMatchesRecompute) {
  for (const auto& [name, soak] : all_soaks()) {
    for (std::uint64_t seed : {1u, 2u}) {
      auto r = soak(seed, 2000);
      EXPECT_GE(r.ops, 2000u) << name;
      EXPECT_EQ(r.mismatches, 0u) << name << " seed " << seed;
      EXPECT_EQ(r.monotonic_violations, 0u) << name;
    }
  }
}

TEST(DynGraph, ContractErrors) {
  DynGraph g(3);
  g.insert_edge(0, 1);
  EXPECT_THROW(g.insert_edge(1, 0), contract_error);
  EXPECT_THROW(g.insert_edge(2, 2), contract_error);
  EXPECT_THROW(g.delete_edge(1, 2), contract_error);
  EXPECT_THROW(g.insert_edge(0, 5), dimension_error);
  EXPECT_THROW(g.insert_edge(0, 2, 2), contract_error);
  DynGraph d(3, true);
  d.insert_edge(0, 1);
  EXPECT_NO_THROW(d.insert_edge(1, 0));
}

TEST(SubgraphConnectivity, TogglesAndCounts) {
  SubgraphConnectivityOracle o(path(4));
  EXPECT_TRUE(o.connected(0, 3));
  o.turn_off(2);
  EXPECT_FALSE(o.connected(0, 3));
  EXPECT_THROW(o.turn_off(2), contract_error);
  o.turn_on(2);
  EXPECT_THROW(o.turn_on(2), contract_error);
  EXPECT_TRUE(o.connected(0, 3));
  EXPECT_EQ(o.updates(), 2u);
  EXPECT_EQ(o.queries(), 3u);
}

TEST(EvenShiloach, LevelsAndInsertionRefused) {
  EvenShiloachOracle o(path(5), 0);
  EXPECT_EQ(o.dist(4), Dist(4));
  EXPECT_THROW(o.insert_edge(0, 4), contract_error);
  o.delete_edge(2, 3);
  EXPECT_EQ(o.dist(3), Dist());
  EXPECT_EQ(o.level(3), 5u);
  EXPECT_THROW(EvenShiloachOracle(DynGraph(3, true), 0), contract_error);
}

TEST(EvenShiloach, LevelsNeverDecreaseOnSparseGraphs) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 30;
    DynGraph g(n);
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = a + 1; b < n; ++b) {
        if (rng() % 100 < 12) g.insert_edge(a, b);
      }
    }
    auto edges = g.edges();
    std::shuffle(edges.begin(), edges.end(), rng);
    EvenShiloachOracle o(std::move(g), 0);
    std::vector<std::uint32_t> prev(n);
    for (Vertex v = 0; v < n; ++v) prev[v] = o.level(v);
    for (const auto& e : edges) {
      o.delete_edge(e.a, e.b);
      for (Vertex v = 0; v < n; ++v) {
        ASSERT_GE(o.level(v), prev[v]);
        prev[v] = o.level(v);
        ASSERT_EQ(o.dist(v), o.recompute_dist(v));
      }
    }
  }
}

TEST(Triangle, Basic) {
  TriangleOracle o(path(3));
  EXPECT_FALSE(o.has_triangle());
  o.insert_edge(0, 2);
  EXPECT_TRUE(o.has_triangle());
  EXPECT_TRUE(o.triangle_at(1));
}

TEST(DFailure, BatchLimitAndRestore) {
  DFailureOracle o(path(4), 1);
  EXPECT_THROW(o.fail({1, 2}), contract_error);
  o.fail({1});
  EXPECT_FALSE(o.connected(0, 3));
  o.fail({});
  EXPECT_TRUE(o.connected(0, 3));
  EXPECT_EQ(o.updates(), 2u);
}

TEST(Matching, SidesEnforced) {
  DynGraph g(4);
  MatchingOracle o(std::move(g), {0, 0, 1, 1});
  o.insert_edge(0, 2);
  o.insert_edge(1, 2);
  EXPECT_EQ(o.size(), 1u);
  o.insert_edge(1, 3);
  EXPECT_EQ(o.size(), 2u);
  EXPECT_THROW(o.insert_edge(0, 1), std::exception);
  o.delete_edge(0, 2);
  EXPECT_EQ(o.size(), 1u);
}

TEST(Diameter, ZeroWeights) {
  DynGraph g(3);
  g.insert_edge(0, 1, 0);
  g.insert_edge(1, 2, 1);
  DiameterOracle o(std::move(g));
  EXPECT_EQ(o.diameter(), Dist(1));
  o.delete_edge(1, 2);
  EXPECT_EQ(o.diameter(), Dist());
}

TEST(Densest, ExactMatchesExhaustiveOnSmallGraphs) {
  std::mt19937_64 rng(2024);
  for (int seed = 0; seed < 200; ++seed) {
    std::size_t n = 1 + rng() % 7;
    auto g = random_simple_graph(rng, n, static_cast<unsigned>(20 + rng() % 70));
    auto want = exhaustive_densest(g);
    auto exact = densest_subgraph_exact(g);
    auto dink = densest_subgraph_dinkelbach(g);
    ASSERT_EQ(exact.density, want) << "seed " << seed;
    ASSERT_EQ(dink.density, want) << "seed " << seed;
    ASSERT_EQ(subgraph_density(g, exact.witness), want);
  }
}

TEST(Densest, RejectsNonSimpleGraphs) {
  EdgeListGraph g;
  g.n = 2;
  g.add(0, 1);
  g.add(1, 0);
  EXPECT_THROW(densest_subgraph_exact(g), contract_error);
  g.n = 0;
  g.edges.clear();
  EXPECT_THROW(densest_subgraph_exact(g), contract_error);
}

TEST(Densest, CompleteGraph) {
  DynGraph g(5);
  for (Vertex a = 0; a < 5; ++a) {
    for (Vertex b = a + 1; b < 5; ++b) g.insert_edge(a, b);
  }
  DensestSubgraphOracle o(std::move(g));
  EXPECT_EQ(o.densest(), Rational(2));
  EXPECT_EQ(o.last_witness().size(), 5u);
}

TEST(Pagh, Intersections) {
  BoolVector a = BoolVector::from_string("1101"), b = BoolVector::from_string("0111");
  PaghOracle o(4, {a, b});
  auto k = o.insert_intersection(0, 1);
  EXPECT_EQ(k, 2u);
  EXPECT_FALSE(o.member(k, 0));
  EXPECT_TRUE(o.member(k, 1));
  EXPECT_THROW(o.member(9, 0), dimension_error);
  EXPECT_THROW(o.member(0, 4), dimension_error);
}

TEST(ZeroPrefix, Basic) {
  ZeroPrefixOracle o({1, 2, -3});
  EXPECT_TRUE(o.has_zero_prefix());
  o.set(2, -2);
  EXPECT_FALSE(o.has_zero_prefix());
  o.set(0, 0);
  EXPECT_TRUE(o.has_zero_prefix());
}

TEST(Erickson, RowColumnIncrements) {
  EricksonOracle o(2, 2, {0, 5, 1, 1});
  EXPECT_EQ(o.max(), 5);
  o.inc_row(1);
  o.inc_row(1);
  o.inc_col(0);
  EXPECT_EQ(o.value(1, 0), 4);
  EXPECT_EQ(o.max(), 5);
  o.inc_col(0);
  EXPECT_EQ(o.max(), 5);
  o.inc_row(1);
  EXPECT_EQ(o.max(), 6);
}

TEST(Counters, SnapshotRollbackKeepsCounters) {
  DistanceOracle o(path(3));
  o.snapshot();
  o.delete_edge(0, 1);
  EXPECT_EQ(o.dist(0, 2), Dist());
  o.rollback();
  EXPECT_EQ(o.dist(0, 2), Dist(2));
  EXPECT_EQ(o.updates(), 1u);
  EXPECT_EQ(o.queries(), 2u);
  EXPECT_THROW(o.rollback(), contract_error);
}

TEST(Counters, FaultCorruptsExactlyOneAnswerAndAuditSeesIt) {
  DistanceOracle o(path(4));
  o.set_audit(true);
  o.inject_fault(1);
  EXPECT_EQ(o.dist(0, 3), Dist(3));
  EXPECT_EQ(o.dist(0, 3), Dist(4));
  EXPECT_EQ(o.dist(0, 3), Dist(3));
  EXPECT_TRUE(o.fault_fired());
  EXPECT_EQ(o.audit_failures(), 1u);

  SubgraphConnectivityOracle s(path(2));
  s.inject_fault(0);
  EXPECT_FALSE(s.connected(0, 1));

  DensestSubgraphOracle d(path(2));
  d.inject_fault(0);
  EXPECT_EQ(d.densest(), Rational(3, 2));
}

TEST(Script, RunsAgainstOracles) {
  DistanceOracle d(path(4));
  EXPECT_EQ(run(d, "q 0 3\ndel 1 2 # cut\nq 0 3\nsnap\nins 0 3\nq 0 3\nroll\nq 0 3\n"),
            (std::vector<std::string>{"3", "inf", "1", "inf"}));

  DensestSubgraphOracle ds(path(3));
  EXPECT_EQ(run(ds, "dens\nins 0 2\ndens\n"), (std::vector<std::string>{"2/3", "1"}));

  EricksonOracle e(1, 2, {3, 1});
  EXPECT_EQ(run(e, "max\nincc 1\nincc 1\nincc 1\nmax\n"), (std::vector<std::string>{"3", "4"}));
}

TEST(Script, ParseErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      parse_script(in);
    } catch (const parse_error& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("q 0 1\nbogus 1\n"), 2u);
  EXPECT_EQ(line_of("\n\nq 0\n"), 3u);
  EXPECT_EQ(line_of("ins 0 x\n"), 1u);
  EXPECT_EQ(line_of("ins 0 1 1 1\n"), 1u);
  EXPECT_EQ(line_of("# comment only\nq 0 1\n"), 0u);
}

TEST(Script, UnsupportedOperation) {
  ZeroPrefixOracle z({1});
  EXPECT_THROW(run(z, "q 0 1\n"), usage_error);
  EvenShiloachOracle es(path(3), 0);
  EXPECT_THROW(run(es, "ins 0 2\n"), contract_error);
}

TEST(Flow, SmallNetwork) {
  MaxFlow f(4);
  f.add_edge(0, 1, 3);
  f.add_edge(0, 2, 2);
  f.add_edge(1, 2, 5);
  f.add_edge(1, 3, 2);
  f.add_edge(2, 3, 3);
  EXPECT_EQ(f.run(0, 3), 5);
}
