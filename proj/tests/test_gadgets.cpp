#include <gtest/gtest.h>

#include <random>

#include "omv/gadgets.hpp"
#include "omv/multiphase.hpp"
#include "support.hpp"

using namespace omv;
using namespace omv::test;

namespace {

GadgetConfig with_mode(UndoMode mode, bool incremental = false) {
  GadgetConfig cfg;
  cfg.mode = mode;
  cfg.incremental = incremental;
  return cfg;
}

BoolVector unit(std::size_t n, std::size_t i) {
  BoolVector v(n);
  v.set(i);
  return v;
}

BoolMatrix all_ones(std::size_t n1, std::size_t n2) {
  BoolMatrix m(n1, n2);
  for (std::size_t i = 0; i < n1; ++i) m.row(i) = ones(n2);
  return m;
}

std::vector<VectorPair> ones_pairs(std::size_t n1, std::size_t n2, std::size_t n3) {
  return std::vector<VectorPair>(n3, VectorPair{ones(n1), ones(n2)});
}

std::vector<bool> direct(const BoolMatrix& m, const std::vector<VectorPair>& pairs) {
  std::vector<bool> out;
  for (const auto& p : pairs) out.push_back(brute_triple(p.u, m, p.v));
  return out;
}

}  // namespace

TEST(Registry, NamesAndLookup) {
  EXPECT_EQ(gadget_registry().size(), 19u);
  for (const auto& g : gadget_registry()) EXPECT_EQ(find_gadget(g.name), &g);
  EXPECT_EQ(find_gadget("nope"), nullptr);
  EXPECT_EQ(find_gadget("densest")->max_side, 8u);
}

TEST(Registry, UndoModeStrings) {
  EXPECT_EQ(parse_undo_mode("undo"), UndoMode::undo);
  EXPECT_EQ(parse_undo_mode("snapshot"), UndoMode::snapshot);
  EXPECT_EQ(to_string(UndoMode::snapshot), "snapshot");
  EXPECT_THROW(parse_undo_mode("redo"), usage_error);
}

TEST(Registry, Shapes) {
  const Rational third(1, 3);
  EXPECT_EQ(shape_for(GadgetShape::any, 3, 5, third), (std::pair<std::size_t, std::size_t>{3, 5}));
  EXPECT_EQ(shape_for(GadgetShape::square, 3, 5, third), (std::pair<std::size_t, std::size_t>{5, 5}));
  // delta = 1/3: tradeoff rows n2^(1/2), wide rows n2^2
  EXPECT_EQ(shape_for(GadgetShape::tradeoff, 1, 32, third).first, 5u);
  EXPECT_EQ(shape_for(GadgetShape::wide, 1, 8, third).first, 64u);
  EXPECT_EQ(shape_for(*find_gadget("densest"), 32, 32, third), (std::pair<std::size_t, std::size_t>{8, 8}));
  EXPECT_THROW(shape_for(GadgetShape::any, 1, 1, Rational(1)), std::invalid_argument);
}

// Every gadget, both reset modes, both directions, against the direct product.
TEST(AllGadgets, DecodeMatchesDirectProduct) {
  std::mt19937_64 rng(11);
  const Rational delta(1, 2);
  for (const auto& info : gadget_registry()) {
    for (auto mode : {UndoMode::undo, UndoMode::snapshot}) {
      for (bool incremental : {false, true}) {
        for (std::size_t n : {1u, 2u, 5u}) {
          auto [n1, n2] = shape_for(info, n, n, delta);
          for (unsigned density : {10u, 50u}) {
            auto m = rand_mat(rng, n1, n2, density);
            auto pairs = rand_pairs(rng, n1, n2, 4, density);
            auto run = info.run(m, pairs, with_mode(mode, incremental));
            auto c = check_run(run, m, pairs);
            ASSERT_TRUE(c.ok()) << info.name << " n=" << n << " mismatches=" << c.decode_mismatches
                                << " budget=" << c.budget_ok << " gap=" << c.gap_ok;
            ASSERT_EQ(run.rounds, pairs.size());
          }
        }
      }
    }
  }
}

TEST(AllGadgets, ReplayIsDeterministic) {
  std::mt19937_64 rng(5);
  for (const auto& info : gadget_registry()) {
    auto [n1, n2] = shape_for(info, 4, 4, Rational(1, 2));
    auto m = rand_mat(rng, n1, n2);
    auto pairs = rand_pairs(rng, n1, n2, 3);
    EXPECT_EQ(info.run(m, pairs, {}), info.run(m, pairs, {})) << info.name;
  }
}

TEST(AllGadgets, RejectsMismatchedDimensions) {
  BoolMatrix m(3, 3);
  std::vector<VectorPair> bad{{BoolVector(2), BoolVector(3)}};
  for (const auto& info : gadget_registry()) EXPECT_THROW(info.run(m, bad, {}), dimension_error) << info.name;
}

TEST(AllGadgets, InjectedFaultIsAudited) {
  std::mt19937_64 rng(3);
  for (const auto& info : gadget_registry()) {
    auto [n1, n2] = shape_for(info, 3, 3, Rational(1, 2));
    auto m = rand_mat(rng, n1, n2);
    auto pairs = ones_pairs(n1, n2, 2);
    GadgetConfig cfg;
    cfg.audit = true;
    cfg.fault_query = 0;
    auto run = info.run(m, pairs, cfg);
    EXPECT_TRUE(run.fault_fired) << info.name;
    EXPECT_GE(run.audit_failures, 1u) << info.name;
  }
}

TEST(StSubconn, Examples) {
  auto pairs = ones_pairs(4, 4, 3);
  auto run = st_subconn_gadget(all_ones(4, 4), pairs, {});
  EXPECT_EQ(run.recovered, (std::vector<bool>{true, true, true}));
  run = st_subconn_gadget(BoolMatrix(4, 4), pairs, {});
  EXPECT_EQ(run.recovered, (std::vector<bool>{false, false, false}));
  EXPECT_EQ(run.queries_used, 3u);

  std::mt19937_64 rng(7);
  auto m = rand_mat(rng, 12, 12);
  auto rp = rand_pairs(rng, 12, 12, 12);
  run = st_subconn_gadget(m, rp, {});
  EXPECT_EQ(run.recovered, direct(m, rp));
  EXPECT_EQ(run.queries_used, 12u);
}

TEST(StSp3v5, DistanceIsThreeOrAtLeastFive) {
  auto run = st_sp_3v5_gadget(BoolMatrix::identity(3), {{unit(3, 1), unit(3, 1)}}, {});
  EXPECT_EQ(run.probes[0].value, Rational(3));
  run = st_sp_3v5_gadget(BoolMatrix(3, 3), ones_pairs(3, 3, 1), {});
  EXPECT_FALSE(run.probes[0].value.has_value());

  std::mt19937_64 rng(10);
  auto m = rand_mat(rng, 10, 10, 15);
  auto pairs = rand_pairs(rng, 10, 10, 10, 30);
  run = st_sp_3v5_gadget(m, pairs, {});
  EXPECT_EQ(run.recovered, direct(m, pairs));
  for (const auto& p : run.probes) EXPECT_NE(p.value, std::optional<Rational>(Rational(4)));
}

TEST(StSp3eps, SubdivisionLength) {
  EXPECT_EQ(subdivision_length(Rational(1)), 4u);
  EXPECT_EQ(subdivision_length(Rational(1, 2)), 8u);
  EXPECT_EQ(subdivision_length(Rational(3, 2)), 3u);
  EXPECT_EQ(subdivision_length(Rational(5)), 1u);

  auto run = stsp_3eps_gadget(all_ones(2, 2), ones_pairs(2, 2, 1), {});
  EXPECT_EQ(run.probes[0].value, Rational(6));
  EXPECT_EQ(run.derived.at("subdivision"), "4");

  // u hits row 0 only, v column 1 only, M has no (0,1) entry: the shortest
  // route crosses three subdivided edges.
  auto m = BoolMatrix::from_strings({"10", "11"});
  run = stsp_3eps_gadget(m, {{unit(2, 0), unit(2, 1)}}, {});
  EXPECT_EQ(run.probes[0].value, Rational(14));
  EXPECT_FALSE(run.recovered[0]);

  GadgetConfig half;
  half.epsilon = Rational(1, 2);
  std::mt19937_64 rng(12);
  auto r = rand_mat(rng, 6, 6, 30);
  auto pairs = rand_pairs(rng, 6, 6, 6);
  run = stsp_3eps_gadget(r, pairs, half);
  EXPECT_EQ(run.recovered, direct(r, pairs));
  EXPECT_EQ(run.gap_violations, 0u);
}

TEST(Triangle, Examples) {
  auto one = BoolMatrix::from_strings({"1"});
  EXPECT_TRUE(triangle_gadget(one, ones_pairs(1, 1, 1), {}).recovered[0]);
  EXPECT_FALSE(triangle_gadget(BoolMatrix(1, 1), ones_pairs(1, 1, 1), {}).recovered[0]);
}

TEST(TradeoffFamily, IdentityFirstCoordinate) {
  auto id = BoolMatrix::identity(4);
  std::vector<VectorPair> p{{unit(4, 0), unit(4, 0)}};
  for (auto fn : {ss_subconn_gadget, ss_sp_2v4_gadget, color_oracle_gadget, dfailure_gadget}) {
    EXPECT_TRUE(fn(id, p, {}).recovered[0]);
    EXPECT_FALSE(fn(BoolMatrix(4, 4), p, {}).recovered[0]);
  }
  auto run = ss_sp_2v4_gadget(id, p, {});
  EXPECT_EQ(run.probes[0].value, Rational(2));
}

TEST(TradeoffFamily, RandomEightByThirtyTwo) {
  std::mt19937_64 rng(8);
  GadgetConfig cfg;
  cfg.delta = Rational(1, 3);
  auto [n1, n2] = shape_for(GadgetShape::tradeoff, 0, 32, cfg.delta);
  auto m = rand_mat(rng, n1, n2, 10);
  auto pairs = rand_pairs(rng, n1, n2, 6);
  for (auto fn : {ss_subconn_gadget, ss_sp_2v4_gadget, color_oracle_gadget}) {
    auto run = fn(m, pairs, cfg);
    EXPECT_EQ(run.recovered, direct(m, pairs));
    EXPECT_EQ(run.gap_violations, 0u);
  }
}

TEST(DFailure, OneBatchPerRound) {
  std::mt19937_64 rng(4);
  auto m = rand_mat(rng, 4, 2);
  auto pairs = rand_pairs(rng, 4, 2, 5);
  auto run = dfailure_gadget(m, pairs, {});
  EXPECT_EQ(run.updates_used, 5u);
  EXPECT_EQ(run.undo_mode, UndoMode::snapshot);
  EXPECT_EQ(run.recovered, direct(m, pairs));
}

TEST(Pagh, Examples) {
  auto id = BoolMatrix::identity(3);
  EXPECT_TRUE(pagh_gadget(id, {{unit(3, 0), unit(3, 0)}}, {}).recovered[0]);
  auto run = pagh_gadget(id, {{BoolVector(3), ones(3)}}, {});
  EXPECT_FALSE(run.recovered[0]);
  EXPECT_EQ(run.queries_used, 0u);

  std::mt19937_64 rng(16);
  auto m = rand_mat(rng, 16, 16, 20);
  auto pairs = rand_pairs(rng, 16, 16, 8, 20);
  EXPECT_EQ(pagh_gadget(m, pairs, {}).recovered, direct(m, pairs));
}

TEST(Langerman, RowLayout) {
  auto m = BoolMatrix::from_strings({"10"});
  EXPECT_EQ(langerman_array(m, 7), (std::vector<std::int64_t>{7, 0, 1, 1, 2, 0, -4}));
  EXPECT_EQ(langerman_array(BoolMatrix(3, 4)).size(), 1u + 3 * 10);
}

TEST(Langerman, ZeroMatrixNeverHits) {
  std::mt19937_64 rng(6);
  auto pairs = rand_pairs(rng, 6, 6, 6, 70);
  for (auto mode : {UndoMode::undo, UndoMode::snapshot}) {
    auto run = langerman_gadget(BoolMatrix(6, 6), pairs, with_mode(mode));
    for (bool b : run.recovered) EXPECT_FALSE(b);
  }
  auto m = rand_mat(rng, 6, 6);
  EXPECT_EQ(langerman_gadget(m, pairs, {}).recovered, direct(m, pairs));
}

TEST(Erickson, Examples) {
  auto run = erickson_gadget(BoolMatrix::from_strings({"1"}), ones_pairs(1, 1, 1), {});
  EXPECT_EQ(run.probes[0].value, Rational(3));
  EXPECT_TRUE(run.recovered[0]);
  run = erickson_gadget(BoolMatrix::from_strings({"0"}), ones_pairs(1, 1, 1), {});
  EXPECT_EQ(run.probes[0].value, Rational(2));
  EXPECT_FALSE(run.recovered[0]);

  std::mt19937_64 rng(88);
  auto m = rand_mat(rng, 8, 8);
  auto pairs = rand_pairs(rng, 8, 8, 8, 25);
  EXPECT_EQ(erickson_gadget(m, pairs, {}).recovered, direct(m, pairs));
}

TEST(Diameter, StageDiameterIsOneOrTwo) {
  std::mt19937_64 rng(41);
  auto m = rand_mat(rng, 4, 16, 20);
  auto pairs = rand_pairs(rng, 4, 16, 6);
  auto run = diameter_gadget(m, pairs, {});
  EXPECT_EQ(run.recovered, direct(m, pairs));
  for (const auto& p : run.probes) {
    ASSERT_TRUE(p.value.has_value());
    bool hit = vec_mat_vec(unit(4, p.index), m, pairs[p.round].v);
    EXPECT_EQ(*p.value, Rational(hit ? 2 : 1));
  }
  EXPECT_EQ(diameter_gadget(BoolMatrix(2, 5), ones_pairs(2, 5, 1), {}).derived.at("padded_n2"), "9");
}

TEST(Densest, SingleBitWitness) {
  EXPECT_EQ(densest_threshold(1), Rational(13, 12));
  auto run = densest_gadget(BoolMatrix::from_strings({"1"}), ones_pairs(1, 1, 1), {});
  EXPECT_EQ(run.probes[0].value, Rational(13, 12));
  EXPECT_EQ(run.probes[0].aux, 12);
  EXPECT_TRUE(run.recovered[0]);
  EXPECT_EQ(run.derived.at("k"), "6");

  run = densest_gadget(BoolMatrix(1, 1), ones_pairs(1, 1, 1), {});
  EXPECT_LT(*run.probes[0].value, Rational(13, 12));
  EXPECT_FALSE(run.recovered[0]);
}

TEST(Densest, TwoByTwoAllPatterns) {
  std::mt19937_64 rng(2);
  auto m = rand_mat(rng, 2, 2);
  std::vector<VectorPair> pairs;
  for (unsigned a = 0; a < 4; ++a) {
    for (unsigned b = 0; b < 4; ++b) {
      BoolVector u(2), v(2);
      u.set(0, a & 1);
      u.set(1, a & 2);
      v.set(0, b & 1);
      v.set(1, b & 2);
      pairs.push_back({u, v});
    }
  }
  EXPECT_EQ(densest_gadget(m, pairs, {}).recovered, direct(m, pairs));
}

TEST(IncrStSp, ExactDistancePerRound) {
  const std::size_t n3 = 4;
  auto run = incr_stsp_gadget(all_ones(3, 3), ones_pairs(3, 3, n3), {});
  for (std::size_t t = 0; t < n3; ++t) EXPECT_EQ(run.probes[t].value, Rational(2 * (n3 - t) + 1));
  run = incr_stsp_gadget(BoolMatrix(3, 3), ones_pairs(3, 3, n3), {});
  for (bool b : run.recovered) EXPECT_FALSE(b);
  EXPECT_THROW(incr_stsp_gadget(BoolMatrix(1, 1), {}, {}), dimension_error);

  std::mt19937_64 rng(888);
  auto m = rand_mat(rng, 8, 8, 15);
  auto pairs = rand_pairs(rng, 8, 8, 8, 25);
  run = incr_stsp_gadget(m, pairs, {});
  EXPECT_EQ(run.recovered, direct(m, pairs));
  EXPECT_EQ(run.gap_violations, 0u);
}

TEST(PartialStSp, DecrementalDistanceGrowsWithRound) {
  const std::size_t n3 = 5;
  auto run = partial_stsp_gadget(all_ones(2, 3), ones_pairs(2, 3, n3), {});
  for (std::size_t t = 0; t < n3; ++t) EXPECT_EQ(run.probes[t].value, Rational(2 * t + 3));
  run = partial_stsp_gadget(all_ones(2, 3), ones_pairs(2, 3, n3), with_mode(UndoMode::undo, true));
  for (std::size_t t = 0; t < n3; ++t) EXPECT_EQ(run.probes[t].value, Rational(2 * (n3 - t) + 1));
  EXPECT_EQ(run.derived.at("direction"), "incremental");
}

TEST(PartialFamily, ZeroMatrixAlwaysZero) {
  std::mt19937_64 rng(8);
  for (auto fn : {partial_stsp_gadget, partial_sssp_gadget, partial_apsp_gadget, partial_tc_gadget, partial_matching_gadget}) {
    for (bool inc : {false, true}) {
      auto run = fn(BoolMatrix(3, 5), rand_pairs(rng, 3, 5, 4), with_mode(UndoMode::undo, inc));
      for (bool b : run.recovered) EXPECT_FALSE(b);
      auto m = rand_mat(rng, 5, 3, 30);
      auto pairs = rand_pairs(rng, 5, 3, 6);
      EXPECT_EQ(fn(m, pairs, with_mode(UndoMode::undo, inc)).recovered, direct(m, pairs));
    }
  }
}

TEST(PartialSsSp, FirstHitDistance) {
  auto run = partial_sssp_gadget(all_ones(2, 2), ones_pairs(2, 2, 3), {});
  for (std::size_t t = 0; t < 3; ++t) {
    bool seen = false;
    for (const auto& p : run.probes) {
      if (p.round == t && p.value == std::optional<Rational>(Rational(t + 2))) seen = true;
    }
    EXPECT_TRUE(seen) << t;
  }
}

TEST(PartialMatching, DropIsOneLessWhenProductIsOne) {
  auto run = partial_matching_gadget(BoolMatrix::from_strings({"1"}), ones_pairs(1, 1, 1), {});
  EXPECT_EQ(run.probes[0].aux, 2);
  EXPECT_EQ(run.probes[0].value, Rational(1));
  run = partial_matching_gadget(BoolMatrix(2, 2), ones_pairs(2, 2, 3), {});
  for (const auto& p : run.probes) EXPECT_EQ(*p.value, Rational(p.aux));

  std::mt19937_64 rng(664);
  auto m = rand_mat(rng, 6, 6, 25);
  auto pairs = rand_pairs(rng, 6, 6, 4, 30);
  EXPECT_EQ(partial_matching_gadget(m, pairs, {}).recovered, direct(m, pairs));
}

TEST(Multiphase, AdapterExamples) {
  auto mp = multiphase_adapter(make_engine("naive"));
  EXPECT_THROW(mp->phase2(unit(3, 0)), contract_error);
  mp->phase1(BoolMatrix::identity(3));
  EXPECT_THROW(mp->phase3(0), contract_error);
  mp->phase2(unit(3, 0));
  EXPECT_TRUE(mp->phase3(0));
  EXPECT_FALSE(mp->phase3(1));
  EXPECT_THROW(mp->phase3(3), dimension_error);
  EXPECT_THROW(mp->phase2(unit(2, 0)), dimension_error);

  mp->phase1(BoolMatrix(3, 3));
  mp->phase2(ones(3));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_FALSE(mp->phase3(i));
}

TEST(Multiphase, SolverMatchesNaive) {
  std::mt19937_64 rng(808);
  auto m = rand_mat(rng, 8, 8);
  auto solver = multiphase_omv_solver([] { return multiphase_adapter(make_engine("lookup")); }, "lookup");
  EXPECT_EQ(solver->name(), "multiphase:lookup");
  auto naive = make_engine("naive");
  solver->preprocess(m);
  naive->preprocess(m);
  for (int t = 0; t < 8; ++t) {
    auto v = rand_vec(rng, 8);
    EXPECT_EQ(solver->next(v), naive->next(v));
  }
  auto& problem = static_cast<MultiphaseOmvSolver&>(*solver).problem();
  EXPECT_EQ(problem.phase2_calls(), 8u);
  EXPECT_EQ(problem.phase3_calls(), 64u);
}

TEST(Multiphase, DynamicOracleScheduleBound) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = rand_mat(rng, 6, 7, 30);
    std::vector<BoolVector> vs;
    for (int t = 0; t < 5; ++t) vs.push_back(rand_vec(rng, 7));
    auto check = omv_via_dynamic_multiphase<SubgraphConnectivityOracle>(subconn_multiphase_plan(), m, vs);
    EXPECT_TRUE(check.ok());
    EXPECT_EQ(check.bound, 7u * 5 + 6u * 5);
    for (std::size_t t = 0; t < vs.size(); ++t) EXPECT_EQ(check.outputs[t], mat_vec(m, vs[t]));
  }
}

TEST(Multiphase, TightScheduleIsReported) {
  auto plan = subconn_multiphase_plan();
  plan.schedule = [](std::size_t, std::size_t) { return PhaseSchedule{0, 1}; };
  auto check = omv_via_dynamic_multiphase<SubgraphConnectivityOracle>(plan, BoolMatrix::identity(2), {BoolVector(2)});
  EXPECT_FALSE(check.ok());
  EXPECT_GT(check.violations, 0u);
}
