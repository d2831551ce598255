#include <gtest/gtest.h>

#include "omv/engines.hpp"
#include "support.hpp"

using namespace omv;
using omv::test::rand_mat;
using omv::test::rand_vec;

namespace {

std::vector<BoolVector> stream(std::mt19937_64& rng, std::size_t n2, std::size_t n3) {
  std::vector<BoolVector> vs;
  for (std::size_t t = 0; t < n3; ++t) vs.push_back(rand_vec(rng, n2, 30));
  return vs;
}

std::vector<BoolVector> run(OmvEngine& e, const BoolMatrix& m, const std::vector<BoolVector>& vs) {
  e.preprocess(m);
  std::vector<BoolVector> out;
  for (const auto& v : vs) out.push_back(e.next(v));
  return out;
}

}  // namespace

TEST(Engines, IdentityAndZero) {
  for (const char* spec : {"naive", "lookup", "lookup:1", "tiled:1,1:naive", "majority:3:naive"}) {
    auto e = make_engine(spec);
    e->preprocess(BoolMatrix::identity(3));
    EXPECT_EQ(e->next(BoolVector::from_string("010")).to_string(), "010") << spec;
    auto z = make_engine(spec);
    z->preprocess(BoolMatrix(3, 3));
    EXPECT_EQ(z->next(BoolVector::ones(3)).to_string(), "000") << spec;
  }
}

TEST(Engines, AllConfigurationsAgreeWithNaive) {
  std::mt19937_64 rng(77);
  const std::vector<std::string> specs{"lookup:1",        "lookup:4",          "lookup:8",       "lookup",
                                       "tiled:4,4:naive", "tiled:3,5:lookup:2", "tiled:7,2:naive", "tiled:16,9:lookup",
                                       "majority:1:naive", "majority:5:lookup:3"};
  for (int rep = 0; rep < 30; ++rep) {
    std::size_t n1 = 16 + rng() % 60, n2 = 16 + rng() % 60;
    auto m = rand_mat(rng, n1, n2, 20);
    auto vs = stream(rng, n2, 6);
    NaiveEngine naive;
    auto want = run(naive, m, vs);
    for (const auto& s : specs) {
      auto e = make_engine(s);
      EXPECT_EQ(run(*e, m, vs), want) << s << " " << n1 << "x" << n2;
    }
  }
}

TEST(Engines, ResetReplaysIdentically) {
  std::mt19937_64 rng(5);
  auto m = rand_mat(rng, 40, 33);
  auto vs = stream(rng, 33, 5);
  for (const char* spec : {"lookup:3", "tiled:6,7:naive", "noisy:1/3:9", "majority:3:noisy:1/4:2"}) {
    auto e = make_engine(spec);
    auto first = run(*e, m, vs);
    e->reset_to_preprocessed();
    std::vector<BoolVector> again;
    for (const auto& v : vs) again.push_back(e->next(v));
    EXPECT_EQ(first, again) << spec;
    EXPECT_EQ(e->stats().per_vector_elapsed.size(), vs.size());
  }
}

TEST(Engines, LookupTableBytesBound) {
  std::mt19937_64 rng(6);
  for (std::size_t b : {1u, 3u, 5u, 8u}) {
    auto m = rand_mat(rng, 100, 77);
    LookupEngine e(b);
    e.preprocess(m);
    std::size_t bound = ((77 + b - 1) / b) * (std::size_t{1} << b) * ((100 + 63) / 64) * 8;
    EXPECT_LE(e.stats().table_bytes, bound);
    EXPECT_GT(e.stats().table_bytes, 0u);
  }
}

TEST(Engines, LookupDefaultBits) {
  EXPECT_EQ(default_group_bits(1), 1u);
  EXPECT_EQ(default_group_bits(256), 8u);
  EXPECT_EQ(default_group_bits(1u << 20), 16u);
}

TEST(Engines, LookupResourceGuard) {
  LookupEngine e(16, 1024);
  EXPECT_THROW(e.preprocess(BoolMatrix(64, 64)), resource_error);
}

TEST(Engines, SpecErrors) {
  EXPECT_THROW(make_engine("fast"), usage_error);
  EXPECT_THROW(make_engine("lookup:0"), usage_error);
  EXPECT_THROW(make_engine("tiled:2:naive"), usage_error);
  EXPECT_THROW(make_engine("majority:2:naive"), usage_error);
  EXPECT_THROW(make_engine("noisy:3/2:1"), usage_error);
}

TEST(Engines, NextBeforePreprocessOrWrongLength) {
  NaiveEngine e;
  EXPECT_THROW(e.next(BoolVector(2)), std::logic_error);
  e.preprocess(BoolMatrix(2, 3));
  EXPECT_THROW(e.next(BoolVector(2)), dimension_error);
}

TEST(Majority, DeterministicInnerUnchanged) {
  std::mt19937_64 rng(8);
  auto m = rand_mat(rng, 16, 16);
  auto vs = stream(rng, 16, 8);
  NaiveEngine naive;
  auto e = make_engine("majority:5:naive");
  EXPECT_EQ(run(*e, m, vs), run(naive, m, vs));
}

// r = 9 copies each flipping a bit with probability 1/5: the vote is wrong
// with probability ~0.02, so the empirical per-bit rate stays below 0.05.
TEST(Majority, SuppressesIndependentNoise) {
  std::mt19937_64 rng(9);
  auto m = rand_mat(rng, 16, 16);
  auto vs = stream(rng, 16, 1000);
  NaiveEngine naive;
  auto want = run(naive, m, vs);
  auto e = make_engine("majority:9:noisy:1/5:11");
  auto got = run(*e, m, vs);
  std::size_t wrong = 0;
  for (std::size_t t = 0; t < vs.size(); ++t) wrong += ((got[t] & ~want[t]) | (~got[t] & want[t])).popcount();
  double rate = static_cast<double>(wrong) / (16.0 * vs.size());
  EXPECT_LT(rate, 0.05);
  auto single = make_engine("noisy:1/5:11");
  auto raw = run(*single, m, vs);
  std::size_t raw_wrong = 0;
  for (std::size_t t = 0; t < vs.size(); ++t) raw_wrong += ((raw[t] & ~want[t]) | (~raw[t] & want[t])).popcount();
  EXPECT_GT(raw_wrong, wrong);
}
