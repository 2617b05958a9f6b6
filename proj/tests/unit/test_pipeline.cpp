#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "floc/error.hpp"
#include "floc/greedy.hpp"
#include "floc/facility_location.hpp"
#include "floc/pipeline.hpp"
#include "floc/synth.hpp"
#include "instances.hpp"
#include "reference.hpp"

namespace {

using floc::Budget;
using floc::CompressionConfig;
using Picks = std::vector<std::size_t>;

std::vector<std::size_t> lengths(const std::vector<floc::BlockExtent>& extents) {
  std::vector<std::size_t> out;
  for (const auto& e : extents) out.push_back(e.length);
  return out;
}

std::vector<floc::BlockExtent> extents_of(const std::vector<std::size_t>& lens) {
  std::vector<floc::BlockExtent> out;
  std::size_t start = 0;
  for (const auto l : lens) {
    out.push_back({start, l});
    start += l;
  }
  return out;
}

std::vector<std::size_t> shares(const floc::BlockPlan& plan) {
  std::vector<std::size_t> out;
  for (const auto& b : plan.blocks) out.push_back(b.budget);
  return out;
}

TEST(Budget, ParsesRatiosAndDecimals) {
  EXPECT_EQ(Budget::parse_ratio("1/8").resolve(24576), 3072u);
  EXPECT_EQ(Budget::parse_ratio("1/16").resolve(24576), 1536u);
  EXPECT_EQ(Budget::parse_ratio("1/32").resolve(24576), 768u);
  EXPECT_EQ(Budget::parse_ratio("0.125").resolve(24576), 3072u);
  EXPECT_EQ(Budget::parse_ratio("1").resolve(10), 10u);
  EXPECT_EQ(Budget::parse_ratio("1/8").to_string(), "1/8");
  for (const char* bad : {"", "0", "0/4", "3/2", "1/0", "abc", "1/-8", "1.5", "-0.5"}) {
    EXPECT_THROW(Budget::parse_ratio(bad), floc::Error) << bad;
  }
}

TEST(Budget, RoundsHalfUpAndKeepsAtLeastOne) {
  EXPECT_EQ(Budget::ratio(1, 8).resolve(12), 2u);   // 1.5 -> 2
  EXPECT_EQ(Budget::ratio(1, 8).resolve(11), 1u);   // 1.375 -> 1
  EXPECT_EQ(Budget::ratio(1, 8).resolve(3), 1u);    // 0.375 -> raised to 1
  EXPECT_EQ(Budget::ratio(1, 8).resolve(0), 0u);
  EXPECT_EQ(Budget::absolute(5).resolve(3), 5u);
}

TEST(Partition, Examples) {
  EXPECT_EQ(lengths(floc::partition(64, 4, 8)), (Picks{32, 32}));
  EXPECT_EQ(lengths(floc::partition(72, 4, 8)), (Picks{32, 32, 8}));
  EXPECT_EQ(lengths(floc::partition(32, 4, std::nullopt)), (Picks{32}));
  const auto e = floc::partition(72, 4, 8);
  EXPECT_EQ(e[2].start, 64u);
}

TEST(Partition, Errors) {
  try {
    floc::partition(10, 4, 2);
    FAIL();
  } catch (const floc::Error& e) {
    EXPECT_EQ(e.code(), floc::ErrorCode::kNonIntegralFrames);
  }
  EXPECT_THROW(floc::partition(8, 0, 2), floc::Error);
  EXPECT_THROW(floc::partition(8, 2, 0), floc::Error);
}

TEST(AllocateBudget, Examples) {
  EXPECT_EQ(shares(floc::allocate_budget(extents_of({40, 40, 20}), 10)), (Picks{4, 4, 2}));
  EXPECT_EQ(shares(floc::allocate_budget(extents_of({33, 33, 34}), 10)), (Picks{3, 3, 4}));
  // Quotas 0.2 and 9.8: the larger remainder (0.8) takes the leftover seat.
  EXPECT_EQ(shares(floc::allocate_budget(extents_of({2, 98}), 10)), (Picks{0, 10}));
}

TEST(AllocateBudget, TiesGoToEarlierBlocks) {
  EXPECT_EQ(shares(floc::allocate_budget(extents_of({10, 10, 10}), 2)), (Picks{1, 1, 0}));
  EXPECT_EQ(shares(floc::allocate_budget(extents_of({5, 5}), 1)), (Picks{1, 0}));
}

TEST(AllocateBudget, RejectsBudgetAboveTotal) {
  EXPECT_THROW(floc::allocate_budget(extents_of({3, 3}), 7), floc::Error);
}

TEST(AllocateBudget, AgreesWithReferenceAndStaysFeasible) {
  floc::Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::size_t> lens(1 + rng.below(12));
    std::size_t total = 0;
    for (auto& l : lens) total += (l = 1 + rng.below(50));
    const std::size_t k = rng.below(total + 1);
    const auto plan = floc::allocate_budget(extents_of(lens), k);
    EXPECT_EQ(shares(plan), floc::ref::apportion(lens, k));
    EXPECT_EQ(plan.total_budget(), k);
    for (std::size_t b = 0; b < lens.size(); ++b) {
      EXPECT_LE(plan.blocks[b].budget, lens[b]);
      const double quota = static_cast<double>(k) * lens[b] / total;
      EXPECT_LE(std::abs(plan.blocks[b].budget - quota), 1.0);
    }
  }
}

TEST(Select, IdenticalTokensHalfRatio) {
  floc::InstanceSpec spec;
  spec.kind = floc::InstanceKind::kIdentical;
  spec.n = 4;
  CompressionConfig c;
  c.budget = Budget::ratio(1, 2);
  EXPECT_EQ(floc::select(floc::generate(spec), c).sorted_indices, (Picks{0, 1}));
}

TEST(Select, FullBudgetKeepsEverything) {
  const auto t = floc::testing::random_tokens(13, 4, 3);
  CompressionConfig c;
  c.budget = Budget::absolute(13);
  Picks all(13);
  std::iota(all.begin(), all.end(), std::size_t{0});
  for (const auto m : {floc::Method::kFloc, floc::Method::kRandom, floc::Method::kUniform,
                       floc::Method::kKMeans, floc::Method::kFps}) {
    c.method = m;
    EXPECT_EQ(floc::select(t, c).sorted_indices, all);
  }
}

TEST(Select, MixedClustersTwoPicksOnePerCluster) {
  const auto t = floc::testing::rows(
      {{1.0f, 0.05f, 0.0f}, {1.0f, -0.05f, 0.0f}, {0.0f, 0.0f, 1.0f}, {0.02f, 0.0f, 1.0f},
       {1.0f, 0.0f, 0.03f}, {0.0f, 0.04f, 1.0f}});
  CompressionConfig c;
  c.budget = Budget::absolute(2);
  const auto sel = floc::select(t, c);
  ASSERT_EQ(sel.sorted_indices.size(), 2u);
  auto cluster = [](std::size_t i) { return i == 0 || i == 1 || i == 4 ? 0 : 1; };
  EXPECT_NE(cluster(sel.sorted_indices[0]), cluster(sel.sorted_indices[1]));
}

TEST(Select, BudgetAboveNCapsWithWarning) {
  CompressionConfig c;
  c.budget = Budget::absolute(50);
  const auto sel = floc::select(floc::testing::random_tokens(10, 3, 1), c);
  EXPECT_EQ(sel.sorted_indices.size(), 10u);
  ASSERT_FALSE(sel.warnings.empty());
  EXPECT_NE(sel.warnings[0].find("capped"), std::string::npos);
}

TEST(Select, Errors) {
  CompressionConfig c;
  try {
    floc::select(floc::TokenMatrix(0, 3), c);
    FAIL();
  } catch (const floc::Error& e) {
    EXPECT_EQ(e.code(), floc::ErrorCode::kEmptyGroundSet);
  }
  auto zero = floc::testing::random_tokens(16, 3, 1);
  std::fill(zero.row(9).begin(), zero.row(9).end(), 0.0f);
  c.block_frames = 2;
  c.tokens_per_frame = 4;
  try {
    floc::select(zero, c);
    FAIL();
  } catch (const floc::Error& e) {
    EXPECT_EQ(e.code(), floc::ErrorCode::kZeroNormRow);
    EXPECT_NE(e.message().find("block 1"), std::string::npos) << e.message();
  }
  c.zero_rows = floc::ZeroRowPolicy::kSubstituteUnit;
  EXPECT_NO_THROW(floc::select(zero, c));
  c.tokens_per_frame = 5;
  EXPECT_THROW(floc::select(zero, c), floc::Error);
}

TEST(RunBlocks, TwoIdenticalBlocksOnePickEach) {
  auto t = floc::testing::random_tokens(20, 4, 8);
  for (std::size_t i = 10; i < 20; ++i) {
    std::copy_n(t.row(i - 10).begin(), 4, t.row(i).begin());
  }
  CompressionConfig c;
  c.budget = Budget::absolute(2);
  c.block_frames = 10;
  const auto sel = floc::select(t, c);
  ASSERT_EQ(sel.sorted_indices.size(), 2u);
  EXPECT_LT(sel.sorted_indices[0], 10u);
  EXPECT_EQ(sel.sorted_indices[1], sel.sorted_indices[0] + 10);
  ASSERT_EQ(sel.blocks.size(), 2u);
  EXPECT_EQ(sel.blocks[0].objective, sel.blocks[1].objective);
}

TEST(RunBlocks, SingleBlockEqualsDirectEngineCall) {
  const auto t = floc::testing::random_tokens(40, 6, 12);
  CompressionConfig c;
  c.budget = Budget::absolute(7);
  const auto direct = floc::lazy_greedy(floc::testing::shifted_sims(t), 7);
  for (const std::optional<std::size_t> frames : {std::optional<std::size_t>{}, std::optional<std::size_t>{40}, std::optional<std::size_t>{1000}}) {
    c.block_frames = frames;
    const auto sel = floc::select(t, c);
    EXPECT_EQ(sel.picks, direct.picks);
    EXPECT_EQ(sel.gains, direct.gains);
    EXPECT_EQ(sel.objective, direct.objective);
    EXPECT_EQ(sel.evaluations, direct.evaluations);
  }
}

TEST(RunBlocks, UnionOfPerBlockGreedy) {
  const auto t = floc::testing::random_tokens(96, 5, 31);
  CompressionConfig c;
  c.budget = Budget::absolute(12);
  c.block_frames = 8;
  c.tokens_per_frame = 4;
  const auto sel = floc::select(t, c);
  Picks expected;
  double objective = 0.0;
  for (std::size_t b = 0; b < 3; ++b) {
    const auto block = t.slice_rows(32 * b, 32);
    const auto ref = floc::ref::greedy(floc::ref::to_matrix(floc::testing::shifted_sims(block)), 4);
    for (const auto p : ref) expected.push_back(32 * b + p);
    objective += floc::lazy_greedy(floc::testing::shifted_sims(block), 4).objective;
  }
  EXPECT_EQ(sel.picks, expected);
  EXPECT_EQ(sel.objective, objective);
  EXPECT_TRUE(std::is_sorted(sel.sorted_indices.begin(), sel.sorted_indices.end()));
}

TEST(RunBlocks, ThreadCountDoesNotChangeResult) {
  const auto t = floc::testing::random_tokens(160, 6, 2);
  CompressionConfig c;
  c.budget = Budget::ratio(1, 8);
  c.block_frames = 3;
  c.tokens_per_frame = 8;
  for (const auto m : {floc::Method::kFloc, floc::Method::kRandom, floc::Method::kKMeans}) {
    c.method = m;
    c.threads = 1;
    const auto a = floc::select(t, c);
    c.threads = 4;
    const auto b = floc::select(t, c);
    EXPECT_EQ(a.picks, b.picks);
    EXPECT_EQ(a.gains, b.gains);
    EXPECT_EQ(a.objective, b.objective);
  }
}

TEST(RunBlocks, BaselinesReportShiftedObjective) {
  const auto t = floc::testing::random_tokens(30, 4, 6);
  CompressionConfig c;
  c.budget = Budget::absolute(5);
  c.method = floc::Method::kUniform;
  const auto sel = floc::select(t, c);
  EXPECT_NEAR(sel.objective, floc::objective(floc::testing::shifted_sims(t), sel.picks), 1e-9);
  EXPECT_EQ(sel.gains.size(), 5u);
}

TEST(Report, ObjectivesAndMetrics) {
  const auto t = floc::testing::random_tokens(25, 4, 13);
  CompressionConfig c;
  c.budget = Budget::absolute(6);
  const auto sel = floc::select(t, c);
  const auto report = floc::make_report(t, sel, c);
  const auto raw = floc::ref::cosine_matrix(t);
  EXPECT_NEAR(report.objective_raw, floc::ref::objective(raw, sel.sorted_indices), 1e-5);
  EXPECT_NEAR(report.objective_shifted, report.objective_raw + 25, 1e-6 * 25);
  EXPECT_NEAR(report.avg_sum_coverage, floc::ref::avg_sum_coverage(raw, sel.sorted_indices), 1e-6);
  ASSERT_TRUE(report.avg_distance);
  EXPECT_NEAR(*report.avg_distance, floc::ref::avg_distance(raw, sel.sorted_indices), 1e-6);
  EXPECT_EQ(report.block_frames, "whole");
  EXPECT_EQ(report.budget, 6u);
}

TEST(Names, RoundTrip) {
  for (const auto m : {floc::Method::kFloc, floc::Method::kRandom, floc::Method::kUniform,
                       floc::Method::kKMeans, floc::Method::kFps}) {
    EXPECT_EQ(floc::parse_method(floc::to_string(m)), m);
  }
  EXPECT_EQ(floc::parse_engine("naive"), floc::Engine::kNaive);
  EXPECT_THROW(floc::parse_method("pca"), floc::Error);
  EXPECT_THROW(floc::parse_engine("eager"), floc::Error);
}

}  // namespace
