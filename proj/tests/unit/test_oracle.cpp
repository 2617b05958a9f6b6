#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "floc/error.hpp"
#include "floc/facility_location.hpp"
#include "floc/greedy.hpp"
#include "floc/oracle.hpp"
#include "floc/synth.hpp"
#include "instances.hpp"
#include "reference.hpp"

namespace {

using Picks = std::vector<std::size_t>;

TEST(Binomial, Values) {
  EXPECT_EQ(floc::binomial(10, 3), 120u);
  EXPECT_EQ(floc::binomial(5, 0), 1u);
  EXPECT_EQ(floc::binomial(3, 5), 0u);
  EXPECT_EQ(floc::binomial(200, 100), UINT64_MAX);
}

TEST(Oracle, ThreeTokenK1) {
  const auto r = floc::exhaustive_optimum(floc::testing::shifted_sims(floc::testing::three_tokens()), 1);
  EXPECT_EQ(r.best_subset, Picks{2});
  EXPECT_NEAR(r.best_value, 5.41421356, 1e-6);
  EXPECT_EQ(r.subsets_evaluated, 3u);
}

TEST(Oracle, IdenticalTokensTieToFirstSet) {
  floc::InstanceSpec spec;
  spec.kind = floc::InstanceKind::kIdentical;
  spec.n = 6;
  const auto sims = floc::testing::shifted_sims(floc::generate(spec));
  const auto r = floc::exhaustive_optimum(sims, 2);
  EXPECT_EQ(r.best_subset, (Picks{0, 1}));
  EXPECT_DOUBLE_EQ(r.best_value, 12.0);
  EXPECT_EQ(r.subsets_evaluated, 15u);
  EXPECT_DOUBLE_EQ(floc::verify_bound(sims, 3), 1.0);
}

TEST(Oracle, AgreesWithMaskEnumerator) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto sims = floc::testing::shifted_sims(floc::testing::random_tokens(10, 3, seed));
    const auto r = floc::exhaustive_optimum(sims, 3);
    const auto m = floc::ref::optimum_by_mask(floc::ref::to_matrix(sims), 3);
    EXPECT_EQ(r.best_subset, m.subset) << seed;
    EXPECT_NEAR(r.best_value, m.value, 1e-9);
    EXPECT_EQ(r.subsets_evaluated, 120u);
  }
}

TEST(Oracle, ThreeTokensK2GreedyIsOptimal) {
  EXPECT_DOUBLE_EQ(floc::verify_bound(floc::testing::shifted_sims(floc::testing::three_tokens()), 2), 1.0);
}

TEST(Oracle, BoundHoldsOnRandomSweep) {
  floc::Rng rng(2718);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 1 + rng.below(12);
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(4, n));
    const auto sims = floc::testing::shifted_sims(floc::testing::random_tokens(n, 2 + rng.below(6), rng.next_u64()));
    const auto opt = floc::exhaustive_optimum(sims, k);
    const auto greedy = floc::lazy_greedy(sims, k);
    EXPECT_GE(opt.best_value + 1e-9, greedy.objective);
    EXPECT_GE(floc::verify_bound(sims, k), 1.0 - 1.0 / std::exp(1.0));
  }
}

TEST(Oracle, PermutationKeepsOptimalValue) {
  const auto t = floc::testing::random_tokens(9, 4, 99);
  auto permuted = t;
  const Picks order{4, 8, 0, 2, 7, 1, 6, 5, 3};
  for (std::size_t i = 0; i < 9; ++i) {
    std::copy_n(t.row(order[i]).begin(), 4, permuted.row(i).begin());
  }
  const auto a = floc::exhaustive_optimum(floc::testing::shifted_sims(t), 3);
  const auto b = floc::exhaustive_optimum(floc::testing::shifted_sims(permuted), 3);
  EXPECT_NEAR(a.best_value, b.best_value, 1e-9);
}

TEST(Oracle, Errors) {
  const auto big = floc::testing::shifted_sims(floc::testing::random_tokens(40, 2, 1));
  try {
    floc::exhaustive_optimum(big, 20);
    FAIL();
  } catch (const floc::Error& e) {
    EXPECT_EQ(e.code(), floc::ErrorCode::kInstanceTooLarge);
  }
  EXPECT_THROW(floc::verify_bound(big, 20), floc::Error);
  EXPECT_THROW(floc::exhaustive_optimum(big, 3, 100), floc::Error);
  EXPECT_THROW(floc::exhaustive_optimum(floc::testing::raw_sims(floc::testing::three_tokens()), 1),
               floc::Error);
  EXPECT_THROW(floc::exhaustive_optimum(floc::testing::shifted_sims(floc::testing::three_tokens()), 4),
               floc::Error);
}

}  // namespace
