#pragma once

// Greedy maximizers of the facility location objective.
//
// Both engines break ties toward the lowest token index, which makes the lazy
// engine's pick sequence identical to the naive one on every input.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "floc/embedding.hpp"

namespace floc {

enum class Engine { kLazy, kNaive };

// Per-block breakdown of a pipeline run.
struct BlockSummary {
  std::size_t block = 0;
  std::size_t start = 0;
  std::size_t length = 0;
  std::size_t budget = 0;
  double objective = 0.0;
  std::uint64_t evaluations = 0;
  double wall_time_s = 0.0;
};

struct Selection {
  std::string method;
  std::string engine;
  // Global token indices in selection order, with the marginal gain each pick
  // realized on the shifted objective of its block.
  std::vector<std::size_t> picks;
  std::vector<double> gains;
  // picks sorted ascending (temporal order).
  std::vector<std::size_t> sorted_indices;
  // f(S) on shifted similarities; summed over blocks for pipeline runs.
  double objective = 0.0;
  // Selector-specific criterion per pick, when it differs from the gain
  // (farthest-point: min cosine distance to the earlier picks).
  std::vector<double> scores;
  // Exact marginal-gain computations performed.
  std::uint64_t evaluations = 0;
  // Lloyd iterations (k-means baseline only).
  std::uint64_t iterations = 0;
  double wall_time_s = 0.0;
  std::vector<BlockSummary> blocks;
  std::vector<std::string> warnings;
};

// Full argmax scan every round: n + (n-1) + ... evaluations.
// Requires shifted similarities. Throws EmptyGroundSet when n == 0, and
// InvalidConfig for raw similarities. A budget above n is capped with a warning.
Selection naive_greedy(const SimilarityMatrix& sims, std::size_t budget);

// Lazy greedy (CELF). Candidates sit in a max-queue keyed by (bound desc,
// index asc). A popped candidate whose bound is stale gets its gain
// recomputed; it is accepted when that key is >= the queue's current top and
// re-inserted with the fresh bound otherwise. A candidate whose bound was
// computed against the current set is exact and accepted without
// recomputation.
//
// The initial bounds are the exact singleton values f({v}), counted as n
// evaluations.
Selection lazy_greedy(const SimilarityMatrix& sims, std::size_t budget);

}  // namespace floc
