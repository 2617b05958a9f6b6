#pragma once

// Brute-force maximizer of the facility location objective for small
// instances, used to check the greedy approximation guarantee.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "floc/embedding.hpp"

namespace floc {

struct OracleResult {
  std::vector<std::size_t> best_subset;  // ascending
  double best_value = 0.0;
  std::uint64_t subsets_evaluated = 0;
};

inline constexpr std::uint64_t kOracleSubsetLimit = 10'000'000;

// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Maximum of f over all subsets of size exactly K (shifted similarities).
// Ties resolve to the lexicographically smallest index set.
// Throws InstanceTooLarge when C(n, K) > limit, InvalidConfig for raw
// similarities or K > n.
OracleResult exhaustive_optimum(const SimilarityMatrix& sims, std::size_t budget,
                                std::uint64_t limit = kOracleSubsetLimit);

// f(lazy greedy) / f(optimum); 1 when both are zero (K == 0).
double verify_bound(const SimilarityMatrix& sims, std::size_t budget,
                    std::uint64_t limit = kOracleSubsetLimit);

}  // namespace floc
