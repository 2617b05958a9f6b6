#include "floc/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "floc/error.hpp"
#include "floc/facility_location.hpp"
#include "floc/greedy.hpp"

namespace floc {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __extension__ unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(result);
}

OracleResult exhaustive_optimum(const SimilarityMatrix& sims, std::size_t budget,
                                std::uint64_t limit) {
  if (sims.kind() != SimilarityKind::kShifted) {
    throw Error(ErrorCode::kInvalidConfig, "the oracle runs on shifted similarities");
  }
  const std::size_t n = sims.size();
  if (budget > n) {
    throw Error(ErrorCode::kInvalidConfig, "budget " + std::to_string(budget) +
                                               " exceeds ground set size " + std::to_string(n));
  }
  const std::uint64_t count = binomial(n, budget);
  if (count > limit) {
    throw Error(ErrorCode::kInstanceTooLarge, "C(" + std::to_string(n) + ", " +
                                                  std::to_string(budget) + ") = " +
                                                  std::to_string(count) + " subsets exceeds " +
                                                  std::to_string(limit));
  }

  // With nonnegative similarities f is monotone, so some optimum among
  // |S| <= K has exactly K elements: pad any smaller optimum with arbitrary
  // tokens and f cannot decrease. Enumerating size-K subsets is enough.
  OracleResult result;
  std::vector<std::size_t> subset(budget);
  std::iota(subset.begin(), subset.end(), std::size_t{0});
  bool first = true;
  for (;;) {
    const double value = objective(sims, subset);
    ++result.subsets_evaluated;
    // Lexicographic enumeration plus strict '>' keeps the smallest index set.
    if (first || value > result.best_value) {
      result.best_value = value;
      result.best_subset = subset;
      first = false;
    }
    // Next combination in lexicographic order.
    std::size_t i = budget;
    while (i > 0 && subset[i - 1] == n - budget + i - 1) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t j = i; j < budget; ++j) subset[j] = subset[j - 1] + 1;
  }
  return result;
}

double verify_bound(const SimilarityMatrix& sims, std::size_t budget, std::uint64_t limit) {
  const OracleResult opt = exhaustive_optimum(sims, budget, limit);
  if (budget == 0) return 1.0;
  const Selection greedy = lazy_greedy(sims, budget);
  const double greedy_value = objective(sims, greedy.picks);
  if (opt.best_value == 0.0) return greedy_value == 0.0 ? 1.0 : 0.0;
  return greedy_value / opt.best_value;
}

}  // namespace floc
