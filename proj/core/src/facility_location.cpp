#include "floc/facility_location.hpp"

#include <algorithm>
#include <limits>

namespace floc {

CoverageState::CoverageState(std::size_t n, SimilarityKind kind)
    : best_(n, kind == SimilarityKind::kShifted ? 0.0f : -std::numeric_limits<float>::infinity()),
      member_(n, 0) {}

double CoverageState::gain(std::span<const float> column) const {
  const std::size_t n = best_.size();
  double acc[4] = {};
  std::size_t v = 0;
  if (selected_.empty()) {
    for (; v + 4 <= n; v += 4) {
      for (std::size_t k = 0; k < 4; ++k) acc[k] += static_cast<double>(column[v + k]);
    }
    for (std::size_t k = 0; v < n; ++v, ++k) acc[k] += static_cast<double>(column[v]);
  } else {
    for (; v + 4 <= n; v += 4) {
      for (std::size_t k = 0; k < 4; ++k) {
        const double diff =
            static_cast<double>(column[v + k]) - static_cast<double>(best_[v + k]);
        acc[k] += diff > 0.0 ? diff : 0.0;
      }
    }
    for (std::size_t k = 0; v < n; ++v, ++k) {
      const double diff = static_cast<double>(column[v]) - static_cast<double>(best_[v]);
      acc[k] += diff > 0.0 ? diff : 0.0;
    }
  }
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double CoverageState::add(std::size_t pick, std::span<const float> column) {
  const double g = gain(column);
  for (std::size_t v = 0; v < best_.size(); ++v) best_[v] = std::max(best_[v], column[v]);
  member_[pick] = 1;
  selected_.push_back(pick);
  objective_ += g;
  return g;
}

namespace detail {

void check_candidate(const CoverageState& state, std::size_t candidate) {
  if (candidate >= state.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "token " + std::to_string(candidate) +
                                                 " is outside [0, " +
                                                 std::to_string(state.size()) + ")");
  }
  if (state.contains(candidate)) {
    throw Error(ErrorCode::kAlreadySelected,
                "token " + std::to_string(candidate) + " is already in the selected set");
  }
}

}  // namespace detail

void check_subset(std::size_t n, std::span<const std::size_t> subset) {
  std::vector<char> seen(n, 0);
  for (const std::size_t u : subset) {
    if (u >= n) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "index " + std::to_string(u) + " is outside [0, " + std::to_string(n) + ")");
    }
    if (seen[u]) {
      throw Error(ErrorCode::kDuplicateIndex, "index " + std::to_string(u) + " appears twice");
    }
    seen[u] = 1;
  }
}

double objective(const SimilarityMatrix& sims, std::span<const std::size_t> subset) {
  const std::size_t n = sims.size();
  check_subset(n, subset);
  if (subset.empty()) return 0.0;

  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    float best = sims(v, subset[0]);
    for (const std::size_t u : subset.subspan(1)) best = std::max(best, sims(v, u));
    total += static_cast<double>(best);
  }
  return total;
}

}  // namespace floc
