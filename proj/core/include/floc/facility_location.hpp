#pragma once

// Facility location objective f(S) = sum_{v in V} max_{u in S} sim(v, u) with
// f(empty) = 0, plus incremental coverage state for O(n) marginal gains.

#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "floc/embedding.hpp"
#include "floc/error.hpp"

namespace floc {

// Anything that can hand out similarity rows.
template <typename S>
concept SimilaritySource = requires(S& s, std::size_t i) {
  { s.size() } -> std::convertible_to<std::size_t>;
  { s.kind() } -> std::convertible_to<SimilarityKind>;
  { s.row(i) } -> std::convertible_to<std::span<const float>>;
};

class CoverageState {
 public:
  CoverageState() = default;
  CoverageState(std::size_t n, SimilarityKind kind);

  std::size_t size() const noexcept { return best_.size(); }
  // best[v] = max_{u in S} sim(v, u); 0 (shifted) or -inf (raw) while S is empty.
  std::span<const float> best() const noexcept { return best_; }
  double objective() const noexcept { return objective_; }
  std::span<const std::size_t> selected() const noexcept { return selected_; }
  bool contains(std::size_t i) const { return member_[i] != 0; }

  // f(S + c) - f(S) given column c of the similarity matrix. No membership
  // check; sums in a fixed order so equal inputs give bitwise-equal gains.
  double gain(std::span<const float> column) const;

  // Adds `pick` and returns its gain.
  double add(std::size_t pick, std::span<const float> column);

 private:
  std::vector<float> best_;
  std::vector<char> member_;
  std::vector<std::size_t> selected_;
  double objective_ = 0.0;
};

// Throws IndexOutOfRange or DuplicateIndex unless subset holds distinct
// indices in [0, n).
void check_subset(std::size_t n, std::span<const std::size_t> subset);

// f(subset), recomputed from scratch. Throws IndexOutOfRange, DuplicateIndex.
double objective(const SimilarityMatrix& sims, std::span<const std::size_t> subset);

namespace detail {
void check_candidate(const CoverageState& state, std::size_t candidate);
}  // namespace detail

template <SimilaritySource Source>
double marginal_gain(const CoverageState& state, Source& sims, std::size_t candidate) {
  detail::check_candidate(state, candidate);
  return state.gain(sims.row(candidate));
}

// In-place S <- S + {pick}; returns the gain it realized.
template <SimilaritySource Source>
double apply_pick(CoverageState& state, Source& sims, std::size_t pick) {
  detail::check_candidate(state, pick);
  return state.add(pick, sims.row(pick));
}

}  // namespace floc
