#pragma once

// Representativeness and diversity of a selected subset.
//
//   averaged sum coverage(S) = 1/(|V||S|) * sum_{v in V} sum_{u in S} sim(v, u)
//   averaged distance(S)     = 1/(|S|(|S|-1)) * sum_{u != w in S} (1 - sim(u, w))
//
// Both use raw cosine similarity. z_normalize rescales one metric across
// methods on a single instance (population standard deviation).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "floc/embedding.hpp"

namespace floc {

struct QualityReport {
  std::string method;
  std::size_t n = 0;
  std::size_t budget = 0;
  std::string block_frames;  // "whole" or the frame count
  double objective_raw = 0.0;
  double objective_shifted = 0.0;
  double avg_sum_coverage = 0.0;
  // Undefined for fewer than two selected tokens.
  std::optional<double> avg_distance;
  double wall_time_s = 0.0;
  std::uint64_t evaluations = 0;
};

// Throws InvalidConfig for shifted input, EmptySubset for an empty subset, and
// IndexOutOfRange / DuplicateIndex for bad indices.
double averaged_sum_coverage(const SimilarityMatrix& sims_raw, std::span<const std::size_t> subset);

// Throws SubsetTooSmall when |subset| < 2.
double averaged_distance(const SimilarityMatrix& sims_raw, std::span<const std::size_t> subset);

struct ZScores {
  std::vector<double> values;
  // All inputs were equal; values are all zero.
  bool degenerate = false;
};

// Throws InvalidConfig for fewer than two values.
ZScores z_normalize(std::span<const double> values);

// Global f(S) (raw and shifted), averaged sum coverage and averaged distance
// straight from unit rows, in O(n * |S| * d) without an n x n matrix.
// Entries match similarity_matrix bit for bit; sums run in a fixed order, so
// the result is independent of `threads`.
struct SubsetMetrics {
  double objective_raw = 0.0;
  double objective_shifted = 0.0;
  double avg_sum_coverage = 0.0;
  std::optional<double> avg_distance;
};

SubsetMetrics evaluate_subset(const TokenMatrix& unit_rows, std::span<const std::size_t> subset,
                              unsigned threads = 1);

}  // namespace floc
