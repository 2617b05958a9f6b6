#pragma once

// Benchmark sweep: every method x block size x ratio cell is run `reps`
// times single-threaded and summarized by the median wall time.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "floc/embedding.hpp"
#include "floc/pipeline.hpp"

namespace floc {

struct BenchOptions {
  std::vector<Method> methods = {Method::kFloc};
  // nullopt = whole stream as one block.
  std::vector<std::optional<std::size_t>> block_frames = {std::nullopt};
  std::vector<Budget> budgets = {Budget::ratio(1, 8)};
  std::size_t tokens_per_frame = 1;
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  Engine engine = Engine::kLazy;
  std::size_t kmeans_max_iters = kDefaultKMeansIters;
  ZeroRowPolicy zero_rows = ZeroRowPolicy::kReject;
};

struct BenchRow {
  std::string method;
  std::string engine;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t p = 1;
  std::string block_frames;
  std::string ratio;
  std::size_t budget = 0;
  std::size_t reps = 0;
  double wall_time_median_s = 0.0;
  double wall_time_min_s = 0.0;
  double wall_time_max_s = 0.0;
  std::uint64_t evaluations = 0;
  double objective_raw = 0.0;
  double objective_shifted = 0.0;
  double avg_sum_coverage = 0.0;
  std::optional<double> avg_distance;
};

// Rows in the order methods, then block sizes, then budgets. Quality columns
// come from the first repetition (all repetitions select the same set).
std::vector<BenchRow> run_bench(const TokenMatrix& tokens, const BenchOptions& options);

std::string_view bench_csv_header();
std::string to_csv_line(const BenchRow& row);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

// Median of a non-empty sample (mean of the middle pair for even sizes).
double median(std::vector<double> values);

}  // namespace floc
