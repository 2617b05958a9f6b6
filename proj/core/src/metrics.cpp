#include "floc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "floc/error.hpp"
#include "floc/facility_location.hpp"
#include "floc/parallel.hpp"

namespace floc {

namespace {

void require_raw(const SimilarityMatrix& sims) {
  if (sims.kind() != SimilarityKind::kRawCosine) {
    throw Error(ErrorCode::kInvalidConfig, "quality metrics are defined on raw cosine similarity");
  }
}

}  // namespace

double averaged_sum_coverage(const SimilarityMatrix& sims_raw,
                             std::span<const std::size_t> subset) {
  require_raw(sims_raw);
  if (subset.empty()) {
    throw Error(ErrorCode::kEmptySubset, "averaged sum coverage needs a nonempty subset");
  }
  check_subset(sims_raw.size(), subset);
  double total = 0.0;
  for (std::size_t v = 0; v < sims_raw.size(); ++v) {
    for (const std::size_t u : subset) total += static_cast<double>(sims_raw(v, u));
  }
  return total / (static_cast<double>(sims_raw.size()) * static_cast<double>(subset.size()));
}

double averaged_distance(const SimilarityMatrix& sims_raw, std::span<const std::size_t> subset) {
  require_raw(sims_raw);
  if (subset.size() < 2) {
    throw Error(ErrorCode::kSubsetTooSmall,
                "averaged distance is undefined for fewer than two tokens");
  }
  check_subset(sims_raw.size(), subset);
  double total = 0.0;
  for (const std::size_t u : subset) {
    for (const std::size_t w : subset) {
      if (u != w) total += 1.0 - static_cast<double>(sims_raw(u, w));
    }
  }
  const double k = static_cast<double>(subset.size());
  return total / (k * (k - 1.0));
}

ZScores z_normalize(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kInvalidConfig, "z-normalization needs at least two values");
  }
  const double count = static_cast<double>(values.size());
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= count;
  double var = 0.0;
  for (const double v : values) var += (v - mean) * (v - mean);
  var /= count;

  ZScores out;
  out.values.assign(values.size(), 0.0);
  const bool all_equal = std::all_of(values.begin(), values.end(),
                                     [&](double v) { return v == values.front(); });
  if (all_equal || !(var > 0.0)) {
    out.degenerate = true;
    return out;
  }
  const double sd = std::sqrt(var);
  for (std::size_t i = 0; i < values.size(); ++i) out.values[i] = (values[i] - mean) / sd;
  return out;
}

SubsetMetrics evaluate_subset(const TokenMatrix& unit_rows, std::span<const std::size_t> subset,
                              unsigned threads) {
  const std::size_t n = unit_rows.rows();
  if (subset.empty()) throw Error(ErrorCode::kEmptySubset, "subset is empty");
  check_subset(n, subset);

  // Per-token partial results, reduced sequentially afterwards.
  std::vector<double> best_raw(n), best_shifted(n), coverage(n);
  std::vector<char> in_subset(n, 0);
  for (const std::size_t u : subset) in_subset[u] = 1;
  parallel_for(n, resolve_threads(threads), [&](std::size_t v) {
    const auto row = unit_rows.row(v);
    float raw_max = -2.0f;
    float shifted_max = -1.0f;
    double sum = 0.0;
    for (const std::size_t u : subset) {
      const float raw = unit_similarity(row, unit_rows.row(u), SimilarityKind::kRawCosine, u == v);
      raw_max = std::max(raw_max, raw);
      shifted_max = std::max(shifted_max, raw + 1.0f);
      sum += static_cast<double>(raw);
    }
    best_raw[v] = raw_max;
    best_shifted[v] = shifted_max;
    coverage[v] = sum;
  });

  SubsetMetrics out;
  double coverage_total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    out.objective_raw += best_raw[v];
    out.objective_shifted += best_shifted[v];
    coverage_total += coverage[v];
  }
  out.avg_sum_coverage =
      coverage_total / (static_cast<double>(n) * static_cast<double>(subset.size()));

  if (subset.size() >= 2) {
    double total = 0.0;
    for (const std::size_t u : subset) {
      for (const std::size_t w : subset) {
        if (u == w) continue;
        total += 1.0 - static_cast<double>(unit_similarity(unit_rows.row(u), unit_rows.row(w),
                                                           SimilarityKind::kRawCosine, false));
      }
    }
    const double k = static_cast<double>(subset.size());
    out.avg_distance = total / (k * (k - 1.0));
  }
  return out;
}

}  // namespace floc
