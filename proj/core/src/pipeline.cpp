#include "floc/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <numeric>
#include <string>

#include "floc/error.hpp"
#include "floc/facility_location.hpp"
#include "floc/parallel.hpp"

namespace floc {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string(what) + " '" + std::string(text) + "' is not an unsigned integer");
  }
  return value;
}

// Normalized rows under the configured zero-row policy.
TokenMatrix unit_block(const TokenMatrix& block, const CompressionConfig& config) {
  return normalize_rows(block, config.zero_rows);
}

Selection select_block(const TokenMatrix& block, std::size_t block_id, std::size_t budget,
                       const CompressionConfig& config, double& wall_time_s) {
  const auto t0 = Clock::now();
  Selection sel;
  std::optional<TokenMatrix> unit;
  switch (config.method) {
    case Method::kFloc: {
      unit = unit_block(block, config);
      const auto sims = similarity_matrix_from_unit(*unit, SimilarityKind::kShifted, 1);
      sel = config.engine == Engine::kLazy ? lazy_greedy(sims, budget) : naive_greedy(sims, budget);
      break;
    }
    case Method::kRandom: {
      Rng rng = Rng::for_stream(config.seed, block_id);
      sel = random_select(block.rows(), budget, rng);
      break;
    }
    case Method::kUniform:
      sel = uniform_select(block.rows(), budget);
      break;
    case Method::kKMeans: {
      unit = unit_block(block, config);
      Rng rng = Rng::for_stream(config.seed, block_id);
      sel = kmeans_medoid_select(*unit, budget, rng, config.kmeans_max_iters);
      break;
    }
    case Method::kFps:
      unit = unit_block(block, config);
      sel = farthest_point_select(*unit, budget);
      break;
  }
  wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();

  if (config.method != Method::kFloc && !sel.picks.empty()) {
    // Baselines report the shifted objective of what they picked, outside the
    // timed region.
    if (!unit) unit = unit_block(block, config);
    const std::size_t n = unit->rows();
    CoverageState state(n, SimilarityKind::kShifted);
    std::vector<float> column(n);
    sel.gains.clear();
    for (const std::size_t pick : sel.picks) {
      for (std::size_t j = 0; j < n; ++j) {
        column[j] = unit_similarity(unit->row(pick), unit->row(j), SimilarityKind::kShifted,
                                    j == pick);
      }
      sel.gains.push_back(state.add(pick, column));
    }
    sel.objective = state.objective();
  }
  return sel;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kFloc: return "floc";
    case Method::kRandom: return "random";
    case Method::kUniform: return "uniform";
    case Method::kKMeans: return "kmeans";
    case Method::kFps: return "fps";
  }
  return "unknown";
}

std::string_view to_string(Engine engine) {
  return engine == Engine::kLazy ? "lazy" : "naive";
}

Method parse_method(std::string_view name) {
  for (const Method m :
       {Method::kFloc, Method::kRandom, Method::kUniform, Method::kKMeans, Method::kFps}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown method '" + std::string(name) +
                  "' (expected floc, random, uniform, kmeans or fps)");
}

Engine parse_engine(std::string_view name) {
  if (name == "lazy") return Engine::kLazy;
  if (name == "naive") return Engine::kNaive;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown engine '" + std::string(name) + "' (expected lazy or naive)");
}

Budget Budget::ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0 || num == 0 || num > den) {
    throw Error(ErrorCode::kInvalidConfig, "budget ratio " + std::to_string(num) + "/" +
                                               std::to_string(den) + " is not in (0, 1]");
  }
  Budget b;
  b.is_ratio_ = true;
  const std::uint64_t g = std::gcd(num, den);
  b.num_ = num / g;
  b.den_ = den / g;
  return b;
}

Budget Budget::absolute(std::size_t count) {
  Budget b;
  b.is_ratio_ = false;
  b.num_ = count;
  b.den_ = 1;
  return b;
}

Budget Budget::parse_ratio(std::string_view text) {
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    return ratio(parse_u64(text.substr(0, slash), "ratio numerator"),
                 parse_u64(text.substr(slash + 1), "ratio denominator"));
  }
  // Decimal form such as 0.125.
  const auto dot_pos = text.find('.');
  if (dot_pos == std::string_view::npos) return ratio(parse_u64(text, "ratio"), 1);
  const std::string_view int_part = text.substr(0, dot_pos);
  const std::string_view frac_part = text.substr(dot_pos + 1);
  if (frac_part.empty() || frac_part.size() > 18) {
    throw Error(ErrorCode::kInvalidConfig, "ratio '" + std::string(text) + "' is malformed");
  }
  std::uint64_t den = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
  const std::uint64_t whole = int_part.empty() ? 0 : parse_u64(int_part, "ratio");
  if (whole > 1) {
    throw Error(ErrorCode::kInvalidConfig, "budget ratio " + std::string(text) + " exceeds 1");
  }
  return ratio(whole * den + parse_u64(frac_part, "ratio"), den);
}

std::size_t Budget::resolve(std::size_t n) const {
  if (!is_ratio_) return static_cast<std::size_t>(num_);
  if (n == 0) return 0;
  __extension__ using Wide = unsigned __int128;
  const Wide k = (Wide{2} * n * num_ + den_) / (Wide{2} * den_);
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

std::string Budget::to_string() const {
  if (!is_ratio_) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::size_t BlockPlan::total_budget() const {
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.budget;
  return total;
}

std::vector<BlockExtent> partition(std::size_t n, std::size_t tokens_per_frame,
                                   std::optional<std::size_t> frames_per_block) {
  if (tokens_per_frame == 0) {
    throw Error(ErrorCode::kInvalidConfig, "tokens per frame must be >= 1");
  }
  if (frames_per_block && *frames_per_block == 0) {
    throw Error(ErrorCode::kInvalidConfig, "block length T must be >= 1 frame");
  }
  if (n % tokens_per_frame != 0) {
    throw Error(ErrorCode::kNonIntegralFrames,
                std::to_string(n) + " tokens do not split into frames of " +
                    std::to_string(tokens_per_frame));
  }
  std::vector<BlockExtent> out;
  if (n == 0) return out;
  const std::size_t block_len = frames_per_block ? *frames_per_block * tokens_per_frame : n;
  for (std::size_t start = 0; start < n; start += block_len) {
    out.push_back({start, std::min(block_len, n - start)});
  }
  return out;
}

BlockPlan allocate_budget(std::span<const BlockExtent> extents, std::size_t budget) {
  std::size_t n = 0;
  for (const auto& e : extents) n += e.length;
  if (budget > n) {
    throw Error(ErrorCode::kInvalidConfig, "budget " + std::to_string(budget) +
                                               " exceeds the " + std::to_string(n) +
                                               " tokens covered by the blocks");
  }
  BlockPlan plan;
  plan.blocks.reserve(extents.size());
  if (extents.empty()) return plan;

  // Exact quotas budget * len / n as integer quotient and remainder.
  __extension__ using Wide = unsigned __int128;
  std::vector<std::size_t> remainder(extents.size());
  std::size_t assigned = 0;
  for (std::size_t b = 0; b < extents.size(); ++b) {
    const Wide scaled = Wide{budget} * extents[b].length;
    const auto share = static_cast<std::size_t>(scaled / n);
    remainder[b] = static_cast<std::size_t>(scaled % n);
    plan.blocks.push_back({extents[b].start, extents[b].length, share});
    assigned += share;
  }
  std::vector<std::size_t> order(extents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < budget; ++i) {
    ++plan.blocks[order[i]].budget;
    ++assigned;
  }

  // No cap is needed: a share is at most ceil(budget * len / n) <= len because
  // budget <= n.
  return plan;
}

Selection run_blocks(const TokenMatrix& tokens, const BlockPlan& plan,
                     const CompressionConfig& config) {
  std::size_t covered = 0;
  for (const auto& b : plan.blocks) {
    if (b.start != covered || b.budget > b.length) {
      throw Error(ErrorCode::kInvalidConfig, "block plan does not tile the token stream");
    }
    covered += b.length;
  }
  if (covered != tokens.rows()) {
    throw Error(ErrorCode::kInvalidConfig, "block plan covers " + std::to_string(covered) +
                                               " tokens but the input has " +
                                               std::to_string(tokens.rows()));
  }

  const std::size_t count = plan.blocks.size();
  std::vector<Selection> parts(count);
  std::vector<double> times(count, 0.0);
  parallel_for(count, resolve_threads(config.threads), [&](std::size_t b) {
    const auto& block = plan.blocks[b];
    try {
      parts[b] = select_block(tokens.slice_rows(block.start, block.length), b, block.budget,
                              config, times[b]);
    } catch (const Error& e) {
      throw Error(e.code(), "block " + std::to_string(b) + " (tokens " +
                                std::to_string(block.start) + ".." +
                                std::to_string(block.start + block.length) + "): " + e.message());
    }
  });

  Selection out;
  out.method = std::string(to_string(config.method));
  if (config.method == Method::kFloc) out.engine = std::string(to_string(config.engine));
  for (std::size_t b = 0; b < count; ++b) {
    const auto& block = plan.blocks[b];
    const Selection& part = parts[b];
    for (const std::size_t p : part.picks) out.picks.push_back(block.start + p);
    out.gains.insert(out.gains.end(), part.gains.begin(), part.gains.end());
    out.scores.insert(out.scores.end(), part.scores.begin(), part.scores.end());
    out.objective += part.objective;
    out.evaluations += part.evaluations;
    out.iterations += part.iterations;
    out.wall_time_s += times[b];
    out.warnings.insert(out.warnings.end(), part.warnings.begin(), part.warnings.end());
    out.blocks.push_back({b, block.start, block.length, block.budget, part.objective,
                          part.evaluations, times[b]});
  }
  out.sorted_indices = out.picks;
  std::sort(out.sorted_indices.begin(), out.sorted_indices.end());
  return out;
}

Selection select(const TokenMatrix& tokens, const CompressionConfig& config) {
  const std::size_t n = tokens.rows();
  if (n == 0) throw Error(ErrorCode::kEmptyGroundSet, "ground set has no tokens");
  if (config.kmeans_max_iters == 0) {
    throw Error(ErrorCode::kInvalidConfig, "k-means max_iters must be >= 1");
  }
  tokens.check_finite();

  std::size_t budget = config.budget.resolve(n);
  std::vector<std::string> warnings;
  if (budget > n) {
    warnings.push_back("budget " + std::to_string(budget) + " exceeds ground set size " +
                       std::to_string(n) + "; capped");
    budget = n;
  }
  const auto extents = partition(n, config.tokens_per_frame, config.block_frames);
  Selection sel = run_blocks(tokens, allocate_budget(extents, budget), config);
  sel.warnings.insert(sel.warnings.begin(), warnings.begin(), warnings.end());
  return sel;
}

QualityReport make_report(const TokenMatrix& tokens, const Selection& selection,
                          const CompressionConfig& config, unsigned threads) {
  QualityReport report;
  report.method = selection.method;
  report.n = tokens.rows();
  report.budget = selection.sorted_indices.size();
  report.block_frames = config.block_frames ? std::to_string(*config.block_frames) : "whole";
  report.wall_time_s = selection.wall_time_s;
  report.evaluations = selection.evaluations;
  if (!selection.sorted_indices.empty()) {
    const auto metrics =
        evaluate_subset(normalize_rows(tokens, config.zero_rows), selection.sorted_indices, threads);
    report.objective_raw = metrics.objective_raw;
    report.objective_shifted = metrics.objective_shifted;
    report.avg_sum_coverage = metrics.avg_sum_coverage;
    report.avg_distance = metrics.avg_distance;
  }
  return report;
}

}  // namespace floc
