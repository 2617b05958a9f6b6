#pragma once

// Block-wise compression pipeline: split the token stream into temporal blocks
// of T frames, apportion the global budget across blocks, select inside each
// block independently, and merge the picks back in temporal order.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "floc/baselines.hpp"
#include "floc/embedding.hpp"
#include "floc/greedy.hpp"
#include "floc/metrics.hpp"

namespace floc {

enum class Method { kFloc, kRandom, kUniform, kKMeans, kFps };

std::string_view to_string(Method method);
std::string_view to_string(Engine engine);
// Throws InvalidConfig for unknown names.
Method parse_method(std::string_view name);
Engine parse_engine(std::string_view name);

// Either a ratio num/den in (0, 1] or an absolute token count.
class Budget {
 public:
  static Budget ratio(std::uint64_t num, std::uint64_t den);
  static Budget absolute(std::size_t count);
  // Parses "a/b" or a decimal count.
  static Budget parse_ratio(std::string_view text);

  bool is_ratio() const noexcept { return is_ratio_; }
  std::uint64_t numerator() const noexcept { return num_; }
  std::uint64_t denominator() const noexcept { return den_; }

  // round(ratio * n) (halves round up), raised to 1 when n > 0; or the
  // absolute count. The result may exceed n for absolute budgets.
  std::size_t resolve(std::size_t n) const;

  std::string to_string() const;

 private:
  bool is_ratio_ = false;
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

struct CompressionConfig {
  Budget budget = Budget::ratio(1, 8);
  // Frames per block; nullopt processes the whole stream as one block.
  std::optional<std::size_t> block_frames;
  std::size_t tokens_per_frame = 1;
  Method method = Method::kFloc;
  std::uint64_t seed = 0;
  Engine engine = Engine::kLazy;
  std::size_t kmeans_max_iters = kDefaultKMeansIters;
  ZeroRowPolicy zero_rows = ZeroRowPolicy::kReject;
  // Workers for block-level parallelism; 0 = default (see resolve_threads).
  unsigned threads = 0;
};

struct BlockExtent {
  std::size_t start = 0;
  std::size_t length = 0;
  friend bool operator==(const BlockExtent&, const BlockExtent&) = default;
};

struct PlannedBlock {
  std::size_t start = 0;
  std::size_t length = 0;
  std::size_t budget = 0;
  friend bool operator==(const PlannedBlock&, const PlannedBlock&) = default;
};

struct BlockPlan {
  std::vector<PlannedBlock> blocks;
  std::size_t total_budget() const;
};

// Blocks of T*p tokens, with a shorter final block for any remainder.
// Throws NonIntegralFrames when p does not divide n, InvalidConfig for p == 0
// or T == 0.
std::vector<BlockExtent> partition(std::size_t n, std::size_t tokens_per_frame,
                                   std::optional<std::size_t> frames_per_block);

// Largest-remainder apportionment of `budget` proportional to block length.
// Ties in the remainder go to the earlier block. No share ever exceeds its
// block length.
// Throws InvalidConfig when budget exceeds the total length.
BlockPlan allocate_budget(std::span<const BlockExtent> extents, std::size_t budget);

// Runs the configured selector on each block (in parallel when allowed) and
// merges: picks/gains concatenate in block order, sorted_indices ascend,
// objective and evaluations sum over blocks. Errors name the failing block.
Selection run_blocks(const TokenMatrix& tokens, const BlockPlan& plan,
                     const CompressionConfig& config);

// Validates the config, resolves K (capping it at n with a warning), plans
// blocks and calls run_blocks. Throws EmptyGroundSet for n == 0.
Selection select(const TokenMatrix& tokens, const CompressionConfig& config);

// QualityReport for a finished selection over the whole ground set.
QualityReport make_report(const TokenMatrix& tokens, const Selection& selection,
                          const CompressionConfig& config, unsigned threads = 1);

}  // namespace floc
