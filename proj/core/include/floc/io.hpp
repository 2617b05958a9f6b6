#pragma once

// File formats.
//
// Embedding file (all integers little-endian):
//
//   offset  size  field
//   0       4     magic "FLOC"
//   4       2     version = 1
//   6       2     flags = 0
//   8       8     n (rows)
//   16      8     d (dimension, >= 1)
//   24      4nd   IEEE-754 binary32 payload, row-major
//
// The file length must be exactly 24 + 4*n*d bytes.
//
// Result records are JSON with a fixed field order and doubles printed with
// 17 significant digits, so equal results produce byte-identical files.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "floc/embedding.hpp"
#include "floc/greedy.hpp"
#include "floc/metrics.hpp"
#include "floc/oracle.hpp"
#include "floc/pipeline.hpp"

namespace floc {

inline constexpr char kEmbeddingMagic[4] = {'F', 'L', 'O', 'C'};
inline constexpr std::uint16_t kEmbeddingVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderBytes = 24;

std::vector<std::uint8_t> encode_embeddings(const TokenMatrix& tokens);
// Throws MalformedFile naming the violated field.
TokenMatrix decode_embeddings(std::span<const std::uint8_t> bytes);

// Throw IoError when the file cannot be opened/written; reading also throws
// MalformedFile.
void write_embedding_file(const std::filesystem::path& path, const TokenMatrix& tokens);
TokenMatrix read_embedding_file(const std::filesystem::path& path);

struct ResultRecord {
  std::string method;
  std::string engine;  // empty for baselines
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t budget = 0;
  std::optional<std::string> ratio;  // "a/b" when the budget was a ratio
  std::string block_frames;          // "whole" or a frame count
  std::size_t tokens_per_frame = 1;
  std::uint64_t seed = 0;
  std::vector<std::size_t> sorted_indices;
  std::vector<std::size_t> picks;
  std::vector<double> gains;
  double objective_raw = 0.0;
  double objective_shifted = 0.0;
  double selection_objective = 0.0;  // per-block shifted objectives, summed
  double avg_sum_coverage = 0.0;
  std::optional<double> avg_distance;
  std::optional<double> wall_time_s;  // omitted unless timing was requested
  std::uint64_t evaluations = 0;
  std::vector<std::string> warnings;
  std::vector<BlockSummary> blocks;
  std::optional<double> z_avg_sum_coverage;
  std::optional<double> z_avg_distance;
};

ResultRecord make_record(const TokenMatrix& tokens, const Selection& selection,
                         const QualityReport& report, const CompressionConfig& config,
                         bool include_timing);

std::string to_json(const ResultRecord& record);
// {"records": [...]} for several methods on one instance.
std::string to_json(std::span<const ResultRecord> records);

struct OracleRecord {
  std::size_t n = 0;
  std::size_t budget = 0;
  OracleResult optimum;
  std::vector<std::size_t> greedy_picks;
  double greedy_value = 0.0;
  double ratio = 1.0;
};

std::string to_json(const OracleRecord& record);

// Reads selected indices from a result record (its "sorted_indices"), a bare
// JSON array, or whitespace-separated integers. Throws MalformedFile/IoError.
std::vector<std::size_t> read_indices_file(const std::filesystem::path& path);

// Writes text, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

// printf("%.17g"); non-finite values become "null".
std::string format_double(double value);

}  // namespace floc
