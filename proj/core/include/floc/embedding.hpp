#pragma once

// Ground set of token embeddings and the cosine similarities between them.
//
// Selection always runs on *shifted* similarities (cosine + 1, so every entry
// lies in [0, 2]). Facility location over nonnegative similarities is monotone
// submodular, and for every nonempty S the shifted objective equals the raw
// objective plus n, so marginal gains after the first pick are unchanged.
//
// Storage is 32-bit; dot products and all sums accumulate in 64-bit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace floc {

// n x d row-major matrix of 32-bit embeddings, one row per token. Row order is
// temporal order (frame-major, patch-minor).
class TokenMatrix {
 public:
  TokenMatrix() = default;
  // Zero-filled n x d matrix. Throws InvalidConfig when d == 0.
  TokenMatrix(std::size_t n, std::size_t d);
  // Takes ownership of `data`; throws InvalidConfig when data.size() != n*d or
  // d == 0, NonFiniteValue on NaN/Inf.
  TokenMatrix(std::size_t n, std::size_t d, std::vector<float> data);

  std::size_t rows() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }
  bool empty() const noexcept { return n_ == 0; }

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * d_, d_};
  }
  std::span<float> row(std::size_t i) { return {data_.data() + i * d_, d_}; }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  // Copy of rows [start, start + count).
  TokenMatrix slice_rows(std::size_t start, std::size_t count) const;

  // Throws NonFiniteValue naming the first offending row.
  void check_finite() const;

  friend bool operator==(const TokenMatrix&, const TokenMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 1;
  std::vector<float> data_;
};

enum class SimilarityKind { kRawCosine, kShifted };

enum class ZeroRowPolicy {
  kReject,          // ZeroNormRow error
  kSubstituteUnit,  // replace the row by e_1
};

// Rows with norm below this are treated as zero.
inline constexpr double kZeroNormThreshold = 1e-12;

// Dot product with 64-bit accumulation in a fixed order. dot(a, b) and
// dot(b, a) are bitwise identical.
double dot(std::span<const float> a, std::span<const float> b);

TokenMatrix normalize_rows(const TokenMatrix& tokens,
                           ZeroRowPolicy policy = ZeroRowPolicy::kReject);

// v.u / (|v||u|). Throws ZeroNormRow when either row is zero.
double cosine_similarity(std::span<const float> a, std::span<const float> b);

// Similarity of two unit rows, as stored: raw cosine clamped to [-1, 1], or
// that value + 1 for the shifted kind. `same` forces the self-similarity.
float unit_similarity(std::span<const float> a, std::span<const float> b,
                      SimilarityKind kind, bool same);

class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::size_t n, SimilarityKind kind, std::vector<float> values);

  std::size_t size() const noexcept { return n_; }
  SimilarityKind kind() const noexcept { return kind_; }

  float operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  // Row i; by symmetry this is also column i.
  std::span<const float> row(std::size_t i) const { return {values_.data() + i * n_, n_}; }
  std::span<const float> values() const noexcept { return values_; }

 private:
  std::size_t n_ = 0;
  SimilarityKind kind_ = SimilarityKind::kShifted;
  std::vector<float> values_;
};

// Normalizes rows, then fills the full symmetric matrix. Parallel over rows
// with `threads` workers (0 = default); the output does not depend on the
// thread count.
SimilarityMatrix similarity_matrix(const TokenMatrix& tokens, SimilarityKind kind,
                                   ZeroRowPolicy policy = ZeroRowPolicy::kReject,
                                   unsigned threads = 1);

// Same as above for rows that are already unit-normalized.
SimilarityMatrix similarity_matrix_from_unit(const TokenMatrix& unit_rows,
                                             SimilarityKind kind, unsigned threads = 1);

}  // namespace floc
