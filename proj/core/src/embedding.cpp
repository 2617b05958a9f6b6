#include "floc/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "floc/error.hpp"
#include "floc/parallel.hpp"

namespace floc {

TokenMatrix::TokenMatrix(std::size_t n, std::size_t d) : n_(n), d_(d), data_(n * d, 0.0f) {
  if (d == 0) throw Error(ErrorCode::kInvalidConfig, "embedding dimension d must be >= 1");
}

TokenMatrix::TokenMatrix(std::size_t n, std::size_t d, std::vector<float> data)
    : n_(n), d_(d), data_(std::move(data)) {
  if (d == 0) throw Error(ErrorCode::kInvalidConfig, "embedding dimension d must be >= 1");
  if (data_.size() != n * d) {
    throw Error(ErrorCode::kInvalidConfig,
                "token data holds " + std::to_string(data_.size()) + " values, expected n*d = " +
                    std::to_string(n * d));
  }
  check_finite();
}

TokenMatrix TokenMatrix::slice_rows(std::size_t start, std::size_t count) const {
  if (start + count > n_) {
    throw Error(ErrorCode::kIndexOutOfRange, "row slice [" + std::to_string(start) + ", " +
                                                 std::to_string(start + count) +
                                                 ") exceeds n = " + std::to_string(n_));
  }
  TokenMatrix out(count, d_);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(start * d_), count * d_,
              out.data_.begin());
  return out;
}

void TokenMatrix::check_finite() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw Error(ErrorCode::kNonFiniteValue,
                  "row " + std::to_string(i / d_) + " contains a NaN or Inf value");
    }
  }
}

__attribute__((target_clones("avx2", "default")))
double dot(std::span<const float> a, std::span<const float> b) {
  // Eight independent lanes; lane k sums the products at positions = k mod 8,
  // then the lanes are combined pairwise. Products commute exactly, so the
  // result is symmetric in (a, b).
  constexpr std::size_t kLanes = 8;
  double acc[kLanes] = {};
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t k = 0; k < kLanes; ++k) {
      acc[k] += static_cast<double>(a[i + k]) * static_cast<double>(b[i + k]);
    }
  }
  for (std::size_t k = 0; i < n; ++i, ++k) {
    acc[k] += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

TokenMatrix normalize_rows(const TokenMatrix& tokens, ZeroRowPolicy policy) {
  TokenMatrix out(tokens.rows(), tokens.dim());
  for (std::size_t i = 0; i < tokens.rows(); ++i) {
    const auto src = tokens.row(i);
    auto dst = out.row(i);
    const double norm = std::sqrt(dot(src, src));
    if (!(norm >= kZeroNormThreshold)) {
      if (policy == ZeroRowPolicy::kReject) {
        throw Error(ErrorCode::kZeroNormRow,
                    "row " + std::to_string(i) + " has zero norm and cannot be normalized");
      }
      std::fill(dst.begin(), dst.end(), 0.0f);
      dst[0] = 1.0f;
      continue;
    }
    for (std::size_t k = 0; k < src.size(); ++k) {
      dst[k] = static_cast<float>(static_cast<double>(src[k]) / norm);
    }
  }
  return out;
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (!(na >= kZeroNormThreshold) || !(nb >= kZeroNormThreshold)) {
    throw Error(ErrorCode::kZeroNormRow,
                std::string("row ") + (!(na >= kZeroNormThreshold) ? "0" : "1") +
                    " has zero norm; cosine similarity is undefined");
  }
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

float unit_similarity(std::span<const float> a, std::span<const float> b, SimilarityKind kind,
                      bool same) {
  const float raw = same ? 1.0f : static_cast<float>(std::clamp(dot(a, b), -1.0, 1.0));
  return kind == SimilarityKind::kShifted ? raw + 1.0f : raw;
}

SimilarityMatrix::SimilarityMatrix(std::size_t n, SimilarityKind kind, std::vector<float> values)
    : n_(n), kind_(kind), values_(std::move(values)) {
  if (values_.size() != n * n) {
    throw Error(ErrorCode::kInvalidConfig, "similarity matrix must hold n*n values");
  }
}

SimilarityMatrix similarity_matrix_from_unit(const TokenMatrix& unit_rows, SimilarityKind kind,
                                             unsigned threads) {
  const std::size_t n = unit_rows.rows();
  std::vector<float> values(n * n);
  // Tile row I computes the upper-triangle tiles (I, J >= I) and mirrors each
  // into (J, I), so every cell has exactly one writer.
  constexpr std::size_t kTile = 64;
  const std::size_t tiles = (n + kTile - 1) / kTile;
  parallel_for(tiles, resolve_threads(threads), [&](std::size_t ti) {
    std::vector<float> tile(kTile * kTile);
    const std::size_t i0 = ti * kTile;
    const std::size_t i1 = std::min(n, i0 + kTile);
    for (std::size_t j0 = i0; j0 < n; j0 += kTile) {
      const std::size_t j1 = std::min(n, j0 + kTile);
      for (std::size_t i = i0; i < i1; ++i) {
        const auto vi = unit_rows.row(i);
        for (std::size_t j = std::max(i, j0); j < j1; ++j) {
          tile[(i - i0) * kTile + (j - j0)] = unit_similarity(vi, unit_rows.row(j), kind, i == j);
        }
      }
      for (std::size_t i = i0; i < i1; ++i) {
        for (std::size_t j = std::max(i, j0); j < j1; ++j) {
          values[i * n + j] = tile[(i - i0) * kTile + (j - j0)];
        }
      }
      for (std::size_t j = j0; j < j1; ++j) {
        for (std::size_t i = i0; i < std::min(i1, j); ++i) {
          values[j * n + i] = tile[(i - i0) * kTile + (j - j0)];
        }
      }
    }
  });
  return SimilarityMatrix(n, kind, std::move(values));
}

SimilarityMatrix similarity_matrix(const TokenMatrix& tokens, SimilarityKind kind,
                                   ZeroRowPolicy policy, unsigned threads) {
  return similarity_matrix_from_unit(normalize_rows(tokens, policy), kind, threads);
}

}  // namespace floc
