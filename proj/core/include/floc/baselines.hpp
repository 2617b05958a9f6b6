#pragma once

// Reference selectors: random, uniform stride, k-means with medoid snapping,
// and farthest-point (min-max diversity) selection.

#include <cstddef>
#include <cstdint>

#include "floc/embedding.hpp"
#include "floc/greedy.hpp"

namespace floc {

// SplitMix64 stream. Every randomized component draws from this generator, so
// a seed fully determines its output on any platform:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent generator for sub-stream `stream` of `seed` (e.g. one per block).
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform in [0, 1) from the top 53 bits.
  double uniform();
  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  // Standard normal via Box-Muller (cosine branch only; two draws per value).
  double normal();

 private:
  std::uint64_t state_;
};

// K distinct indices via partial Fisher-Yates on [0, n). picks are in draw
// order; gains/objective are left empty (the pipeline fills them).
Selection random_select(std::size_t n, std::size_t budget, Rng& rng);

// Indices floor(i * n / K) for i in [0, K).
Selection uniform_select(std::size_t n, std::size_t budget);

inline constexpr std::size_t kDefaultKMeansIters = 20;

// Lloyd's k-means on unit-normalized rows with Euclidean distance, k-means++
// initialization drawn from `rng`, stopping when assignments stop changing or
// after max_iters assignment passes. Each nonempty cluster contributes the
// member closest to its mean (ties to the lowest index). Clusters that empty
// out during the iterations are reseeded with the token farthest from its
// nearest centroid; any cluster still empty at the end is replaced the same
// way, so exactly K distinct tokens come back.
Selection kmeans_medoid_select(const TokenMatrix& tokens, std::size_t budget, Rng& rng,
                               std::size_t max_iters = kDefaultKMeansIters);

// Starts at token 0, then repeatedly adds the unselected token maximizing the
// minimum cosine distance (1 - cos) to the picks so far, ties to the lowest
// index. scores holds that min-distance at the time of each pick (+inf for
// the first pick).
Selection farthest_point_select(const TokenMatrix& tokens, std::size_t budget);

}  // namespace floc
