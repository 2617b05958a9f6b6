#include "floc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "floc/error.hpp"

namespace floc {

namespace {

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void check_budget(std::size_t n, std::size_t budget) {
  if (budget > n) {
    throw Error(ErrorCode::kInvalidConfig, "budget " + std::to_string(budget) +
                                               " exceeds ground set size " + std::to_string(n));
  }
}

void sort_picks(Selection& sel) {
  sel.sorted_indices = sel.picks;
  std::sort(sel.sorted_indices.begin(), sel.sorted_indices.end());
}

// Same eight-lane layout as dot().
__attribute__((target_clones("avx2", "default")))
double squared_distance(std::span<const float> a, std::span<const float> b) {
  constexpr std::size_t kLanes = 8;
  double acc[kLanes] = {};
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t k = 0; k < kLanes; ++k) {
      const double diff = static_cast<double>(a[i + k]) - static_cast<double>(b[i + k]);
      acc[k] += diff * diff;
    }
  }
  for (std::size_t k = 0; i < n; ++i, ++k) {
    const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc[k] += diff * diff;
  }
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

}  // namespace

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix_finalize(seed ^ splitmix_finalize(stream + 0x9E3779B97F4A7C15ULL)));
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return splitmix_finalize(state_);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
  // Reject the low partial bucket so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Selection random_select(std::size_t n, std::size_t budget, Rng& rng) {
  check_budget(n, budget);
  Selection sel;
  sel.method = "random";
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < budget; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(perm[i], perm[j]);
  }
  sel.picks.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(budget));
  sort_picks(sel);
  return sel;
}

Selection uniform_select(std::size_t n, std::size_t budget) {
  check_budget(n, budget);
  Selection sel;
  sel.method = "uniform";
  sel.picks.reserve(budget);
  for (std::size_t i = 0; i < budget; ++i) sel.picks.push_back(i * n / budget);
  sort_picks(sel);
  return sel;
}

Selection kmeans_medoid_select(const TokenMatrix& tokens, std::size_t budget, Rng& rng,
                               std::size_t max_iters) {
  const std::size_t n = tokens.rows();
  check_budget(n, budget);
  if (max_iters == 0) throw Error(ErrorCode::kInvalidConfig, "max_iters must be >= 1");
  Selection sel;
  sel.method = "kmeans";
  if (budget == 0) return sel;

  const TokenMatrix unit = normalize_rows(tokens);
  const std::size_t d = unit.dim();
  const std::size_t k = budget;

  std::vector<double> self_norm(n);
  for (std::size_t i = 0; i < n; ++i) self_norm[i] = dot(unit.row(i), unit.row(i));

  TokenMatrix centroids(k, d);
  auto set_centroid = [&](std::size_t c, std::size_t token) {
    std::copy_n(unit.row(token).begin(), d, centroids.row(c).begin());
  };

  // k-means++ seeding.
  std::vector<char> seeded(n, 0);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::size_t first = static_cast<std::size_t>(rng.below(n));
  set_centroid(0, first);
  seeded[first] = 1;
  for (std::size_t c = 1; c < k; ++c) {
    const auto prev = centroids.row(c - 1);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(unit.row(i), prev));
      if (!seeded[i]) total += nearest[i];
    }
    std::size_t chosen = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (seeded[i]) continue;
        cumulative += nearest[i];
        if (nearest[i] > 0.0 && cumulative > target) {
          chosen = i;
          break;
        }
      }
    }
    if (chosen == n) {
      // Every remaining token coincides with a center (or rounding ran past the
      // end): take the last positive-weight token, else the lowest unseeded one.
      for (std::size_t i = n; i-- > 0;) {
        if (!seeded[i] && nearest[i] > 0.0) {
          chosen = i;
          break;
        }
      }
      if (chosen == n) {
        chosen = static_cast<std::size_t>(std::find(seeded.begin(), seeded.end(), 0) -
                                          seeded.begin());
      }
    }
    set_centroid(c, chosen);
    seeded[chosen] = 1;
  }

  std::vector<std::size_t> assignment(n, k);
  std::vector<double> assigned_dist(n, 0.0);
  std::vector<double> centroid_norm(k);
  std::vector<double> sums(k * d);
  std::vector<std::size_t> counts(k);

  auto assign = [&] {
    for (std::size_t c = 0; c < k; ++c) centroid_norm[c] = dot(centroids.row(c), centroids.row(c));
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = unit.row(i);
      std::size_t best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dist = self_norm[i] + centroid_norm[c] - 2.0 * dot(x, centroids.row(c));
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
      if (assignment[i] != best) changed = true;
      assignment[i] = best;
      assigned_dist[i] = std::max(0.0, best_dist);
    }
    return changed;
  };

  auto cluster_means = [&] {
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = unit.row(i);
      double* s = sums.data() + assignment[i] * d;
      for (std::size_t j = 0; j < d; ++j) s[j] += x[j];
      ++counts[assignment[i]];
    }
  };

  // Token farthest from its nearest centroid outside `taken`; ties to the
  // lowest index.
  auto farthest_free = [&](const std::vector<char>& taken) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      if (best == n || assigned_dist[i] > assigned_dist[best]) best = i;
    }
    return best;
  };

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    const bool changed = assign();
    ++sel.iterations;
    if (!changed && iter > 0) break;
    if (iter + 1 == max_iters) break;
    cluster_means();
    std::vector<char> reseeded(n, 0);
    for (std::size_t c = 0; c < k; ++c) {
      auto centroid = centroids.row(c);
      if (counts[c] == 0) {
        const std::size_t token = farthest_free(reseeded);
        reseeded[token] = 1;
        set_centroid(c, token);
        continue;
      }
      const double inv = 1.0 / static_cast<double>(counts[c]);
      for (std::size_t j = 0; j < d; ++j) {
        centroid[j] = static_cast<float>(sums[c * d + j] * inv);
      }
    }
  }

  // Medoid snapping on the final assignment.
  cluster_means();
  std::vector<std::size_t> medoid(k, n);
  std::vector<double> medoid_dist(k, std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    const double inv = 1.0 / static_cast<double>(counts[c]);
    for (std::size_t j = 0; j < d; ++j) sums[c * d + j] *= inv;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = assignment[i];
    const auto x = unit.row(i);
    const double* mean = sums.data() + c * d;
    double dist = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = static_cast<double>(x[j]) - mean[j];
      dist += diff * diff;
    }
    if (dist < medoid_dist[c]) {
      medoid_dist[c] = dist;
      medoid[c] = i;
    }
  }

  std::vector<char> taken(n, 0);
  for (std::size_t c = 0; c < k; ++c) {
    if (medoid[c] == n) continue;
    sel.picks.push_back(medoid[c]);
    taken[medoid[c]] = 1;
  }
  while (sel.picks.size() < k) {
    const std::size_t token = farthest_free(taken);
    taken[token] = 1;
    sel.picks.push_back(token);
  }
  sort_picks(sel);
  return sel;
}

Selection farthest_point_select(const TokenMatrix& tokens, std::size_t budget) {
  const std::size_t n = tokens.rows();
  check_budget(n, budget);
  Selection sel;
  sel.method = "fps";
  if (budget == 0) return sel;

  const TokenMatrix unit = normalize_rows(tokens);
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  std::vector<char> taken(n, 0);
  std::size_t pick = 0;
  double score = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < budget; ++t) {
    taken[pick] = 1;
    sel.picks.push_back(pick);
    sel.scores.push_back(score);
    if (t + 1 == budget) break;

    const auto p = unit.row(pick);
    std::size_t next = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double dist =
          1.0 - static_cast<double>(unit_similarity(unit.row(i), p, SimilarityKind::kRawCosine,
                                                    false));
      min_dist[i] = std::min(min_dist[i], dist);
      if (next == n || min_dist[i] > min_dist[next]) next = i;
    }
    pick = next;
    score = min_dist[next];
  }
  sort_picks(sel);
  return sel;
}

}  // namespace floc
