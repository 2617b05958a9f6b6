#pragma once

// Deterministic synthetic ground sets. All randomness comes from floc::Rng
// (SplitMix64 + Box-Muller), so a spec reproduces the same bits everywhere.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "floc/embedding.hpp"

namespace floc {

enum class InstanceKind {
  kGaussianMixture,  // isotropic clusters around random unit centers
  kRareCluster,      // one dense cluster plus a small, well-separated one
  kTemporalDrift,    // frames of near-duplicate patches drifting slowly
  kIdentical,        // n copies of one unit vector
  kUniformSphere,    // i.i.d. uniform directions
};

std::string_view to_string(InstanceKind kind);
InstanceKind parse_instance_kind(std::string_view name);

struct InstanceSpec {
  InstanceKind kind = InstanceKind::kGaussianMixture;
  std::size_t n = 0;
  std::size_t d = 16;
  std::uint64_t seed = 0;

  // Gaussian mixture: cluster count. Row = center + spread * g / sqrt(d).
  std::size_t clusters = 8;
  double spread = 0.5;

  // Rare cluster: floor(rare_fraction * n) rare rows at scattered positions,
  // centered rare_margin_deg beyond separation_deg from the dense center. Every
  // rare row is guaranteed an angle > separation_deg to the dense center.
  double rare_fraction = 0.05;
  double separation_deg = 60.0;
  double rare_margin_deg = 10.0;

  // Temporal drift: n = frames * tokens_per_frame. Each patch position takes a
  // random-walk step of size `drift` per frame; tokens add `jitter` noise.
  std::size_t tokens_per_frame = 1;
  double drift = 0.05;
  double jitter = 0.05;
};

struct LabeledInstance {
  TokenMatrix tokens;
  // Cluster id per row: mixture component; 0 dense / 1 rare; patch position
  // for temporal drift; 0 otherwise.
  std::vector<std::size_t> labels;
  // Generating directions as stored floats: mixture centers; dense then rare
  // center for rare-cluster; initial patch directions for temporal drift.
  TokenMatrix centers;
};

// Throws InvalidSpec for inconsistent parameters.
LabeledInstance generate_labeled(const InstanceSpec& spec);
TokenMatrix generate(const InstanceSpec& spec);

// FNV-1a 64 over n, d and the little-endian payload bytes.
std::uint64_t checksum(const TokenMatrix& tokens);

}  // namespace floc
