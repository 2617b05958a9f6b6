#include "floc/synth.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <numeric>
#include <string>

#include "floc/baselines.hpp"
#include "floc/error.hpp"

namespace floc {

namespace {

using Vec = std::vector<double>;

Vec gaussian(Rng& rng, std::size_t d) {
  Vec v(d);
  for (auto& x : v) x = rng.normal();
  return v;
}

double norm(const Vec& v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return std::sqrt(s);
}

void scale_to_unit(Vec& v) {
  const double len = norm(v);
  if (len > 0.0) {
    for (auto& x : v) x /= len;
  } else {
    v.assign(v.size(), 0.0);
    v[0] = 1.0;
  }
}

Vec random_unit(Rng& rng, std::size_t d) {
  Vec v = gaussian(rng, d);
  scale_to_unit(v);
  return v;
}

// center + scale * g / sqrt(d), normalized.
Vec perturb(const Vec& center, double scale, Rng& rng) {
  const double step = scale / std::sqrt(static_cast<double>(center.size()));
  Vec v(center);
  for (auto& x : v) x += step * rng.normal();
  scale_to_unit(v);
  return v;
}

void store(TokenMatrix& out, std::size_t i, const Vec& v) {
  auto row = out.row(i);
  for (std::size_t k = 0; k < v.size(); ++k) row[k] = static_cast<float>(v[k]);
}

void invalid(const std::string& what) { throw Error(ErrorCode::kInvalidSpec, what); }

void validate(const InstanceSpec& spec) {
  if (spec.d == 0) invalid("dimension d must be >= 1");
  if (!(spec.spread >= 0.0) || !std::isfinite(spec.spread)) invalid("spread must be >= 0");
  switch (spec.kind) {
    case InstanceKind::kGaussianMixture:
      if (spec.clusters == 0) invalid("gaussian-mixture needs at least one cluster");
      break;
    case InstanceKind::kRareCluster:
      if (spec.d < 2) invalid("rare-cluster needs d >= 2");
      if (!(spec.rare_fraction >= 0.0 && spec.rare_fraction < 1.0)) {
        invalid("rare_fraction must be in [0, 1)");
      }
      if (!(spec.separation_deg > 0.0 && spec.rare_margin_deg >= 0.0 &&
            spec.separation_deg + spec.rare_margin_deg < 180.0)) {
        invalid("need 0 < separation_deg and separation_deg + rare_margin_deg < 180");
      }
      break;
    case InstanceKind::kTemporalDrift:
      if (spec.tokens_per_frame == 0) invalid("tokens_per_frame must be >= 1");
      if (spec.n % spec.tokens_per_frame != 0) {
        invalid("n = " + std::to_string(spec.n) + " is not a multiple of tokens_per_frame = " +
                std::to_string(spec.tokens_per_frame));
      }
      if (!(spec.drift >= 0.0) || !(spec.jitter >= 0.0)) invalid("drift and jitter must be >= 0");
      break;
    case InstanceKind::kIdentical:
    case InstanceKind::kUniformSphere:
      break;
  }
}

}  // namespace

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kGaussianMixture: return "gaussian-mixture";
    case InstanceKind::kRareCluster: return "rare-cluster";
    case InstanceKind::kTemporalDrift: return "temporal-drift";
    case InstanceKind::kIdentical: return "identical";
    case InstanceKind::kUniformSphere: return "uniform-sphere";
  }
  return "unknown";
}

InstanceKind parse_instance_kind(std::string_view name) {
  for (const InstanceKind k :
       {InstanceKind::kGaussianMixture, InstanceKind::kRareCluster, InstanceKind::kTemporalDrift,
        InstanceKind::kIdentical, InstanceKind::kUniformSphere}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown instance kind '" + std::string(name) + "'");
}

LabeledInstance generate_labeled(const InstanceSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n;
  const std::size_t d = spec.d;
  Rng rng(spec.seed);
  LabeledInstance out{TokenMatrix(n, d), std::vector<std::size_t>(n, 0), TokenMatrix(0, d)};
  auto keep_centers = [&](const std::vector<Vec>& dirs) {
    out.centers = TokenMatrix(dirs.size(), d);
    for (std::size_t c = 0; c < dirs.size(); ++c) store(out.centers, c, dirs[c]);
  };

  switch (spec.kind) {
    case InstanceKind::kGaussianMixture: {
      std::vector<Vec> centers;
      for (std::size_t c = 0; c < spec.clusters; ++c) centers.push_back(random_unit(rng, d));
      keep_centers(centers);
      for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(rng.below(spec.clusters));
        out.labels[i] = c;
        store(out.tokens, i, perturb(centers[c], spec.spread, rng));
      }
      break;
    }
    case InstanceKind::kRareCluster: {
      const Vec dense = random_unit(rng, d);
      // Unit direction orthogonal to the dense center.
      Vec ortho = gaussian(rng, d);
      double along = 0.0;
      for (std::size_t k = 0; k < d; ++k) along += ortho[k] * dense[k];
      for (std::size_t k = 0; k < d; ++k) ortho[k] -= along * dense[k];
      scale_to_unit(ortho);
      const double theta = (spec.separation_deg + spec.rare_margin_deg) * std::numbers::pi / 180.0;
      Vec rare(d);
      for (std::size_t k = 0; k < d; ++k) {
        rare[k] = std::cos(theta) * dense[k] + std::sin(theta) * ortho[k];
      }
      keep_centers({dense, rare});
      const auto dense_stored = out.centers.row(0);

      const auto rare_count = static_cast<std::size_t>(std::floor(spec.rare_fraction *
                                                                  static_cast<double>(n)));
      std::vector<std::size_t> positions(n);
      std::iota(positions.begin(), positions.end(), std::size_t{0});
      for (std::size_t i = 0; i < rare_count; ++i) {
        std::swap(positions[i], positions[i + static_cast<std::size_t>(rng.below(n - i))]);
      }
      for (std::size_t i = 0; i < rare_count; ++i) out.labels[positions[i]] = 1;

      const double limit = std::cos(spec.separation_deg * std::numbers::pi / 180.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (out.labels[i] == 0) {
          store(out.tokens, i, perturb(dense, spec.spread, rng));
          continue;
        }
        // Rejection keeps every rare row strictly beyond the separation angle,
        // measured between the stored float rows.
        for (int attempt = 0;; ++attempt) {
          if (attempt == 10000) invalid("spread too large to keep rare rows separated");
          store(out.tokens, i, perturb(rare, spec.spread, rng));
          if (cosine_similarity(out.tokens.row(i), dense_stored) < limit) break;
        }
      }
      break;
    }
    case InstanceKind::kTemporalDrift: {
      const std::size_t p = spec.tokens_per_frame;
      std::vector<Vec> patches;
      for (std::size_t j = 0; j < p; ++j) patches.push_back(random_unit(rng, d));
      keep_centers(patches);
      for (std::size_t frame = 0; frame * p < n; ++frame) {
        for (std::size_t j = 0; j < p; ++j) {
          const std::size_t i = frame * p + j;
          out.labels[i] = j;
          store(out.tokens, i, perturb(patches[j], spec.jitter, rng));
          patches[j] = perturb(patches[j], spec.drift, rng);
        }
      }
      break;
    }
    case InstanceKind::kIdentical: {
      const Vec v = random_unit(rng, d);
      for (std::size_t i = 0; i < n; ++i) store(out.tokens, i, v);
      break;
    }
    case InstanceKind::kUniformSphere:
      for (std::size_t i = 0; i < n; ++i) store(out.tokens, i, random_unit(rng, d));
      break;
  }
  return out;
}

TokenMatrix generate(const InstanceSpec& spec) { return generate_labeled(spec).tokens; }

std::uint64_t checksum(const TokenMatrix& tokens) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_byte = [&](std::uint8_t b) {
    h ^= b;
    h *= 0x100000001b3ULL;
  };
  auto mix_u64 = [&](std::uint64_t v) {
    for (int k = 0; k < 8; ++k) mix_byte(static_cast<std::uint8_t>(v >> (8 * k)));
  };
  mix_u64(tokens.rows());
  mix_u64(tokens.dim());
  for (const float x : tokens.data()) {
    std::uint32_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    for (int k = 0; k < 4; ++k) mix_byte(static_cast<std::uint8_t>(bits >> (8 * k)));
  }
  return h;
}

}  // namespace floc
