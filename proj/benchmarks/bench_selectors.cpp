#include <benchmark/benchmark.h>

#include "floc/baselines.hpp"
#include "floc/embedding.hpp"
#include "floc/greedy.hpp"
#include "floc/pipeline.hpp"
#include "floc/synth.hpp"

namespace {

floc::TokenMatrix mixture(std::size_t n, std::size_t d) {
  floc::InstanceSpec spec;
  spec.n = n;
  spec.d = d;
  spec.clusters = 32;
  spec.seed = 1;
  return floc::generate(spec);
}

void BM_SimilarityMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto unit = floc::normalize_rows(mixture(n, 128));
  for (auto _ : state) {
    auto sims = floc::similarity_matrix_from_unit(unit, floc::SimilarityKind::kShifted, 1);
    benchmark::DoNotOptimize(sims.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n + 1) / 2));
}
BENCHMARK(BM_SimilarityMatrix)->Arg(512)->Arg(2048)->Arg(4096)->Unit(benchmark::kMillisecond);

template <bool Lazy>
void BM_Greedy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t k = n / 8;
  const auto sims = floc::similarity_matrix(mixture(n, 64), floc::SimilarityKind::kShifted);
  std::uint64_t evaluations = 0;
  for (auto _ : state) {
    const auto sel = Lazy ? floc::lazy_greedy(sims, k) : floc::naive_greedy(sims, k);
    evaluations = sel.evaluations;
    benchmark::DoNotOptimize(sel.objective);
  }
  state.counters["evaluations"] = static_cast<double>(evaluations);
}
BENCHMARK(BM_Greedy<true>)->Name("BM_LazyGreedy")->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Greedy<false>)->Name("BM_NaiveGreedy")->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_KMeansMedoid(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto tokens = mixture(n, 128);
  for (auto _ : state) {
    floc::Rng rng(7);
    const auto sel = floc::kmeans_medoid_select(tokens, n / 8, rng);
    benchmark::DoNotOptimize(sel.picks.data());
  }
}
BENCHMARK(BM_KMeansMedoid)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_PipelineBlocks(benchmark::State& state) {
  floc::InstanceSpec spec;
  spec.kind = floc::InstanceKind::kTemporalDrift;
  spec.n = 8192;
  spec.d = 64;
  spec.tokens_per_frame = 32;
  const auto tokens = floc::generate(spec);
  floc::CompressionConfig config;
  config.tokens_per_frame = 32;
  config.block_frames = static_cast<std::size_t>(state.range(0));
  config.threads = 1;
  for (auto _ : state) {
    const auto sel = floc::select(tokens, config);
    benchmark::DoNotOptimize(sel.objective);
  }
}
BENCHMARK(BM_PipelineBlocks)->Arg(2)->Arg(8)->Arg(32)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
