// floc: generate instances, select tokens, evaluate subsets, benchmark
// selectors and check greedy against the exhaustive optimum.
//
// Exit codes: 0 success, 2 unreadable or malformed input data, 3 invalid
// configuration, 4 instance too large for the oracle.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "floc/bench.hpp"
#include "floc/error.hpp"
#include "floc/facility_location.hpp"
#include "floc/io.hpp"
#include "floc/oracle.hpp"
#include "floc/parallel.hpp"
#include "floc/pipeline.hpp"
#include "floc/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 2;
constexpr int kExitConfig = 3;
constexpr int kExitTooLarge = 4;

int exit_code_for(floc::ErrorCode code) {
  switch (code) {
    case floc::ErrorCode::kMalformedFile:
    case floc::ErrorCode::kIoError:
    case floc::ErrorCode::kZeroNormRow:
    case floc::ErrorCode::kNonFiniteValue:
      return kExitData;
    case floc::ErrorCode::kInstanceTooLarge:
      return kExitTooLarge;
    default:
      return kExitConfig;
  }
}

// Generator flags shared by gen, bench and oracle.
struct SpecFlags {
  std::string kind = "gaussian-mixture";
  floc::InstanceSpec spec;

  void add(CLI::App& app) {
    app.add_option("--kind", kind, "Instance kind")
        ->check(CLI::IsMember({"gaussian-mixture", "rare-cluster", "temporal-drift", "identical",
                               "uniform-sphere"}));
    app.add_option("--n", spec.n, "Number of tokens");
    app.add_option("--d", spec.d, "Embedding dimension");
    app.add_option("--instance-seed", spec.seed, "Generator seed");
    app.add_option("--clusters", spec.clusters, "Mixture components");
    app.add_option("--spread", spec.spread, "Noise scale around a center");
    app.add_option("--rare-fraction", spec.rare_fraction, "Share of rare tokens");
    app.add_option("--separation-deg", spec.separation_deg, "Minimum rare angle (degrees)");
    app.add_option("--rare-margin-deg", spec.rare_margin_deg, "Rare center beyond the separation");
    app.add_option("--drift", spec.drift, "Per-frame patch drift");
    app.add_option("--jitter", spec.jitter, "Per-token noise");
  }

  floc::InstanceSpec resolve(std::size_t tokens_per_frame) const {
    floc::InstanceSpec s = spec;
    s.kind = floc::parse_instance_kind(kind);
    s.tokens_per_frame = tokens_per_frame;
    return s;
  }
};

// Budget/selection flags shared by select, metrics and bench.
struct SelectFlags {
  std::string method = "floc";
  std::string ratio;
  std::optional<std::size_t> budget;
  std::optional<std::size_t> block_frames;
  std::size_t tokens_per_frame = 1;
  std::uint64_t seed = 0;
  std::string engine = "lazy";
  std::size_t max_iters = floc::kDefaultKMeansIters;
  bool allow_zero_rows = false;
  unsigned threads = 0;

  void add(CLI::App& app, bool with_method, bool with_budget) {
    if (with_method) app.add_option("--method", method, "floc|random|uniform|kmeans|fps");
    if (with_budget) {
      auto* r = app.add_option("--ratio", ratio, "Budget as a ratio a/b of n");
      auto* b = app.add_option("--budget", budget, "Budget as a token count");
      r->excludes(b);
      b->excludes(r);
      app.add_option("--block-frames", block_frames, "Frames per block (default: whole stream)");
    }
    app.add_option("--tokens-per-frame", tokens_per_frame, "Tokens per frame (p)");
    app.add_option("--seed", seed, "Seed for randomized selectors");
    app.add_option("--engine", engine, "Greedy engine: lazy|naive");
    app.add_option("--max-iters", max_iters, "k-means iteration cap");
    app.add_flag("--allow-zero-rows", allow_zero_rows, "Substitute e_1 for zero-norm rows");
    app.add_option("--threads", threads, "Worker threads (0: default, capped by FLOC_THREADS)");
  }

  floc::CompressionConfig config() const {
    floc::CompressionConfig c;
    if (budget) {
      c.budget = floc::Budget::absolute(*budget);
    } else if (!ratio.empty()) {
      c.budget = floc::Budget::parse_ratio(ratio);
    }
    c.block_frames = block_frames;
    c.tokens_per_frame = tokens_per_frame;
    c.method = floc::parse_method(method);
    c.seed = seed;
    c.engine = floc::parse_engine(engine);
    c.kmeans_max_iters = max_iters;
    c.zero_rows = allow_zero_rows ? floc::ZeroRowPolicy::kSubstituteUnit : floc::ZeroRowPolicy::kReject;
    c.threads = threads;
    return c;
  }
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    floc::write_text_file(path, text);
  }
}

std::string destination(const std::string& path) {
  return path.empty() || path == "-" ? "stdout" : path;
}

int run_gen(SpecFlags& flags, std::size_t tokens_per_frame, const std::string& output,
            const std::string& labels_path) {
  if (output.empty()) throw floc::Error(floc::ErrorCode::kInvalidConfig, "--output is required");
  const auto instance = floc::generate_labeled(flags.resolve(tokens_per_frame));
  floc::write_embedding_file(output, instance.tokens);
  if (!labels_path.empty()) {
    std::string text;
    for (const auto l : instance.labels) text += std::to_string(l) + "\n";
    floc::write_text_file(labels_path, text);
  }
  std::printf("gen: kind=%s n=%zu d=%zu checksum=%016llx -> %s\n", flags.kind.c_str(),
              instance.tokens.rows(), instance.tokens.dim(),
              static_cast<unsigned long long>(floc::checksum(instance.tokens)), output.c_str());
  return kExitOk;
}

int run_select(const std::string& input, const SelectFlags& flags, const std::string& output,
               bool record_timing) {
  if (flags.ratio.empty() && !flags.budget) {
    throw floc::Error(floc::ErrorCode::kInvalidConfig, "one of --ratio or --budget is required");
  }
  const auto config = flags.config();
  const auto tokens = floc::read_embedding_file(input);
  const auto selection = floc::select(tokens, config);
  const auto report = floc::make_report(tokens, selection, config, floc::resolve_threads(config.threads));
  const auto record = floc::make_record(tokens, selection, report, config, record_timing);
  emit(output, floc::to_json(record));
  std::fprintf(stderr,
               "select: method=%s%s%s n=%zu K=%zu blocks=%zu objective=%.6f evaluations=%llu "
               "wall_time_s=%.6f -> %s\n",
               selection.method.c_str(), selection.engine.empty() ? "" : " engine=",
               selection.engine.c_str(), tokens.rows(), selection.sorted_indices.size(),
               selection.blocks.size(), selection.objective,
               static_cast<unsigned long long>(selection.evaluations), selection.wall_time_s,
               destination(output).c_str());
  return kExitOk;
}

int run_metrics(const std::string& input, const std::string& indices_path,
                const std::string& methods, const SelectFlags& flags, bool z_normalize,
                const std::string& output) {
  const auto tokens = floc::read_embedding_file(input);
  auto config = flags.config();
  const unsigned threads = floc::resolve_threads(config.threads);

  std::vector<floc::ResultRecord> records;
  auto add_record = [&](const floc::Selection& selection) {
    if (selection.sorted_indices.empty()) {
      throw floc::Error(floc::ErrorCode::kEmptySubset, "selected subset is empty");
    }
    if (selection.sorted_indices.size() < 2) {
      throw floc::Error(floc::ErrorCode::kSubsetTooSmall,
                        "averaged distance needs at least 2 selected tokens");
    }
    const auto report = floc::make_report(tokens, selection, config, threads);
    records.push_back(floc::make_record(tokens, selection, report, config, false));
  };

  if (!indices_path.empty()) {
    floc::Selection given;
    given.method = "given";
    given.picks = floc::read_indices_file(indices_path);
    given.sorted_indices = given.picks;
    std::sort(given.sorted_indices.begin(), given.sorted_indices.end());
    add_record(given);
  } else {
    if (flags.ratio.empty() && !flags.budget) {
      throw floc::Error(floc::ErrorCode::kInvalidConfig,
                        "metrics needs --indices, or --ratio/--budget to run selectors");
    }
    const auto names = methods.empty() ? std::vector<std::string>{flags.method} : split_list(methods);
    for (const auto& name : names) {
      config.method = floc::parse_method(name);
      add_record(floc::select(tokens, config));
    }
  }

  if (z_normalize) {
    std::vector<double> cov;
    std::vector<double> dist;
    for (const auto& r : records) {
      cov.push_back(r.avg_sum_coverage);
      dist.push_back(*r.avg_distance);
    }
    const auto zc = floc::z_normalize(cov);
    const auto zd = floc::z_normalize(dist);
    for (std::size_t i = 0; i < records.size(); ++i) {
      records[i].z_avg_sum_coverage = zc.values[i];
      records[i].z_avg_distance = zd.values[i];
    }
  }

  emit(output, records.size() == 1 ? floc::to_json(records.front()) : floc::to_json(records));
  for (const auto& r : records) {
    std::fprintf(stderr, "metrics: method=%s K=%zu avg_sum_coverage=%.6f avg_distance=%.6f\n",
                 r.method.c_str(), r.sorted_indices.size(), r.avg_sum_coverage, *r.avg_distance);
  }
  return kExitOk;
}

int run_bench(const std::string& input, SpecFlags& spec, const SelectFlags& flags,
              const std::string& methods, const std::string& block_frames,
              const std::string& ratios, std::size_t reps, const std::string& output) {
  const auto tokens = input.empty() ? floc::generate(spec.resolve(flags.tokens_per_frame))
                                    : floc::read_embedding_file(input);
  floc::BenchOptions options;
  options.methods.clear();
  for (const auto& m : split_list(methods)) options.methods.push_back(floc::parse_method(m));
  options.block_frames.clear();
  for (const auto& t : split_list(block_frames)) {
    if (t == "whole") {
      options.block_frames.push_back(std::nullopt);
    } else {
      std::size_t pos = 0;
      std::size_t value = 0;
      try {
        value = std::stoull(t, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != t.size()) {
        throw floc::Error(floc::ErrorCode::kInvalidConfig, "bad block length '" + t + "'");
      }
      options.block_frames.push_back(value);
    }
  }
  options.budgets.clear();
  for (const auto& r : split_list(ratios)) options.budgets.push_back(floc::Budget::parse_ratio(r));
  if (options.methods.empty() || options.block_frames.empty() || options.budgets.empty()) {
    throw floc::Error(floc::ErrorCode::kInvalidConfig,
                      "--methods, --block-frames and --ratios must be non-empty");
  }
  options.tokens_per_frame = flags.tokens_per_frame;
  options.reps = reps;
  options.seed = flags.seed;
  options.engine = floc::parse_engine(flags.engine);
  options.kmeans_max_iters = flags.max_iters;
  options.zero_rows =
      flags.allow_zero_rows ? floc::ZeroRowPolicy::kSubstituteUnit : floc::ZeroRowPolicy::kReject;

  const auto rows = floc::run_bench(tokens, options);
  std::ostringstream csv;
  floc::write_bench_csv(csv, rows);
  emit(output, csv.str());
  std::fprintf(stderr, "bench: n=%zu d=%zu rows=%zu reps=%zu -> %s\n", tokens.rows(), tokens.dim(),
               rows.size(), reps, destination(output).c_str());
  return kExitOk;
}

floc::OracleRecord oracle_on(const floc::TokenMatrix& tokens, std::size_t budget,
                             std::uint64_t limit, bool allow_zero_rows) {
  const auto sims = floc::similarity_matrix(
      tokens, floc::SimilarityKind::kShifted,
      allow_zero_rows ? floc::ZeroRowPolicy::kSubstituteUnit : floc::ZeroRowPolicy::kReject);
  floc::OracleRecord rec;
  rec.n = tokens.rows();
  rec.budget = budget;
  rec.optimum = floc::exhaustive_optimum(sims, budget, limit);
  const auto greedy = floc::lazy_greedy(sims, budget);
  rec.greedy_picks = greedy.picks;
  rec.greedy_value = floc::objective(sims, greedy.picks);
  rec.ratio = rec.optimum.best_value > 0.0 ? rec.greedy_value / rec.optimum.best_value : 1.0;
  return rec;
}

int run_oracle(const std::string& input, SpecFlags& spec, std::optional<std::size_t> budget,
               std::uint64_t limit, std::size_t sweep, std::size_t n_max, std::size_t k_max,
               bool allow_zero_rows, const std::string& output) {
  if (sweep > 0) {
    if (n_max < 1 || k_max < 1) {
      throw floc::Error(floc::ErrorCode::kInvalidConfig, "--n-max and --k-max must be >= 1");
    }
    floc::Rng rng(spec.spec.seed);
    double min_ratio = 1.0;
    double sum = 0.0;
    for (std::size_t s = 0; s < sweep; ++s) {
      floc::InstanceSpec inst;
      inst.kind = s % 2 == 0 ? floc::InstanceKind::kUniformSphere
                             : floc::InstanceKind::kGaussianMixture;
      inst.n = 1 + static_cast<std::size_t>(rng.below(n_max));
      inst.d = 2 + static_cast<std::size_t>(rng.below(15));
      inst.clusters = 3;
      inst.seed = rng.next_u64();
      const std::size_t k = 1 + static_cast<std::size_t>(rng.below(std::min(k_max, inst.n)));
      const auto rec = oracle_on(floc::generate(inst), k, limit, false);
      min_ratio = std::min(min_ratio, rec.ratio);
      sum += rec.ratio;
    }
    std::string text = "{\n  \"instances\": " + std::to_string(sweep) +
                       ",\n  \"min_ratio\": " + floc::format_double(min_ratio) +
                       ",\n  \"mean_ratio\": " + floc::format_double(sum / static_cast<double>(sweep)) +
                       ",\n  \"bound\": " + floc::format_double(1.0 - 1.0 / 2.718281828459045) +
                       "\n}\n";
    emit(output, text);
    std::fprintf(stderr, "oracle: sweep=%zu min_ratio=%.6f mean_ratio=%.6f\n", sweep, min_ratio,
                 sum / static_cast<double>(sweep));
    return kExitOk;
  }
  if (!budget) throw floc::Error(floc::ErrorCode::kInvalidConfig, "--budget is required");
  const auto tokens = input.empty() ? floc::generate(spec.resolve(1)) : floc::read_embedding_file(input);
  const auto rec = oracle_on(tokens, *budget, limit, allow_zero_rows);
  emit(output, floc::to_json(rec));
  std::fprintf(stderr, "oracle: n=%zu K=%zu optimum=%.6f greedy=%.6f ratio=%.6f\n", rec.n,
               rec.budget, rec.optimum.best_value, rec.greedy_value, rec.ratio);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Facility-location token selection"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Write a synthetic embedding file");
  SpecFlags gen_spec;
  gen_spec.add(*gen);
  std::size_t gen_p = 1;
  std::string gen_out;
  std::string gen_labels;
  gen->add_option("--seed", gen_spec.spec.seed, "Generator seed");
  gen->add_option("--tokens-per-frame", gen_p, "Tokens per frame (temporal-drift)");
  gen->add_option("--output", gen_out, "Embedding file to write")->required();
  gen->add_option("--labels", gen_labels, "Also write one cluster label per line");

  auto* sel = app.add_subcommand("select", "Select a token subset");
  SelectFlags sel_flags;
  sel_flags.add(*sel, true, true);
  std::string sel_in;
  std::string sel_out;
  bool record_timing = false;
  sel->add_option("--input", sel_in, "Embedding file")->required();
  sel->add_option("--output", sel_out, "Result record (default: stdout)");
  sel->add_flag("--record-timing", record_timing, "Include wall times in the record");

  auto* met = app.add_subcommand("metrics", "Coverage and diversity of a subset");
  SelectFlags met_flags;
  met_flags.add(*met, true, true);
  std::string met_in;
  std::string met_indices;
  std::string met_methods;
  std::string met_out;
  bool z = false;
  met->add_option("--input", met_in, "Embedding file")->required();
  met->add_option("--indices", met_indices, "Result record or whitespace-separated indices");
  met->add_option("--methods", met_methods, "Comma-separated methods to run and compare");
  met->add_flag("--z-normalize", z, "z-normalize each metric across methods");
  met->add_option("--output", met_out, "Result record(s) (default: stdout)");

  auto* bench = app.add_subcommand("bench", "Time selectors over a grid");
  SpecFlags bench_spec;
  bench_spec.add(*bench);
  SelectFlags bench_flags;
  bench_flags.add(*bench, false, false);
  std::string bench_in;
  std::string bench_methods = "floc,kmeans";
  std::string bench_frames = "2,8,32";
  std::string bench_ratios = "1/8,1/16,1/32";
  std::size_t reps = 1;
  std::string bench_out;
  bench->add_option("--input", bench_in, "Embedding file (default: generate from --kind etc.)");
  bench->add_option("--methods", bench_methods, "Comma-separated methods");
  bench->add_option("--block-frames", bench_frames, "Comma-separated T values or 'whole'");
  bench->add_option("--ratios", bench_ratios, "Comma-separated ratios a/b");
  bench->add_option("--reps", reps, "Repetitions per cell");
  bench->add_option("--output", bench_out, "CSV file (default: stdout)");

  auto* orc = app.add_subcommand("oracle", "Exhaustive optimum versus greedy");
  SpecFlags orc_spec;
  orc_spec.add(*orc);
  std::string orc_in;
  std::optional<std::size_t> orc_budget;
  std::uint64_t limit = floc::kOracleSubsetLimit;
  std::size_t sweep = 0;
  std::size_t n_max = 14;
  std::size_t k_max = 4;
  bool orc_zero = false;
  std::string orc_out;
  orc->add_option("--input", orc_in, "Embedding file (default: generate from --kind etc.)");
  orc->add_option("--budget", orc_budget, "Subset size K");
  orc->add_option("--seed", orc_spec.spec.seed, "Generator / sweep seed");
  orc->add_option("--limit", limit, "Maximum subsets to enumerate");
  orc->add_option("--sweep", sweep, "Run this many random instances instead");
  orc->add_option("--n-max", n_max, "Sweep: largest n");
  orc->add_option("--k-max", k_max, "Sweep: largest K");
  orc->add_flag("--allow-zero-rows", orc_zero, "Substitute e_1 for zero-norm rows");
  orc->add_option("--output", orc_out, "Result (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) return run_gen(gen_spec, gen_p, gen_out, gen_labels);
    if (sel->parsed()) return run_select(sel_in, sel_flags, sel_out, record_timing);
    if (met->parsed()) {
      return run_metrics(met_in, met_indices, met_methods, met_flags, z, met_out);
    }
    if (bench->parsed()) {
      return run_bench(bench_in, bench_spec, bench_flags, bench_methods, bench_frames,
                       bench_ratios, reps, bench_out);
    }
    if (orc->parsed()) {
      return run_oracle(orc_in, orc_spec, orc_budget, limit, sweep, n_max, k_max, orc_zero,
                        orc_out);
    }
  } catch (const floc::Error& e) {
    std::fprintf(stderr, "floc: error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::bad_alloc&) {
    std::fprintf(stderr, "floc: error: out of memory\n");
    return kExitConfig;
  }
  return kExitConfig;
}
