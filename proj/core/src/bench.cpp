#include "floc/bench.hpp"

#include <algorithm>

#include "floc/error.hpp"
#include "floc/io.hpp"

namespace floc {

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::kInvalidConfig, "median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<BenchRow> run_bench(const TokenMatrix& tokens, const BenchOptions& options) {
  if (options.reps == 0) throw Error(ErrorCode::kInvalidConfig, "reps must be >= 1");
  std::vector<BenchRow> rows;
  for (const Method method : options.methods) {
    for (const auto& frames : options.block_frames) {
      for (const Budget& budget : options.budgets) {
        CompressionConfig config;
        config.budget = budget;
        config.block_frames = frames;
        config.tokens_per_frame = options.tokens_per_frame;
        config.method = method;
        config.seed = options.seed;
        config.engine = options.engine;
        config.kmeans_max_iters = options.kmeans_max_iters;
        config.zero_rows = options.zero_rows;
        config.threads = 1;

        std::vector<double> times;
        Selection first;
        for (std::size_t r = 0; r < options.reps; ++r) {
          Selection s = select(tokens, config);
          times.push_back(s.wall_time_s);
          if (r == 0) first = std::move(s);
        }
        const QualityReport report = make_report(tokens, first, config, 1);

        BenchRow row;
        row.method = std::string(to_string(method));
        row.engine = first.engine;
        row.n = tokens.rows();
        row.d = tokens.dim();
        row.p = options.tokens_per_frame;
        row.block_frames = report.block_frames;
        row.ratio = budget.to_string();
        row.budget = first.sorted_indices.size();
        row.reps = options.reps;
        row.wall_time_median_s = median(times);
        row.wall_time_min_s = *std::min_element(times.begin(), times.end());
        row.wall_time_max_s = *std::max_element(times.begin(), times.end());
        row.evaluations = first.evaluations;
        row.objective_raw = report.objective_raw;
        row.objective_shifted = report.objective_shifted;
        row.avg_sum_coverage = report.avg_sum_coverage;
        row.avg_distance = report.avg_distance;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string_view bench_csv_header() {
  return "method,engine,n,d,p,T,ratio,K,reps,wall_time_median_s,wall_time_min_s,"
         "wall_time_max_s,evaluations,objective_raw,objective_shifted,avg_sum_coverage,"
         "avg_distance";
}

std::string to_csv_line(const BenchRow& row) {
  std::string out;
  auto cell = [&](const std::string& v) {
    if (!out.empty()) out += ',';
    out += v;
  };
  cell(row.method);
  cell(row.engine);
  cell(std::to_string(row.n));
  cell(std::to_string(row.d));
  cell(std::to_string(row.p));
  cell(row.block_frames);
  cell(row.ratio);
  cell(std::to_string(row.budget));
  cell(std::to_string(row.reps));
  cell(format_double(row.wall_time_median_s));
  cell(format_double(row.wall_time_min_s));
  cell(format_double(row.wall_time_max_s));
  cell(std::to_string(row.evaluations));
  cell(format_double(row.objective_raw));
  cell(format_double(row.objective_shifted));
  cell(format_double(row.avg_sum_coverage));
  cell(row.avg_distance ? format_double(*row.avg_distance) : std::string());
  return out;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << bench_csv_header() << '\n';
  for (const auto& row : rows) out << to_csv_line(row) << '\n';
}

}  // namespace floc
