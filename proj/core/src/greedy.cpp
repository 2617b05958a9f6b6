#include "floc/greedy.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "floc/error.hpp"
#include "floc/facility_location.hpp"

namespace floc {

namespace {

struct QueueEntry {
  double bound;
  std::size_t token;
  // |S| when `bound` was computed.
  std::ptrdiff_t epoch;
};

// Heap order: larger bound first, then lower index first.
bool lower_priority(const QueueEntry& a, const QueueEntry& b) {
  if (a.bound != b.bound) return a.bound < b.bound;
  return a.token > b.token;
}

template <SimilaritySource Source>
Selection start_selection(Source& sims, std::size_t& budget, const char* engine) {
  if (sims.size() == 0) throw Error(ErrorCode::kEmptyGroundSet, "ground set has no tokens");
  if (sims.kind() != SimilarityKind::kShifted) {
    throw Error(ErrorCode::kInvalidConfig, "greedy engines require shifted similarities");
  }
  Selection sel;
  sel.method = "floc";
  sel.engine = engine;
  if (budget > sims.size()) {
    sel.warnings.push_back("budget " + std::to_string(budget) + " exceeds ground set size " +
                           std::to_string(sims.size()) + "; capped");
    budget = sims.size();
  }
  sel.picks.reserve(budget);
  sel.gains.reserve(budget);
  return sel;
}

template <SimilaritySource Source>
void accept(Selection& sel, CoverageState& state, Source& sims, std::size_t token) {
  sel.gains.push_back(state.add(token, sims.row(token)));
  sel.picks.push_back(token);
}

void finish(Selection& sel, const CoverageState& state) {
  sel.objective = state.objective();
  sel.sorted_indices = sel.picks;
  std::sort(sel.sorted_indices.begin(), sel.sorted_indices.end());
}

template <SimilaritySource Source>
Selection run_naive(Source& sims, std::size_t budget) {
  Selection sel = start_selection(sims, budget, "naive");
  const std::size_t n = sims.size();
  CoverageState state(n, SimilarityKind::kShifted);
  while (sel.picks.size() < budget) {
    std::size_t best_token = n;
    double best_gain = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (state.contains(v)) continue;
      const double g = state.gain(sims.row(v));
      ++sel.evaluations;
      // Ascending scan with strict '>' keeps the lowest index among ties.
      if (best_token == n || g > best_gain) {
        best_token = v;
        best_gain = g;
      }
    }
    accept(sel, state, sims, best_token);
  }
  finish(sel, state);
  return sel;
}

template <SimilaritySource Source>
Selection run_lazy(Source& sims, std::size_t budget, std::vector<QueueEntry> queue) {
  Selection sel = start_selection(sims, budget, "lazy");
  const std::size_t n = sims.size();
  CoverageState state(n, SimilarityKind::kShifted);
  std::make_heap(queue.begin(), queue.end(), lower_priority);

  while (sel.picks.size() < budget) {
    std::pop_heap(queue.begin(), queue.end(), lower_priority);
    QueueEntry top = queue.back();
    queue.pop_back();

    const auto round = static_cast<std::ptrdiff_t>(sel.picks.size());
    if (top.epoch != round) {
      top.bound = state.gain(sims.row(top.token));
      top.epoch = round;
      ++sel.evaluations;
      if (!queue.empty() && lower_priority(top, queue.front())) {
        queue.push_back(top);
        std::push_heap(queue.begin(), queue.end(), lower_priority);
        continue;
      }
    }
    accept(sel, state, sims, top.token);
  }
  finish(sel, state);
  return sel;
}

}  // namespace

Selection naive_greedy(const SimilarityMatrix& sims, std::size_t budget) {
  return run_naive(sims, budget);
}

Selection lazy_greedy(const SimilarityMatrix& sims, std::size_t budget) {
  std::vector<QueueEntry> queue;
  std::uint64_t init_evaluations = 0;
  if (budget > 0 && sims.size() > 0 && sims.kind() == SimilarityKind::kShifted) {
    // Exact f({v}), through the same gain routine the loop uses.
    const CoverageState empty(sims.size(), SimilarityKind::kShifted);
    queue.reserve(sims.size());
    for (std::size_t v = 0; v < sims.size(); ++v) {
      queue.push_back({empty.gain(sims.row(v)), v, 0});
    }
    init_evaluations = sims.size();
  }
  Selection sel = run_lazy(sims, budget, std::move(queue));
  sel.evaluations += init_evaluations;
  return sel;
}

}  // namespace floc
