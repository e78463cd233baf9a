#pragma once

#include <algorithm>
#include <numeric>
#include <ostream>
#include <vector>

#include "cosafe/planner.hpp"
#include "cosafe/report.hpp"

namespace cosafe {

/// One planning run inside a benchmark sweep.
struct BenchRow {
  std::uint64_t seed = 0;
  bool knowledge = true;
  PlanOutcome outcome = PlanOutcome::Timeout;
  double time_s = 0.0;
  size_t tree_size = 0;
  std::string psi;
  bool verified = false;  // solution trace accepted by the formula automaton
};

struct BenchSummary {
  int runs = 0;
  int solved = 0;
  double mean_time_s = 0.0;    // timeouts counted at their full budget
  double median_time_s = 0.0;

  static BenchSummary of(const std::vector<BenchRow>& rows, bool knowledge) {
    BenchSummary s;
    std::vector<double> times;
    for (const auto& r : rows) {
      if (r.knowledge != knowledge) continue;
      ++s.runs;
      if (r.outcome == PlanOutcome::Solved) ++s.solved;
      times.push_back(r.time_s);
    }
    if (!times.empty()) {
      s.mean_time_s = std::accumulate(times.begin(), times.end(), 0.0) /
                      static_cast<double>(times.size());
      std::sort(times.begin(), times.end());
      s.median_time_s = times[times.size() / 2];
    }
    return s;
  }
};

/// Run the planner over a seed list, with knowledge reasoning on and
/// (optionally) the baseline with kappa frozen at its initial classification
/// and Evaluate skipped.
inline std::vector<BenchRow> run_bench(const Scene& scene, const FormulaPtr& phi,
                                       const std::vector<std::uint64_t>& seeds,
                                       bool with_baseline = true) {
  std::vector<BenchRow> rows;
  for (const bool knowledge : {true, false}) {
    if (!knowledge && !with_baseline) break;
    for (std::uint64_t seed : seeds) {
      PlannerConfig cfg = scene.config;
      cfg.seed = seed;
      HybridPlanner planner(scene, cfg, knowledge);
      const PlanResult r = planner.plan(phi);
      BenchRow row;
      row.seed = seed;
      row.knowledge = knowledge;
      row.outcome = r.outcome;
      row.time_s = r.outcome == PlanOutcome::Timeout ? cfg.t_max_s : r.wall_time_s;
      row.tree_size = r.tree_size;
      if (r.psi) row.psi = to_string(r.psi, scene.props);
      if (r.outcome == PlanOutcome::Solved && r.psi) {
        const Nfa nfa = build_nfa(r.psi, scene.props.size());
        row.verified = nfa_accepts(nfa, r.trajectory.trace);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

inline void print_bench_table(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "seed  knowledge  outcome     time_s   tree   verified  psi\n";
  for (const auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-5llu %-10s %-11s %-8.3f %-6zu %-9s %s\n",
                  static_cast<unsigned long long>(r.seed), r.knowledge ? "on" : "off",
                  to_string(r.outcome), r.time_s, r.tree_size,
                  r.outcome == PlanOutcome::Solved ? (r.verified ? "yes" : "NO") : "-",
                  r.psi.c_str());
    out << buf;
  }
  for (const bool knowledge : {true, false}) {
    const BenchSummary s = BenchSummary::of(rows, knowledge);
    if (s.runs == 0) continue;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "knowledge-%s: %d/%d solved, mean %.3f s, median %.3f s\n",
                  knowledge ? "on " : "off", s.solved, s.runs, s.mean_time_s, s.median_time_s);
    out << buf;
  }
}

}  // namespace cosafe
