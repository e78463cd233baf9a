#pragma once

#include <ostream>
#include <string>

#include "cosafe/formula.hpp"
#include "cosafe/planner.hpp"
#include "cosafe/trace.hpp"

namespace cosafe {

inline const char* to_string(PlanOutcome o) {
  switch (o) {
    case PlanOutcome::Solved: return "solved";
    case PlanOutcome::Infeasible: return "infeasible";
    case PlanOutcome::Timeout: return "timeout";
  }
  return "?";
}

/// Summary of one planning run.
struct RunReport {
  PlanOutcome outcome = PlanOutcome::Timeout;
  std::string psi;  // simplified formula actually planned for
  double wall_time_s = 0.0;
  size_t tree_size = 0;
  DiscreteTrace trace;
  std::uint64_t seed = 0;

  static RunReport from(const PlanResult& r, const PropTable& props, std::uint64_t seed) {
    RunReport rep;
    rep.outcome = r.outcome;
    if (r.psi) rep.psi = to_string(r.psi, props);
    rep.wall_time_s = r.wall_time_s;
    rep.tree_size = r.tree_size;
    rep.trace = r.trajectory.trace;
    rep.seed = seed;
    return rep;
  }
};

inline void print_report(const RunReport& r, const PropTable& props, std::ostream& out) {
  out << "outcome   " << to_string(r.outcome) << "\n";
  out << "psi       " << (r.psi.empty() ? "-" : r.psi) << "\n";
  out << "time_s    " << r.wall_time_s << "\n";
  out << "tree_size " << r.tree_size << "\n";
  out << "seed      " << r.seed << "\n";
  out << "trace     ";
  if (r.trace.empty()) {
    out << "-";
  } else {
    for (size_t i = 0; i < r.trace.size(); ++i)
      out << (i ? " " : "") << props.name(r.trace[static_cast<size_t>(i)]);
  }
  out << "\n";
}

}  // namespace cosafe
