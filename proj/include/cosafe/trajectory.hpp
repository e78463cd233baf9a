#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cosafe/config.hpp"
#include "cosafe/physics.hpp"
#include "cosafe/trace.hpp"
#include "cosafe/world.hpp"

namespace cosafe {

inline constexpr const char* kTrajectoryHeader = "cosafe-tamp/1 trajectory";

/// One control batch: force u applied for `steps` propagation steps of dt.
struct ControlStep {
  Control u;
  double dt = 0.0;
  int steps = 1;
};

/// A solution path. The file format stores only (seed, config, controls,
/// final robot position); states are recomputed on check, which makes the
/// files tiny and tamper-evident via replay.
struct Trajectory {
  std::vector<ControlStep> controls;
  std::vector<EnvState> states;  // realized states, one per step, incl. initial
  DiscreteTrace trace;
  std::uint64_t seed = 0;
  double dt = 0.0;
  int n_substeps = 10;

  bool empty() const { return controls.empty(); }
};

struct TrajectoryError : std::runtime_error {
  explicit TrajectoryError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void save_trajectory(const Trajectory& t, std::ostream& out) {
  out << kTrajectoryHeader << "\n";
  out << "seed " << t.seed << "\n";
  out << "dt_s " << detail::fmt_g(t.dt) << "\n";
  out << "n_substeps " << t.n_substeps << "\n";
  for (const auto& c : t.controls)
    out << "control " << detail::fmt_g(c.u.force.x) << ' ' << detail::fmt_g(c.u.force.y) << ' '
        << c.steps << "\n";
  if (!t.states.empty()) {
    const auto& fin = t.states.back().robot.p;
    out << "final " << detail::fmt_g(fin.x) << ' ' << detail::fmt_g(fin.y) << "\n";
  }
}

inline void save_trajectory_file(const Trajectory& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw TrajectoryError("cannot write trajectory file " + path);
  save_trajectory(t, out);
}

struct TrajectoryFile {
  std::vector<ControlStep> controls;
  std::uint64_t seed = 0;
  double dt = 0.05;
  int n_substeps = 10;
  bool has_final = false;
  Vec2 final_robot;
};

inline TrajectoryFile load_trajectory(std::istream& in) {
  TrajectoryFile t;
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader)
    throw TrajectoryError("expected header '" + std::string(kTrajectoryHeader) + "'");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string kw;
    if (!(ss >> kw)) continue;
    if (kw == "seed") ss >> t.seed;
    else if (kw == "dt_s") ss >> t.dt;
    else if (kw == "n_substeps") ss >> t.n_substeps;
    else if (kw == "control") {
      ControlStep c;
      if (!(ss >> c.u.force.x >> c.u.force.y >> c.steps))
        throw TrajectoryError("line " + std::to_string(lineno) + ": bad control line");
      c.dt = t.dt;
      t.controls.push_back(c);
    } else if (kw == "final") {
      if (!(ss >> t.final_robot.x >> t.final_robot.y))
        throw TrajectoryError("line " + std::to_string(lineno) + ": bad final line");
      t.has_final = true;
    } else {
      throw TrajectoryError("line " + std::to_string(lineno) + ": unknown keyword " + kw);
    }
  }
  return t;
}

inline TrajectoryFile load_trajectory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TrajectoryError("cannot open trajectory file " + path);
  return load_trajectory(in);
}

/// Re-propagate a control list from the initial state. Returns the realized
/// state sequence (one entry per step, including the initial state).
inline std::vector<EnvState> replay(const AbstractKnowledge& k, const EnvState& init,
                                    const std::vector<ControlStep>& controls, double dt,
                                    int n_substeps) {
  std::vector<EnvState> states{init};
  EnvState e = init;
  for (const auto& c : controls) {
    for (int i = 0; i < c.steps; ++i) {
      auto [e_new, report] = propagate(k, e, c.u, dt, n_substeps);
      e = e_new;
      states.push_back(e);
    }
  }
  return states;
}

}  // namespace cosafe
