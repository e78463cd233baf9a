// cosafe-tamp command line front end.
//
// Subcommands:
//   plan      plan a trajectory for a co-safe LTL goal in a scene
//   check     replay a trajectory file and verify it against a formula
//   evaluate  run feasibility evaluation / formula simplification only
//   bench     compare planning with knowledge reasoning on vs. off
//
// Exit codes: 0 success/solved, 2 parse or validation error, 3 infeasible,
// 4 timeout, 5 replay divergence, 6 trace rejected by the formula.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cosafe/bench.hpp"
#include "cosafe/planner.hpp"
#include "cosafe/report.hpp"
#include "cosafe/scene.hpp"
#include "cosafe/svg.hpp"
#include "cosafe/trajectory.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitTimeout = 4;
constexpr int kExitDivergence = 5;
constexpr int kExitRejected = 6;

struct CommonArgs {
  std::string scene_path;
  std::string formula_text;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tmax = 0.0;
  bool tmax_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--scene", a.scene_path, "scene file (cosafe-tamp/1 scene)")->required();
  cmd->add_option("--formula", a.formula_text, "co-safe LTL goal over the scene's regions")
      ->required();
  cmd->add_option("--seed", a.seed, "RNG seed (overrides the scene config)")
      ->each([&](const std::string&) { a.seed_set = true; });
  cmd->add_option("--tmax", a.tmax, "planning time budget in seconds")
      ->each([&](const std::string&) { a.tmax_set = true; });
}

cosafe::Scene load_scene_or_exit(const std::string& path) {
  return cosafe::load_scene_file(path);  // throws SceneError, handled in main
}

cosafe::PlannerConfig effective_config(const cosafe::Scene& scene, const CommonArgs& a) {
  cosafe::PlannerConfig cfg = scene.config;
  if (a.seed_set) cfg.seed = a.seed;
  if (a.tmax_set) cfg.t_max_s = a.tmax;
  return cfg;
}

int cmd_plan(const CommonArgs& a, const std::string& out_path, const std::string& svg_path,
             bool no_knowledge) {
  const cosafe::Scene scene = load_scene_or_exit(a.scene_path);
  const cosafe::FormulaPtr phi = cosafe::parse_formula(a.formula_text, scene.props);
  const cosafe::PlannerConfig cfg = effective_config(scene, a);

  cosafe::HybridPlanner planner(scene, cfg, !no_knowledge);
  const cosafe::PlanResult r = planner.plan(phi);
  cosafe::print_report(cosafe::RunReport::from(r, scene.props, cfg.seed), scene.props,
                       std::cout);
  if (!r.nonvalid.empty()) {
    std::cout << "nonvalid  ";
    for (size_t i = 0; i < r.nonvalid.props.size(); ++i)
      std::cout << (i ? " " : "") << scene.props.name(r.nonvalid.props[i]) << '('
                << r.nonvalid.reason[i] << ')';
    std::cout << "\n";
  }

  if (r.outcome == cosafe::PlanOutcome::Solved) {
    if (!out_path.empty()) cosafe::save_trajectory_file(r.trajectory, out_path);
    if (!svg_path.empty()) cosafe::write_svg_file(svg_path, scene, r.trajectory.states);
    return kExitOk;
  }
  return r.outcome == cosafe::PlanOutcome::Infeasible ? kExitInfeasible : kExitTimeout;
}

int cmd_check(const CommonArgs& a, const std::string& traj_path) {
  const cosafe::Scene scene = load_scene_or_exit(a.scene_path);
  const cosafe::FormulaPtr phi = cosafe::parse_formula(a.formula_text, scene.props);
  const cosafe::TrajectoryFile tf = cosafe::load_trajectory_file(traj_path);
  if (!tf.has_final)
    throw cosafe::TrajectoryError("trajectory file lacks a final line; nothing to verify");

  const auto& k = scene.knowledge;
  const std::vector<cosafe::EnvState> states =
      cosafe::replay(k, cosafe::EnvState::initial(k), tf.controls, tf.dt, tf.n_substeps);
  const cosafe::Vec2 fin = states.back().robot.p;
  if (fin.x != tf.final_robot.x || fin.y != tf.final_robot.y) {
    std::fprintf(stderr, "replay divergence: final robot (%.17g, %.17g) vs stored (%.17g, %.17g)\n",
                 fin.x, fin.y, tf.final_robot.x, tf.final_robot.y);
    return kExitDivergence;
  }

  double res = scene.config.resolution_m;
  if (res <= 0.0) res = cosafe::default_resolution(k.bounds);
  const cosafe::Decomposition d =
      cosafe::decompose(cosafe::Workspace::from_scene(scene), res);
  std::vector<cosafe::Vec2> path;
  path.reserve(states.size());
  for (const auto& s : states) path.push_back(s.robot.p);
  const cosafe::DiscreteTrace trace = cosafe::extract_trace(d, path);

  const cosafe::FormulaPtr phi_pnf = cosafe::to_pnf(phi);
  const cosafe::Nfa nfa = cosafe::build_nfa(phi_pnf, scene.props.size());
  const bool accepted =
      cosafe::nfa_accepts(nfa, trace) && cosafe::trace_satisfies(phi_pnf, trace);
  std::cout << "replay    ok (" << states.size() - 1 << " steps)\n";
  std::cout << "trace     ";
  for (size_t i = 0; i < trace.size(); ++i)
    std::cout << (i ? " " : "") << scene.props.name(trace[i]);
  std::cout << "\nsatisfied " << (accepted ? "yes" : "no") << "\n";
  return accepted ? kExitOk : kExitRejected;
}

int cmd_evaluate(const CommonArgs& a) {
  const cosafe::Scene scene = load_scene_or_exit(a.scene_path);
  const cosafe::FormulaPtr phi = cosafe::parse_formula(a.formula_text, scene.props);
  const cosafe::FormulaPtr phi_pnf = cosafe::to_pnf(phi);
  const auto& k = scene.knowledge;

  double res = scene.config.resolution_m;
  if (res <= 0.0) res = cosafe::default_resolution(k.bounds);
  const cosafe::Decomposition d =
      cosafe::decompose(cosafe::Workspace::from_scene(scene), res);

  const cosafe::EnvState e0 = cosafe::EnvState::initial(k);
  const cosafe::InstKnowledge kappa = cosafe::infer_initial(k, e0);
  for (const auto& b : k.bodies) {
    if (b.kind != cosafe::BodyKind::Movable) continue;
    const auto& st = kappa.status(b.id);
    const char* cls = st.cls == cosafe::ManipClass::FreelyMovable      ? "freely-movable"
                      : st.cls == cosafe::ManipClass::TemporarilyFixed ? "temporarily-fixed"
                                                                       : "constraint-oriented";
    std::cout << "body      " << b.name << " " << cls << " push:";
    for (cosafe::Dir dir : cosafe::kAllDirs)
      if (st.allows(dir)) std::cout << ' ' << cosafe::to_string(dir);
    std::cout << "\n";
  }

  cosafe::NonvalidSet mp;
  const auto psi = cosafe::evaluate(phi_pnf, scene.props, k, d, k.robot.start, &mp);
  std::cout << "nonvalid  ";
  if (mp.empty()) std::cout << "-";
  for (size_t i = 0; i < mp.props.size(); ++i)
    std::cout << (i ? " " : "") << scene.props.name(mp.props[i]) << '(' << mp.reason[i] << ')';
  std::cout << "\n";
  if (!psi) {
    std::cout << "psi       NULL (goal infeasible)\n";
    return kExitInfeasible;
  }
  std::cout << "psi       " << cosafe::to_string(*psi, scene.props) << "\n";
  return kExitOk;
}

int cmd_bench(const CommonArgs& a, int runs, bool no_baseline) {
  cosafe::Scene scene = load_scene_or_exit(a.scene_path);
  const cosafe::FormulaPtr phi = cosafe::parse_formula(a.formula_text, scene.props);
  scene.config = effective_config(scene, a);

  std::vector<std::uint64_t> seeds;
  const std::uint64_t base = a.seed_set ? a.seed : scene.config.seed;
  for (int i = 0; i < runs; ++i) seeds.push_back(base + static_cast<std::uint64_t>(i));

  const std::vector<cosafe::BenchRow> rows = cosafe::run_bench(scene, phi, seeds, !no_baseline);
  cosafe::print_bench_table(rows, std::cout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"task-and-motion planning for co-safe LTL goals in a push-physics world"};
  app.require_subcommand(1);

  CommonArgs plan_args, check_args, eval_args, bench_args;
  std::string out_path, svg_path, traj_path;
  bool no_knowledge = false, no_baseline = false;
  int runs = 5;

  CLI::App* plan = app.add_subcommand("plan", "plan a trajectory for a formula");
  add_common(plan, plan_args);
  plan->add_option("--out", out_path, "write the solution trajectory here");
  plan->add_option("--svg", svg_path, "write an SVG rendering of the solution here");
  plan->add_flag("--no-knowledge", no_knowledge,
                 "freeze manipulation knowledge at its initial value and skip Evaluate");

  CLI::App* check = app.add_subcommand("check", "replay and verify a trajectory");
  add_common(check, check_args);
  check->add_option("--trajectory", traj_path, "trajectory file to verify")->required();

  CLI::App* evaluate = app.add_subcommand("evaluate", "feasibility evaluation only");
  add_common(evaluate, eval_args);

  CLI::App* bench = app.add_subcommand("bench", "knowledge on/off comparison");
  add_common(bench, bench_args);
  bench->add_option("--runs", runs, "number of seeds per mode")->check(CLI::PositiveNumber);
  bench->add_flag("--no-baseline", no_baseline, "skip the knowledge-off baseline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (plan->parsed()) return cmd_plan(plan_args, out_path, svg_path, no_knowledge);
    if (check->parsed()) return cmd_check(check_args, traj_path);
    if (evaluate->parsed()) return cmd_evaluate(eval_args);
    if (bench->parsed()) return cmd_bench(bench_args, runs, no_baseline);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParse;
  }
  return kExitParse;
}
