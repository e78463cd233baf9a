#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <vector>

#include "cosafe/decomposition.hpp"
#include "cosafe/knowledge.hpp"
#include "cosafe/nfa.hpp"
#include "cosafe/physics.hpp"
#include "cosafe/pnf.hpp"
#include "cosafe/scene.hpp"
#include "cosafe/trajectory.hpp"

namespace cosafe {

/// High-level state: decomposition cell plus tracked automaton state-set.
/// State-sets subsume the single automaton state of the abstract algorithm.
struct ProductState {
  int cell = -1;
  int stateset = -1;  // interned id, see ProductSpace

  bool operator<(const ProductState& o) const {
    return cell != o.cell ? cell < o.cell : stateset < o.stateset;
  }
  bool operator==(const ProductState& o) const {
    return cell == o.cell && stateset == o.stateset;
  }
};

/// Interning table for NFA state-sets plus per-product-state bookkeeping.
class ProductSpace {
 public:
  explicit ProductSpace(const Nfa& nfa) : nfa_(&nfa) {}

  int intern(const std::vector<int>& states) {
    auto it = ids_.find(states);
    if (it != ids_.end()) return it->second;
    const int id = static_cast<int>(sets_.size());
    ids_.emplace(states, id);
    sets_.push_back(states);
    accepting_.push_back(nfa_->any_accepting(states));
    return id;
  }

  const std::vector<int>& set(int id) const { return sets_.at(static_cast<size_t>(id)); }
  bool accepting(int id) const { return accepting_.at(static_cast<size_t>(id)); }
  bool empty_set(int id) const { return set(id).empty(); }

  int step(int id, int prop) {
    auto key = std::make_pair(id, prop);
    auto it = step_cache_.find(key);
    if (it != step_cache_.end()) return it->second;
    const int out = intern(nfa_step(*nfa_, set(id), prop));
    step_cache_.emplace(key, out);
    return out;
  }

  int& nsel(const ProductState& v) { return nsel_[v]; }
  int nsel_of(const ProductState& v) const {
    auto it = nsel_.find(v);
    return it == nsel_.end() ? 0 : it->second;
  }

 private:
  const Nfa* nfa_;
  std::map<std::vector<int>, int> ids_;
  std::vector<std::vector<int>> sets_;
  std::vector<bool> accepting_;
  std::map<std::pair<int, int>, int> step_cache_;
  std::map<ProductState, int> nsel_;
};

using Lead = std::vector<ProductState>;

/// Weighted shortest path in the implicit product graph from any frontier
/// state to an accepting-intersecting product state. Edge weight is the
/// cell-center distance scaled by a selection-count penalty. Returns an
/// empty lead when no accepting product state is graph-reachable.
inline Lead discrete_planning(const Nfa& /*nfa*/, const Decomposition& d, ProductSpace& space,
                              const std::vector<ProductState>& frontier) {
  if (frontier.empty()) throw std::invalid_argument("empty frontier");

  std::map<ProductState, double> dist;
  std::map<ProductState, ProductState> pred;
  using Item = std::pair<double, ProductState>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;

  for (const auto& v : frontier) {
    if (space.empty_set(v.stateset)) continue;
    // Hammered frontier states start with a handicap so the lead migrates to
    // fresher parts of the tree once a source keeps failing to extend.
    const double w0 = static_cast<double>(space.nsel_of(v));
    dist[v] = w0;
    queue.push({w0, v});
  }

  while (!queue.empty()) {
    auto [w, v] = queue.top();
    queue.pop();
    auto dit = dist.find(v);
    if (dit == dist.end() || w > dit->second) continue;
    if (space.accepting(v.stateset)) {
      Lead lead{v};
      ProductState cur = v;
      while (true) {
        auto pit = pred.find(cur);
        if (pit == pred.end()) break;
        cur = pit->second;
        lead.push_back(cur);
      }
      std::reverse(lead.begin(), lead.end());
      return lead;
    }
    const Vec2 c0 = d.center(v.cell);
    for (int ncell : d.neighbors(v.cell)) {
      ProductState next;
      next.cell = ncell;
      next.stateset = d.label(ncell) == d.label(v.cell)
                          ? v.stateset
                          : space.step(v.stateset, d.label(ncell));
      if (space.empty_set(next.stateset)) continue;  // dead branch
      const double step_w =
          (d.center(ncell) - c0).norm() * (1.0 + space.nsel_of(next));
      const double nw = w + step_w;
      auto it = dist.find(next);
      if (it == dist.end() || nw < it->second) {
        dist[next] = nw;
        pred[next] = v;
        queue.push({nw, next});
      }
    }
  }
  return {};  // no accepting product state reachable
}

/// Sample among lead states that hold motion-tree nodes with weight
/// 1/(1+nsel)^2, then increment the winner's selection count.
template <typename HasNodes>
inline ProductState select_high_level_state(const Lead& lead, ProductSpace& space,
                                            HasNodes&& has_nodes, std::mt19937_64& rng) {
  std::vector<const ProductState*> candidates;
  std::vector<double> weights;
  double total = 0.0;
  for (const auto& v : lead) {
    if (!has_nodes(v)) continue;
    const double w = 1.0 / std::pow(1.0 + space.nsel_of(v), 2.0);
    candidates.push_back(&v);
    weights.push_back(w);
    total += w;
  }
  if (candidates.empty()) throw std::invalid_argument("lead holds no tree nodes");
  std::uniform_real_distribution<double> u(0.0, total);
  double pick = u(rng);
  size_t idx = 0;
  for (; idx + 1 < weights.size(); ++idx) {
    if (pick < weights[idx]) break;
    pick -= weights[idx];
  }
  const ProductState chosen = *candidates[idx];
  ++space.nsel(chosen);
  return chosen;
}

/// Advance the high-level state for a newly propagated environment state:
/// new cell from the robot position; the automaton set advances only when
/// the cell's proposition changes (duplicates collapse in the trace).
inline ProductState update_high_level_state(const ProductState& v, const Vec2& robot_pos,
                                            const Decomposition& d, ProductSpace& space) {
  const int cell = d.locate(robot_pos).cell;
  ProductState out;
  out.cell = cell;
  out.stateset = d.label(cell) == d.label(v.cell) ? v.stateset
                                                  : space.step(v.stateset, d.label(cell));
  return out;
}

/// Fraction of iterations that expand a uniformly random populated product
/// state instead of a lead state.
inline constexpr double kExploreBias = 0.30;
/// Consecutive failed extensions after which a tree node stops being
/// selectable (it stays in the tree for path reconstruction).
inline constexpr int kNodeFailLimit = 30;

enum class PlanOutcome { Solved, Infeasible, Timeout };

struct PlanResult {
  PlanOutcome outcome = PlanOutcome::Timeout;
  Trajectory trajectory;
  FormulaPtr psi;        // formula actually planned for
  NonvalidSet nonvalid;  // as computed by Evaluate (empty when knowledge off)
  double wall_time_s = 0.0;
  size_t tree_size = 0;
  size_t iterations = 0;
};

/// Motion tree node: a validated environment state with its knowledge
/// snapshot, incoming control and high-level product state.
struct TreeNode {
  EnvState state;
  InstKnowledge kappa;
  int parent = -1;
  Control u{};
  ProductState product;
  bool dead = false;  // empty automaton set: kept for diagnostics only
};

/// Algorithm "Physics-based LTL Motion Planning": knowledge inference,
/// formula evaluation/simplification, then lead-guided kinodynamic search
/// with physics propagation.
class HybridPlanner {
 public:
  HybridPlanner(const Scene& scene, PlannerConfig config, bool knowledge_enabled = true)
      : scene_(scene), cfg_(config), knowledge_enabled_(knowledge_enabled) {
    if (cfg_.resolution_m <= 0.0)
      cfg_.resolution_m = default_resolution(scene.knowledge.bounds);
  }

  PlanResult plan(const FormulaPtr& phi) {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    const auto& k = scene_.knowledge;
    PlanResult result;

    // Lines 1-5: knowledge, feasibility evaluation, simplification.
    const FormulaPtr phi_pnf = to_pnf(phi);
    const EnvState e_init = EnvState::initial(k);
    const InstKnowledge kappa0 = infer_initial(k, e_init);
    const Decomposition d = decompose(Workspace::from_scene(scene_), cfg_.resolution_m);

    FormulaPtr psi = phi_pnf;
    if (knowledge_enabled_) {
      auto simplified = evaluate(phi_pnf, scene_.props, k, d, k.robot.start, &result.nonvalid);
      if (!simplified) {
        result.outcome = PlanOutcome::Infeasible;
        result.wall_time_s = elapsed();
        return result;
      }
      psi = *simplified;
    }
    result.psi = psi;

    // Lines 7-9: tree, automaton, decomposition.
    const Nfa nfa = build_nfa(psi, scene_.props.size());
    ProductSpace space(nfa);

    const int start_cell = d.locate(k.robot.start).cell;
    const int init_set = space.intern(nfa_step(nfa, nfa.initial, d.label(start_cell)));

    std::vector<TreeNode> tree;
    std::map<ProductState, std::vector<int>> nodes_in;  // live nodes per product state
    TreeNode root;
    root.state = e_init;
    root.kappa = kappa0;
    root.product = {start_cell, init_set};
    tree.push_back(root);
    if (space.empty_set(init_set)) {
      result.outcome = PlanOutcome::Timeout;  // start violates the formula outright
      result.wall_time_s = elapsed();
      result.tree_size = 1;
      return result;
    }
    nodes_in[root.product].push_back(0);
    if (space.accepting(init_set)) {
      result.outcome = PlanOutcome::Solved;
      result.trajectory = retrieve_trajectory(tree, 0, d);
      result.wall_time_s = elapsed();
      result.tree_size = 1;
      return result;
    }

    std::mt19937_64 rng(cfg_.seed);
    Lead lead;
    int fail_streak = 0;
    size_t iteration = 0;
    std::vector<int> node_fails{0};  // consecutive failed extensions per node
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    auto random_populated = [&]() -> ProductState {
      std::vector<const ProductState*> keys;
      for (const auto& [s, nodes] : nodes_in)
        if (!nodes.empty()) keys.push_back(&s);
      std::uniform_int_distribution<size_t> pick(0, keys.size() - 1);
      return *keys[pick(rng)];
    };

    while (elapsed() < cfg_.t_max_s) {
      ++iteration;
      // Lead recomputation every k_lead iterations or after repeated failure.
      if (lead.empty() || iteration % static_cast<size_t>(std::max(1, cfg_.k_lead)) == 1 ||
          fail_streak >= 5) {
        std::vector<ProductState> frontier;
        frontier.reserve(nodes_in.size());
        for (const auto& [v, nodes] : nodes_in)
          if (!nodes.empty()) frontier.push_back(v);
        lead = discrete_planning(nfa, d, space, frontier);
        fail_streak = 0;
      }

      // Mostly follow the lead, but keep a uniform exploration component:
      // manipulation detours (moving a box out of the way) rarely lie on the
      // shortest discrete route.
      const auto has_nodes = [&](const ProductState& s) {
        auto it = nodes_in.find(s);
        return it != nodes_in.end() && !it->second.empty();
      };
      ProductState v;
      const bool lead_populated =
          !lead.empty() && std::any_of(lead.begin(), lead.end(), has_nodes);
      if (lead_populated && coin(rng) >= kExploreBias)
        v = select_high_level_state(lead, space, has_nodes, rng);
      else
        v = random_populated();

      auto& bucket = nodes_in[v];
      if (bucket.empty()) {
        ++fail_streak;
        continue;
      }
      std::uniform_int_distribution<size_t> pick(0, bucket.size() - 1);
      const int node_idx = bucket[pick(rng)];

      auto [u, n_steps] = sample_control(rng, k, cfg_);
      int cur = node_idx;
      bool grew = false;
      for (int i = 0; i < n_steps; ++i) {
        const TreeNode& cur_node = tree[static_cast<size_t>(cur)];
        auto [e_new, report] = propagate(k, cur_node.state, u, cfg_.dt_s, cfg_.n_substeps);
        if (!validity_check(k, e_new, cur_node.kappa, report)) break;

        ProductState ps_new;
        try {
          ps_new = update_high_level_state(cur_node.product, e_new.robot.p, d, space);
        } catch (const std::out_of_range&) {
          break;  // robot position not locatable: treat as invalid
        }

        TreeNode node;
        node.state = e_new;
        node.kappa = knowledge_enabled_ ? inference(k, e_new, cur_node.kappa) : kappa0;
        node.parent = cur;
        node.u = u;
        node.product = ps_new;
        node.dead = space.empty_set(ps_new.stateset);
        tree.push_back(node);
        node_fails.push_back(0);
        const int new_idx = static_cast<int>(tree.size()) - 1;
        grew = true;

        if (node.dead) break;  // kept for diagnostics, pruned from selection
        nodes_in[ps_new].push_back(new_idx);

        if (space.accepting(ps_new.stateset)) {
          result.outcome = PlanOutcome::Solved;
          result.trajectory = retrieve_trajectory(tree, new_idx, d);
          result.trajectory.seed = cfg_.seed;
          result.wall_time_s = elapsed();
          result.tree_size = tree.size();
          result.iterations = iteration;
          verify_solution(result, psi);
          return result;
        }
        cur = new_idx;
      }
      fail_streak = grew ? 0 : fail_streak + 1;
      if (grew) {
        node_fails[static_cast<size_t>(node_idx)] = 0;
      } else if (node_idx != 0 &&
                 ++node_fails[static_cast<size_t>(node_idx)] >= kNodeFailLimit) {
        // A state whose every successor is invalid (e.g. drifting fast into a
        // non-manipulable body) would otherwise soak up selections forever.
        auto& b = nodes_in[v];
        b.erase(std::remove(b.begin(), b.end(), node_idx), b.end());
      }
    }

    result.outcome = PlanOutcome::Timeout;
    result.wall_time_s = elapsed();
    result.tree_size = tree.size();
    result.iterations = iteration;
    return result;
  }

  const PlannerConfig& config() const { return cfg_; }

 private:
  Trajectory retrieve_trajectory(const std::vector<TreeNode>& tree, int leaf,
                                 const Decomposition& d) const {
    std::vector<int> chain;
    for (int i = leaf; i >= 0; i = tree[static_cast<size_t>(i)].parent) chain.push_back(i);
    std::reverse(chain.begin(), chain.end());

    Trajectory traj;
    traj.dt = cfg_.dt_s;
    traj.n_substeps = cfg_.n_substeps;
    traj.seed = cfg_.seed;
    for (size_t i = 0; i < chain.size(); ++i) {
      const TreeNode& node = tree[static_cast<size_t>(chain[i])];
      traj.states.push_back(node.state);
      traj.trace.push(d.label(node.product.cell));
      if (i == 0) continue;  // root has no incoming control
      if (!traj.controls.empty() && traj.controls.back().u.force == node.u.force)
        ++traj.controls.back().steps;
      else
        traj.controls.push_back({node.u, cfg_.dt_s, 1});
    }
    return traj;
  }

  // The trace satisfies psi by construction; re-verify before returning.
  static void verify_solution(const PlanResult& result, const FormulaPtr& psi) {
    if (!trace_satisfies(psi, result.trajectory.trace))
      throw std::logic_error("internal inconsistency: solution trace rejected by semantics");
  }

  Scene scene_;
  PlannerConfig cfg_;
  bool knowledge_enabled_;
};

}  // namespace cosafe
