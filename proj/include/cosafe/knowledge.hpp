#pragma once

#include <array>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "cosafe/decomposition.hpp"
#include "cosafe/formula.hpp"
#include "cosafe/list_view.hpp"
#include "cosafe/world.hpp"

namespace cosafe {

enum class ManipClass { FreelyMovable, ConstraintOriented, TemporarilyFixed };

/// Per movable body: how it may currently be manipulated. A push along
/// direction d needs the mRegion on the opposite face to be free (the robot
/// stands there and pushes through the body).
struct ManipStatus {
  ManipClass cls = ManipClass::TemporarilyFixed;
  std::array<bool, 4> allowed_dir{};  // indexed by Dir, push directions
  std::array<bool, 4> free_face{};    // indexed by Dir, faces with a free mRegion

  bool allows(Dir d) const { return allowed_dir[static_cast<size_t>(d)]; }

  bool operator==(const ManipStatus& o) const {
    return cls == o.cls && allowed_dir == o.allowed_dir && free_face == o.free_face;
  }
};

/// Instantiated knowledge kappa: per-body manipulation statuses inferred
/// from the abstract knowledge and one environment state.
struct InstKnowledge {
  std::vector<ManipStatus> statuses;  // one slot per body id; fixed bodies keep defaults
  long step = 0;

  const ManipStatus& status(int body) const { return statuses.at(static_cast<size_t>(body)); }

  bool operator==(const InstKnowledge& o) const { return statuses == o.statuses; }
};

struct UnknownBody : std::runtime_error {
  explicit UnknownBody(size_t n)
      : std::runtime_error("environment state has " + std::to_string(n) +
                           " bodies unknown to the abstract knowledge") {}
};

namespace detail {

inline bool mregion_free(const AbstractKnowledge& k, const EnvState& e, int body,
                         const MRegionSpec& m) {
  const Rect region = AbstractKnowledge::mregion_rect(e.body_rect(k, body), m);
  if (!k.bounds.contains_rect(region)) return false;
  for (const auto& other : k.bodies) {
    if (other.id == body) continue;
    const Rect other_rect =
        other.kind == BodyKind::Fixed ? other.rect : e.body_rect(k, other.id);
    if (overlap_area(region, other_rect) > kOverlapAreaTolerance) return false;
  }
  return true;
}

inline ManipStatus classify(const AbstractKnowledge& k, const EnvState& e, int body) {
  ManipStatus st;
  const auto& spec = k.body(body);
  int free_count = 0;
  for (const auto& m : spec.mregions) {
    const bool free = mregion_free(k, e, body, m);
    if (free) {
      ++free_count;
      st.free_face[static_cast<size_t>(m.face)] = true;
      st.allowed_dir[static_cast<size_t>(opposite(m.face))] = true;
    }
  }
  if (spec.mregions.empty() || free_count == 0)
    st.cls = ManipClass::TemporarilyFixed;
  else if (free_count == static_cast<int>(spec.mregions.size()))
    st.cls = ManipClass::FreelyMovable;
  else
    st.cls = ManipClass::ConstraintOriented;
  return st;
}

}  // namespace detail

/// Recompute every movable body's manipulation status from the current
/// poses. Pure in (K, E): calling twice yields equal results.
inline InstKnowledge infer_initial(const AbstractKnowledge& k, const EnvState& e) {
  if (e.bodies.size() != k.bodies.size()) throw UnknownBody(e.bodies.size());
  InstKnowledge kappa;
  kappa.step = e.step;
  kappa.statuses.resize(k.bodies.size());
  for (const auto& b : k.bodies)
    if (b.kind == BodyKind::Movable)
      kappa.statuses[static_cast<size_t>(b.id)] = detail::classify(k, e, b.id);
  return kappa;
}

/// INFERENCE step: statuses depend only on the new state; class transitions
/// in both directions are allowed.
inline InstKnowledge inference(const AbstractKnowledge& k, const EnvState& e_new,
                               const InstKnowledge& /*kappa_prev*/) {
  return infer_initial(k, e_new);
}

/// Propositions whose regions cannot be reached through fixed obstacles.
struct NonvalidSet {
  std::vector<int> props;           // sorted
  std::vector<std::string> reason;  // parallel to props

  bool empty() const { return props.empty(); }
  bool contains(int p) const {
    for (int q : props)
      if (q == p) return true;
    return false;
  }
};

/// F(K, Pi): flood fill over the decomposition adjacency from the robot's
/// start cell. Movable bodies are not part of the decomposition, so they are
/// ignored: they can potentially be pushed away.
inline NonvalidSet feasibility(const AbstractKnowledge& /*k*/, const PropTable& props,
                               const Decomposition& d, const Vec2& start) {
  const int start_cell = d.locate(start).cell;  // throws if inside a fixed body

  std::vector<bool> seen(d.cells().size(), false);
  std::vector<bool> reachable_prop(static_cast<size_t>(props.size()), false);
  std::queue<int> frontier;
  frontier.push(start_cell);
  seen[static_cast<size_t>(start_cell)] = true;
  while (!frontier.empty()) {
    const int c = frontier.front();
    frontier.pop();
    reachable_prop[static_cast<size_t>(d.label(c))] = true;
    for (int n : d.neighbors(c))
      if (!seen[static_cast<size_t>(n)]) {
        seen[static_cast<size_t>(n)] = true;
        frontier.push(n);
      }
  }

  std::vector<bool> has_cell(static_cast<size_t>(props.size()), false);
  for (const auto& c : d.cells()) has_cell[static_cast<size_t>(c.label)] = true;

  NonvalidSet out;
  for (int p = 1; p < props.size(); ++p) {
    if (reachable_prop[static_cast<size_t>(p)]) continue;
    out.props.push_back(p);
    out.reason.push_back(has_cell[static_cast<size_t>(p)] ? "enclosed-by-fixed"
                                                          : "covered-by-fixed");
  }
  return out;
}

/// Algorithm "Simplify": climb from the given list towards the root; at the
/// first list whose op set contains a disjunction, delete that list from the
/// formula. Reaching the root means the nonvalid proposition cannot be
/// skipped: the task is infeasible (returns nullopt).
inline std::optional<FormulaPtr> simplify(const FormulaPtr& phi, const ListView& view,
                                          int entry) {
  int cur = entry;
  while (true) {
    if (view.has_op(cur, Op::Or)) return delete_list(phi, view, cur);
    const int parent = view.entries[static_cast<size_t>(cur)].parent;
    if (parent <= 0) return std::nullopt;  // parent is the whole formula (or cur is root)
    cur = parent;
  }
}

namespace detail {

// True/False absorption without reordering, so simplified formulas keep
// their structural shape for exact-match checks.
inline FormulaPtr bool_simplify(const FormulaPtr& f) {
  switch (f->op) {
    case Op::Atom:
    case Op::True:
    case Op::False:
      return f;
    case Op::Not: {
      auto c = bool_simplify(f->lhs);
      if (c->op == Op::True) return f_false();
      if (c->op == Op::False) return f_true();
      return f_not(c);
    }
    case Op::Next:
      return f_next(bool_simplify(f->lhs));
    case Op::Eventually:
      return f_eventually(bool_simplify(f->lhs));
    case Op::And: {
      auto l = bool_simplify(f->lhs);
      auto r = bool_simplify(f->rhs);
      if (l->op == Op::True) return r;
      if (r->op == Op::True) return l;
      if (l->op == Op::False || r->op == Op::False) return f_false();
      return f_and(l, r);
    }
    case Op::Or: {
      auto l = bool_simplify(f->lhs);
      auto r = bool_simplify(f->rhs);
      if (l->op == Op::False) return r;
      if (r->op == Op::False) return l;
      if (l->op == Op::True || r->op == Op::True) return f_true();
      return f_or(l, r);
    }
    case Op::Until:
      return f_until(bool_simplify(f->lhs), bool_simplify(f->rhs));
  }
  return f;
}

// An unreachable region is trivially avoided, so a negated nonvalid
// proposition is a tautology over realizable traces.
inline FormulaPtr rewrite_negated_nonvalid(const FormulaPtr& f, const NonvalidSet& mp) {
  if (f->op == Op::Not && f->lhs->op == Op::Atom && mp.contains(f->lhs->prop)) return f_true();
  if (!f->lhs) return f;
  auto l = rewrite_negated_nonvalid(f->lhs, mp);
  auto r = f->rhs ? rewrite_negated_nonvalid(f->rhs, mp) : nullptr;
  if (l == f->lhs && r == f->rhs) return f;
  return std::make_shared<Formula>(f->op, f->prop, l, r);
}

}  // namespace detail

/// Algorithm "Evaluate": fold Simplify over every occurrence of every
/// nonvalid proposition (leftmost first). Returns the possibly simplified
/// formula, or nullopt when the task is infeasible.
inline std::optional<FormulaPtr> evaluate_with_nonvalid(const FormulaPtr& phi,
                                                        const NonvalidSet& mp) {
  if (mp.empty()) return phi;
  FormulaPtr psi = detail::bool_simplify(detail::rewrite_negated_nonvalid(phi, mp));
  while (true) {
    if (psi->op == Op::True || psi->op == Op::False) return psi;
    const ListView view = build_list_view(psi);
    int occ = -1;
    for (size_t i = 0; i < view.entries.size(); ++i) {
      const auto& e = view.entries[i];
      if (e.node_op == Op::Atom && mp.contains(e.prop)) {
        occ = static_cast<int>(i);
        break;
      }
    }
    if (occ < 0) return psi;
    auto next = simplify(psi, view, occ);
    if (!next) return std::nullopt;
    psi = detail::bool_simplify(*next);
  }
}

/// Full Evaluate: compute the nonvalid set from the decomposition and fold
/// Simplify over it.
inline std::optional<FormulaPtr> evaluate(const FormulaPtr& phi, const PropTable& props,
                                          const AbstractKnowledge& k, const Decomposition& d,
                                          const Vec2& start, NonvalidSet* mp_out = nullptr) {
  const NonvalidSet mp = feasibility(k, props, d, start);
  if (mp_out) *mp_out = mp;
  return evaluate_with_nonvalid(phi, mp);
}

}  // namespace cosafe
