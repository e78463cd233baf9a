#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cosafe/formula.hpp"
#include "cosafe/trace.hpp"

namespace cosafe {

namespace detail {

// --- canonical form -------------------------------------------------------
// Boolean constants absorbed, and/or chains flattened, operands deduplicated
// and sorted, so syntactically different but trivially equal derivatives
// share one automaton state.

inline std::string formula_key(const FormulaPtr& f);

inline void flatten(Op op, const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->op == op) {
    flatten(op, f->lhs, out);
    flatten(op, f->rhs, out);
  } else {
    out.push_back(f);
  }
}

inline FormulaPtr canonical(const FormulaPtr& f) {
  switch (f->op) {
    case Op::Atom:
    case Op::True:
    case Op::False:
      return f;
    case Op::Not: {
      auto c = canonical(f->lhs);
      if (c->op == Op::True) return f_false();
      if (c->op == Op::False) return f_true();
      return f_not(c);
    }
    case Op::Next: {
      auto c = canonical(f->lhs);
      if (c->op == Op::False) return f_false();
      return f_next(c);
    }
    case Op::Eventually: {
      auto c = canonical(f->lhs);
      if (c->op == Op::False) return f_false();
      if (c->op == Op::Eventually) return c;
      return f_eventually(c);
    }
    case Op::Until: {
      auto l = canonical(f->lhs);
      auto r = canonical(f->rhs);
      if (r->op == Op::False) return f_false();
      if (l->op == Op::False) return r;
      return f_until(l, r);
    }
    case Op::And:
    case Op::Or: {
      std::vector<FormulaPtr> parts;
      flatten(f->op, f, parts);
      const bool is_and = f->op == Op::And;
      std::map<std::string, FormulaPtr> uniq;
      for (auto& p : parts) {
        auto c = canonical(p);
        if (c->op == (is_and ? Op::True : Op::False)) continue;  // identity
        if (c->op == (is_and ? Op::False : Op::True))            // absorbing
          return is_and ? f_false() : f_true();
        uniq.emplace(formula_key(c), c);
      }
      if (uniq.empty()) return is_and ? f_true() : f_false();
      FormulaPtr acc;
      for (auto it = uniq.rbegin(); it != uniq.rend(); ++it)
        acc = acc ? (is_and ? f_and(it->second, acc) : f_or(it->second, acc)) : it->second;
      return acc;
    }
  }
  throw std::logic_error("unreachable");
}

inline std::string formula_key(const FormulaPtr& f) {
  switch (f->op) {
    case Op::Atom: return "a" + std::to_string(f->prop);
    case Op::True: return "t";
    case Op::False: return "f";
    case Op::Not: return "!(" + formula_key(f->lhs) + ")";
    case Op::Next: return "X(" + formula_key(f->lhs) + ")";
    case Op::Eventually: return "F(" + formula_key(f->lhs) + ")";
    case Op::Until: return "U(" + formula_key(f->lhs) + "," + formula_key(f->rhs) + ")";
    case Op::And: return "&(" + formula_key(f->lhs) + "," + formula_key(f->rhs) + ")";
    case Op::Or: return "|(" + formula_key(f->lhs) + "," + formula_key(f->rhs) + ")";
  }
  return "?";
}

// Does the empty remainder satisfy f once the whole trace is consumed?
inline bool nullable(const FormulaPtr& f) {
  switch (f->op) {
    case Op::True: return true;
    case Op::Not: return true;  // PNF: only wraps atoms, vacuously true on end
    case Op::And: return nullable(f->lhs) && nullable(f->rhs);
    case Op::Or: return nullable(f->lhs) || nullable(f->rhs);
    default: return false;
  }
}

// Obligation left for the rest of the trace after consuming symbol `a`.
inline FormulaPtr derivative(const FormulaPtr& f, int a) {
  switch (f->op) {
    case Op::True: return f_true();
    case Op::False: return f_false();
    case Op::Atom: return f->prop == a ? f_true() : f_false();
    case Op::Not: return derivative(f->lhs, a)->op == Op::True ? f_false() : f_true();
    case Op::And: return f_and(derivative(f->lhs, a), derivative(f->rhs, a));
    case Op::Or: return f_or(derivative(f->lhs, a), derivative(f->rhs, a));
    case Op::Next:
      // The child must see at least one more symbol: X f fails on the last
      // position, so conjoin a nonemptiness obligation (F true).
      return f_and(f->lhs, f_eventually(f_true()));
    case Op::Eventually:
      return f_or(derivative(f->lhs, a), f);
    case Op::Until:
      return f_or(derivative(f->rhs, a), f_and(derivative(f->lhs, a), f));
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

/// Nondeterministic finite automaton over single-proposition symbols.
/// The derivative construction below is deterministic; the planner still
/// tracks state-sets, which subsume single runs.
struct Nfa {
  int alphabet_size = 0;
  std::vector<std::vector<std::vector<int>>> transitions;  // [state][symbol] -> targets
  std::vector<int> initial;                                // sorted
  std::vector<bool> accepting;

  int num_states() const { return static_cast<int>(transitions.size()); }

  bool any_accepting(const std::vector<int>& states) const {
    for (int s : states)
      if (accepting[static_cast<size_t>(s)]) return true;
    return false;
  }
};

struct NfaTooLarge : std::runtime_error {
  NfaTooLarge(int cap)
      : std::runtime_error("automaton exceeds state cap of " + std::to_string(cap)) {}
};

/// Build the finite-trace automaton of a co-safe PNF formula by memoized
/// syntactic derivatives. Alphabet is proposition ids 0..alphabet_size-1;
/// exactly one proposition holds per trace element (regions are disjoint).
inline Nfa build_nfa(const FormulaPtr& f, int alphabet_size, int state_cap = 10000) {
  Nfa nfa;
  nfa.alphabet_size = alphabet_size;

  std::map<std::string, int> state_ids;
  std::vector<FormulaPtr> state_formula;

  auto intern = [&](const FormulaPtr& g) {
    auto c = detail::canonical(g);
    auto key = detail::formula_key(c);
    auto it = state_ids.find(key);
    if (it != state_ids.end()) return it->second;
    const int id = static_cast<int>(state_formula.size());
    if (id >= state_cap) throw NfaTooLarge(state_cap);
    state_ids.emplace(key, id);
    state_formula.push_back(c);
    return id;
  };

  const int init = intern(f);
  nfa.initial = {init};
  // intern() appends newly discovered states; the loop drains them in order.
  for (size_t s = 0; s < state_formula.size(); ++s) {
    nfa.transitions.emplace_back(static_cast<size_t>(alphabet_size));
    nfa.accepting.push_back(detail::nullable(state_formula[s]));
    for (int a = 0; a < alphabet_size; ++a)
      nfa.transitions[s][static_cast<size_t>(a)] = {intern(detail::derivative(state_formula[s], a))};
  }
  return nfa;
}

/// One-symbol image of a state set; result sorted and deduplicated.
inline std::vector<int> nfa_step(const Nfa& a, const std::vector<int>& states, int prop) {
  if (prop < 0 || prop >= a.alphabet_size)
    throw std::out_of_range("unknown proposition id " + std::to_string(prop));
  std::vector<int> out;
  for (int s : states)
    for (int t : a.transitions[static_cast<size_t>(s)][static_cast<size_t>(prop)]) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline bool nfa_accepts(const Nfa& a, const DiscreteTrace& t) {
  if (t.empty()) return false;  // traces are nonempty by construction
  std::vector<int> states = a.initial;
  for (int sym : t.symbols()) {
    states = nfa_step(a, states, sym);
    if (states.empty()) return false;
  }
  return a.any_accepting(states);
}

}  // namespace cosafe
