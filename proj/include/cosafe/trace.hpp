#pragma once

#include <vector>

#include "cosafe/formula.hpp"

namespace cosafe {

/// Finite sequence of proposition ids with consecutive duplicates collapsed.
/// Region dwell time is irrelevant to the formulas in scope, so "next" reads
/// as "next distinct region".
class DiscreteTrace {
 public:
  DiscreteTrace() = default;
  explicit DiscreteTrace(const std::vector<int>& symbols) {
    for (int s : symbols) push(s);
  }

  void push(int prop) {
    if (symbols_.empty() || symbols_.back() != prop) symbols_.push_back(prop);
  }

  const std::vector<int>& symbols() const { return symbols_; }
  bool empty() const { return symbols_.empty(); }
  size_t size() const { return symbols_.size(); }
  int operator[](size_t i) const { return symbols_[i]; }

  bool operator==(const DiscreteTrace& o) const { return symbols_ == o.symbols_; }

 private:
  std::vector<int> symbols_;
};

namespace detail {

// Finite-trace semantics at position i of t:
//   atom p      : t[i] == p
//   X f         : i+1 < |t| and f holds at i+1
//   f U g       : some j in [i,|t|) has g at j and f at every k in [i,j)
//   F f == true U f
inline bool sat_at(const FormulaPtr& f, const DiscreteTrace& t, size_t i) {
  switch (f->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return t[i] == f->prop;
    case Op::Not: return !sat_at(f->lhs, t, i);
    case Op::And: return sat_at(f->lhs, t, i) && sat_at(f->rhs, t, i);
    case Op::Or: return sat_at(f->lhs, t, i) || sat_at(f->rhs, t, i);
    case Op::Next: return i + 1 < t.size() && sat_at(f->lhs, t, i + 1);
    case Op::Eventually: {
      for (size_t j = i; j < t.size(); ++j)
        if (sat_at(f->lhs, t, j)) return true;
      return false;
    }
    case Op::Until: {
      for (size_t j = i; j < t.size(); ++j) {
        if (sat_at(f->rhs, t, j)) return true;
        if (!sat_at(f->lhs, t, j)) return false;
      }
      return false;
    }
  }
  return false;
}

}  // namespace detail

/// Recursive finite-trace evaluation; the brute-force oracle the automaton
/// construction is checked against. Empty traces satisfy nothing.
inline bool trace_satisfies(const FormulaPtr& f, const DiscreteTrace& t) {
  if (t.empty()) return false;
  return detail::sat_at(f, t, 0);
}

}  // namespace cosafe
