#pragma once

#include <stdexcept>

#include "cosafe/formula.hpp"

namespace cosafe {

/// Raised when pushing a negation inward would need a temporal operator
/// outside the co-safe set (eventually, next, until).
struct NotCoSafe : std::runtime_error {
  NotCoSafe() : std::runtime_error("formula is not syntactically co-safe") {}
};

namespace detail {

inline FormulaPtr pnf_rec(const FormulaPtr& f, bool negated) {
  switch (f->op) {
    case Op::Atom:
      return negated ? f_not(f) : f;
    case Op::True:
      return negated ? f_false() : f_true();
    case Op::False:
      return negated ? f_true() : f_false();
    case Op::Not:
      return pnf_rec(f->lhs, !negated);
    case Op::And: {
      auto l = pnf_rec(f->lhs, negated);
      auto r = pnf_rec(f->rhs, negated);
      return negated ? f_or(l, r) : f_and(l, r);
    }
    case Op::Or: {
      auto l = pnf_rec(f->lhs, negated);
      auto r = pnf_rec(f->rhs, negated);
      return negated ? f_and(l, r) : f_or(l, r);
    }
    case Op::Next:
      // The dual of next is not available in the co-safe grammar.
      if (negated) throw NotCoSafe();
      return f_next(pnf_rec(f->lhs, false));
    case Op::Eventually:
      if (negated) throw NotCoSafe();  // would need "always"
      return f_eventually(pnf_rec(f->lhs, false));
    case Op::Until:
      if (negated) throw NotCoSafe();  // would need "release"
      return f_until(pnf_rec(f->lhs, false), pnf_rec(f->rhs, false));
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

/// Rewrite into positive normal form: negation only in front of atoms.
/// Throws NotCoSafe when the rewrite would leave the co-safe fragment.
inline FormulaPtr to_pnf(const FormulaPtr& f) { return detail::pnf_rec(f, false); }

/// A formula is syntactically co-safe iff its PNF exists within the grammar.
inline bool check_cosafe(const FormulaPtr& f) {
  try {
    to_pnf(f);
    return true;
  } catch (const NotCoSafe&) {
    return false;
  }
}

}  // namespace cosafe
