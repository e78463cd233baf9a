#pragma once

#include <optional>
#include <vector>

#include "cosafe/formula.hpp"

namespace cosafe {

/// The formula seen as nested lists: one list per AST node. A list's `op`
/// set holds the operator connecting it inside its parent plus its own
/// prefix operator when it is a unary application. Depth/order follow the
/// L_(i,j) numbering: depth 0 is the whole formula, order counts operand
/// position within the parent.
struct ListEntry {
  std::vector<int> path;   // child indices from the root (0 = lhs, 1 = rhs)
  int parent = -1;         // index into ListView::entries, -1 for the root
  std::vector<Op> op;      // connecting + prefix operators
  int depth = 0;
  int order = 1;
  Op node_op = Op::True;
  int prop = -1;           // proposition id when node_op == Atom
};

struct ListView {
  std::vector<ListEntry> entries;  // entries[0] is the root list

  std::vector<int> atom_occurrences(int prop) const {
    std::vector<int> out;
    for (size_t i = 0; i < entries.size(); ++i)
      if (entries[i].node_op == Op::Atom && entries[i].prop == prop)
        out.push_back(static_cast<int>(i));
    return out;
  }

  bool has_op(int entry, Op o) const {
    for (Op e : entries[static_cast<size_t>(entry)].op)
      if (e == o) return true;
    return false;
  }
};

namespace detail {

inline bool is_unary(Op op) { return op == Op::Not || op == Op::Next || op == Op::Eventually; }

inline void build_lists(const FormulaPtr& f, int parent, int depth, int order,
                        std::vector<int>& path, ListView& view) {
  ListEntry e;
  e.path = path;
  e.parent = parent;
  e.depth = depth;
  e.order = order;
  e.node_op = f->op;
  e.prop = f->prop;
  if (parent >= 0) e.op.push_back(view.entries[static_cast<size_t>(parent)].node_op);
  if (is_unary(f->op)) e.op.push_back(f->op);
  const int self = static_cast<int>(view.entries.size());
  view.entries.push_back(std::move(e));

  if (f->lhs) {
    path.push_back(0);
    build_lists(f->lhs, self, depth + 1, 1, path, view);
    path.pop_back();
  }
  if (f->rhs) {
    path.push_back(1);
    build_lists(f->rhs, self, depth + 1, 2, path, view);
    path.pop_back();
  }
}

// Rebuild the formula with the node at `path` deleted. The node must be an
// operand of a binary connective; the connective collapses to the sibling.
inline FormulaPtr delete_at(const FormulaPtr& f, const std::vector<int>& path, size_t i) {
  if (i + 1 == path.size()) {
    // f is the binary parent; keep the sibling of the deleted operand.
    return path[i] == 0 ? f->rhs : f->lhs;
  }
  if (path[i] == 0)
    return std::make_shared<Formula>(f->op, f->prop, delete_at(f->lhs, path, i + 1), f->rhs);
  return std::make_shared<Formula>(f->op, f->prop, f->lhs, delete_at(f->rhs, path, i + 1));
}

}  // namespace detail

inline ListView build_list_view(const FormulaPtr& f) {
  ListView view;
  std::vector<int> path;
  detail::build_lists(f, -1, 0, 1, path, view);
  return view;
}

/// Remove the list at `entry` from the formula the view was built over.
/// Only valid when the entry's parent is a binary connective.
inline FormulaPtr delete_list(const FormulaPtr& f, const ListView& view, int entry) {
  const auto& e = view.entries[static_cast<size_t>(entry)];
  return detail::delete_at(f, e.path, 0);
}

}  // namespace cosafe
