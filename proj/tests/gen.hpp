// Shared generators for the test suites: bounded enumeration of co-safe
// formulas in positive normal form and of duplicate-free discrete traces.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cosafe/formula.hpp"
#include "cosafe/trace.hpp"

namespace testgen {

using cosafe::DiscreteTrace;
using cosafe::FormulaPtr;

// All traces of length 1..max_len over symbols 0..alphabet-1 with no
// consecutive repeats (repeats collapse anyway, so they add nothing).
inline std::vector<DiscreteTrace> all_traces(int alphabet, int max_len) {
  std::vector<DiscreteTrace> out;
  std::vector<std::vector<int>> layer;
  for (int s = 0; s < alphabet; ++s) layer.push_back({s});
  for (int len = 1; len <= max_len; ++len) {
    for (const auto& t : layer) out.emplace_back(t);
    if (len == max_len) break;
    std::vector<std::vector<int>> next;
    for (const auto& t : layer)
      for (int s = 0; s < alphabet; ++s) {
        if (s == t.back()) continue;
        auto u = t;
        u.push_back(s);
        next.push_back(std::move(u));
      }
    layer = std::move(next);
  }
  return out;
}

// Depth-0 pool: true, false, every atom and every negated atom (the only
// placement negation may take in positive normal form).
inline std::vector<FormulaPtr> leaf_pool(int num_props) {
  using namespace cosafe;
  std::vector<FormulaPtr> out{f_true(), f_false()};
  for (int p = 1; p <= num_props; ++p) {
    out.push_back(f_atom(p));
    out.push_back(f_not(f_atom(p)));
  }
  return out;
}

// One enumeration layer: unary operators over the previous layer plus binary
// operators combining the previous layer with leaves. `binary_stride`
// subsamples the left operands of the binary combinations so deep layers
// stay tractable while still covering every operator and leaf.
inline std::vector<FormulaPtr> grow_layer(const std::vector<FormulaPtr>& prev,
                                          const std::vector<FormulaPtr>& leaves,
                                          size_t binary_stride = 1) {
  using namespace cosafe;
  std::vector<FormulaPtr> out;
  for (const auto& f : prev) {
    out.push_back(f_eventually(f));
    out.push_back(f_next(f));
  }
  for (size_t i = 0; i < prev.size(); i += binary_stride)
    for (const auto& leaf : leaves) {
      out.push_back(f_and(prev[i], leaf));
      out.push_back(f_or(prev[i], leaf));
      out.push_back(f_until(prev[i], leaf));
      out.push_back(f_until(leaf, prev[i]));
    }
  return out;
}

// Every formula of the bounded family up to `depth` layers.
inline std::vector<FormulaPtr> formula_family(int num_props, int depth,
                                              size_t deep_stride = 1) {
  const auto leaves = leaf_pool(num_props);
  std::vector<FormulaPtr> all = leaves;
  std::vector<FormulaPtr> layer = leaves;
  for (int d = 1; d <= depth; ++d) {
    layer = grow_layer(layer, leaves, d >= 3 ? deep_stride : 1);
    all.insert(all.end(), layer.begin(), layer.end());
  }
  return all;
}

// Uniformly random co-safe PNF formula of the given depth.
inline FormulaPtr random_formula(std::mt19937_64& rng, int num_props, int depth) {
  using namespace cosafe;
  std::uniform_int_distribution<int> leaf(0, 2 * num_props + 1);
  if (depth == 0) {
    const int pick = leaf(rng);
    if (pick == 0) return f_true();
    if (pick == 1) return f_false();
    const int p = (pick - 2) / 2 + 1;
    return (pick % 2 == 0) ? f_atom(p) : f_not(f_atom(p));
  }
  std::uniform_int_distribution<int> op(0, 5);
  std::uniform_int_distribution<int> sub(0, depth - 1);
  switch (op(rng)) {
    case 0: return f_eventually(random_formula(rng, num_props, sub(rng)));
    case 1: return f_next(random_formula(rng, num_props, sub(rng)));
    case 2:
      return f_and(random_formula(rng, num_props, sub(rng)),
                   random_formula(rng, num_props, sub(rng)));
    case 3:
      return f_or(random_formula(rng, num_props, sub(rng)),
                  random_formula(rng, num_props, sub(rng)));
    default:
      return f_until(random_formula(rng, num_props, sub(rng)),
                     random_formula(rng, num_props, sub(rng)));
  }
}

}  // namespace testgen
