#include <catch_amalgamated.hpp>

#include "cosafe/nfa.hpp"
#include "cosafe/pnf.hpp"
#include "cosafe/trace.hpp"
#include "gen.hpp"

using namespace cosafe;

namespace {

PropTable three_props() {
  PropTable t;
  t.declare("p1");
  t.declare("p2");
  t.declare("p3");
  return t;
}

}  // namespace

TEST_CASE("discrete traces collapse consecutive duplicates") {
  DiscreteTrace t({0, 0, 1, 1, 1, 0, 2, 2});
  REQUIRE(t.symbols() == std::vector<int>{0, 1, 0, 2});
  t.push(2);
  REQUIRE(t.size() == 4);
  t.push(0);
  REQUIRE(t.symbols() == std::vector<int>{0, 1, 0, 2, 0});
}

TEST_CASE("finite-trace semantics, hand-checked cases") {
  const PropTable t = three_props();
  auto sat = [&](const char* f, std::vector<int> tr) {
    return trace_satisfies(parse_formula(f, t), DiscreteTrace(tr));
  };

  SECTION("empty traces satisfy nothing, not even true") {
    REQUIRE_FALSE(trace_satisfies(f_true(), DiscreteTrace{}));
  }
  SECTION("atoms are checked at the first position") {
    REQUIRE(sat("p1", {1, 2}));
    REQUIRE_FALSE(sat("p1", {2, 1}));
  }
  SECTION("eventually scans the whole trace") {
    REQUIRE(sat("F p2", {0, 1, 2}));
    REQUIRE_FALSE(sat("F p2", {0, 1, 3}));
  }
  SECTION("next needs a next distinct region") {
    REQUIRE(sat("X p2", {1, 2}));
    REQUIRE_FALSE(sat("X p1", {1}));       // no successor position
    REQUIRE_FALSE(sat("X true", {1}));     // even X true fails on the last position
    REQUIRE(sat("X X p3", {0, 1, 3}));
  }
  SECTION("until requires the left side to hold up to the witness") {
    REQUIRE(sat("p1 U p2", {1, 1, 2}));   // duplicates collapse: {1,2}
    REQUIRE(sat("p1 U p2", {2}));          // right side immediately
    REQUIRE_FALSE(sat("p1 U p2", {1, 3, 2}));
    REQUIRE_FALSE(sat("p1 U p2", {1, 1}));
  }
  SECTION("nesting and boolean connectives") {
    REQUIRE(sat("F (p1 & F p2)", {0, 1, 0, 2}));
    REQUIRE_FALSE(sat("F (p1 & F p2)", {0, 2, 0, 1}));
    REQUIRE(sat("!p3 U p2", {0, 1, 2}));
    REQUIRE_FALSE(sat("!p3 U p2", {0, 3, 2}));
  }
}

TEST_CASE("automaton agrees with the trace semantics on a bounded family") {
  // Fast cross-check: exhaustive two-layer family over two propositions
  // against every duplicate-free trace of length <= 4. The acceptance suite
  // runs the full-size version of this comparison.
  const int alphabet = 3;  // p0 + two declared propositions
  const auto formulas = testgen::formula_family(2, 2);
  const auto traces = testgen::all_traces(alphabet, 4);
  size_t checked = 0;
  for (const auto& f : formulas) {
    const Nfa nfa = build_nfa(f, alphabet);
    for (const auto& tr : traces) {
      const bool oracle = trace_satisfies(f, tr);
      const bool automaton = nfa_accepts(nfa, tr);
      if (oracle != automaton) {
        PropTable t;
        t.declare("p1");
        t.declare("p2");
        INFO("formula: " << to_string(f, t));
        INFO("trace length: " << tr.size());
        REQUIRE(oracle == automaton);
      }
      ++checked;
    }
  }
  REQUIRE(checked == formulas.size() * traces.size());
}

TEST_CASE("acceptance is closed under trace extension (co-safety)") {
  const int alphabet = 3;
  const auto formulas = testgen::formula_family(2, 2);
  const auto traces = testgen::all_traces(alphabet, 3);
  for (const auto& f : formulas) {
    const Nfa nfa = build_nfa(f, alphabet);
    for (const auto& tr : traces) {
      if (!nfa_accepts(nfa, tr)) continue;
      for (int s = 0; s < alphabet; ++s) {
        DiscreteTrace ext = tr;
        ext.push(s);
        REQUIRE(nfa_accepts(nfa, ext));
      }
    }
  }
}

TEST_CASE("nfa_step rejects unknown propositions") {
  const Nfa nfa = build_nfa(f_atom(1), 3);
  REQUIRE_THROWS_AS(nfa_step(nfa, nfa.initial, 3), std::out_of_range);
  REQUIRE_THROWS_AS(nfa_step(nfa, nfa.initial, -1), std::out_of_range);
}

TEST_CASE("state cap aborts oversized automata") {
  const PropTable t = three_props();
  const auto f = parse_formula("F (p1 & F (p2 & F p3))", t);
  REQUIRE_THROWS_AS(build_nfa(f, t.size(), 2), NfaTooLarge);
  REQUIRE_NOTHROW(build_nfa(f, t.size()));
}

TEST_CASE("trivially equal derivatives share automaton states") {
  // F p1 | F p1 canonicalises to F p1: same number of states.
  const auto a = build_nfa(f_eventually(f_atom(1)), 2);
  const auto b = build_nfa(f_or(f_eventually(f_atom(1)), f_eventually(f_atom(1))), 2);
  REQUIRE(a.num_states() == b.num_states());
}

TEST_CASE("empty trace is rejected by every automaton") {
  REQUIRE_FALSE(nfa_accepts(build_nfa(f_true(), 2), DiscreteTrace{}));
}
