#include <catch_amalgamated.hpp>

#include "cosafe/formula.hpp"
#include "cosafe/pnf.hpp"

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

TEST_CASE("proposition table reserves p0 and keeps ids dense") {
  PropTable t;
  REQUIRE(t.size() == 1);
  REQUIRE(t.name(0) == "p0");
  REQUIRE(t.find("p0") == 0);
  REQUIRE(t.declare("a") == 1);
  REQUIRE(t.declare("b") == 2);
  REQUIRE(t.declare("a") == 1);  // idempotent
  REQUIRE(t.find("b") == 2);
  REQUIRE_FALSE(t.find("c").has_value());
  REQUIRE_THROWS_AS(t.declare("p0"), std::invalid_argument);
}

TEST_CASE("parser honours the operator precedence ! F X > U > & > |") {
  const PropTable t = three_props();

  auto f = parse_formula("p1 | p2 & p3", t);
  REQUIRE(f->op == Op::Or);
  REQUIRE(f->rhs->op == Op::And);

  f = parse_formula("F p1 & p2", t);
  REQUIRE(f->op == Op::And);
  REQUIRE(f->lhs->op == Op::Eventually);

  f = parse_formula("p1 U p2 & p3", t);
  REQUIRE(f->op == Op::And);
  REQUIRE(f->lhs->op == Op::Until);

  f = parse_formula("!p1 U p2", t);
  REQUIRE(f->op == Op::Until);
  REQUIRE(f->lhs->op == Op::Not);
}

TEST_CASE("until is right-associative") {
  const PropTable t = three_props();
  const auto f = parse_formula("p1 U p2 U p3", t);
  REQUIRE(f->op == Op::Until);
  REQUIRE(f->lhs->op == Op::Atom);
  REQUIRE(f->rhs->op == Op::Until);
  REQUIRE(equal(f, parse_formula("p1 U (p2 U p3)", t)));
}

TEST_CASE("parentheses and keywords parse") {
  const PropTable t = three_props();
  REQUIRE(equal(parse_formula("(p1 | p2) & p3", t),
                f_and(f_or(f_atom(1), f_atom(2)), f_atom(3))));
  REQUIRE(parse_formula("true", t)->op == Op::True);
  REQUIRE(parse_formula("false", t)->op == Op::False);
  REQUIRE(parse_formula("X p1", t)->op == Op::Next);
  // Keyword only matches as a whole word; "Fp1" would be an identifier.
  REQUIRE_THROWS_AS(parse_formula("Fp1", t), ParseError);
}

TEST_CASE("parse errors carry a position") {
  const PropTable t = three_props();

  try {
    parse_formula("p1 & qq", t);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(e.position == 5);
  }

  REQUIRE_THROWS_AS(parse_formula("(p1 & p2", t), ParseError);
  REQUIRE_THROWS_AS(parse_formula("p1 p2", t), ParseError);
  REQUIRE_THROWS_AS(parse_formula("", t), ParseError);
  REQUIRE_THROWS_AS(parse_formula("p1 &", t), ParseError);
}

TEST_CASE("printer round-trips through the parser") {
  const PropTable t = three_props();
  const char* samples[] = {
      "F (p1 & F (p2 & F (p3 | p1)))",
      "F p1 | F p2 & F p3",
      "!p1 U p2",
      "X (p1 | p2) & p3",
      "p1 U (p2 U p3)",
      "true U p1",
  };
  for (const char* s : samples) {
    const auto f = parse_formula(s, t);
    const auto g = parse_formula(to_string(f, t), t);
    INFO(s << "  ->  " << to_string(f, t));
    REQUIRE(equal(f, g));
  }
}

TEST_CASE("printer uses minimal parenthesisation") {
  const PropTable t = three_props();
  REQUIRE(to_string(parse_formula("p1 | (p2 & p3)", t), t) == "p1 | p2 & p3");
  REQUIRE(to_string(parse_formula("(p1 | p2) & p3", t), t) == "(p1 | p2) & p3");
  REQUIRE(to_string(parse_formula("F (p1 & p2)", t), t) == "F (p1 & p2)");
  REQUIRE(to_string(parse_formula("F p1 & p2", t), t) == "F p1 & p2");
}

TEST_CASE("positive normal form pushes negation to the atoms") {
  const PropTable t = three_props();

  REQUIRE(equal(to_pnf(parse_formula("!!p1", t)), f_atom(1)));
  REQUIRE(equal(to_pnf(parse_formula("!(p1 & p2)", t)),
                f_or(f_not(f_atom(1)), f_not(f_atom(2)))));
  REQUIRE(equal(to_pnf(parse_formula("!(p1 | !p2)", t)),
                f_and(f_not(f_atom(1)), f_atom(2))));
  REQUIRE(equal(to_pnf(parse_formula("!true", t)), f_false()));
  REQUIRE(equal(to_pnf(parse_formula("!false", t)), f_true()));
  // Already-positive formulas pass through unchanged.
  const auto f = parse_formula("F (p1 & F p2)", t);
  REQUIRE(equal(to_pnf(f), f));
}

TEST_CASE("negated temporal operators leave the co-safe fragment") {
  const PropTable t = three_props();
  REQUIRE_THROWS_AS(to_pnf(parse_formula("!F p1", t)), NotCoSafe);
  REQUIRE_THROWS_AS(to_pnf(parse_formula("!X p1", t)), NotCoSafe);
  REQUIRE_THROWS_AS(to_pnf(parse_formula("!(p1 U p2)", t)), NotCoSafe);
  REQUIRE_THROWS_AS(to_pnf(parse_formula("!(p1 & F p2)", t)), NotCoSafe);

  REQUIRE(check_cosafe(parse_formula("!p1 U p2", t)));
  REQUIRE(check_cosafe(parse_formula("!!F p1", t)));  // double negation cancels
  REQUIRE_FALSE(check_cosafe(parse_formula("!F p1", t)));
}

TEST_CASE("collect_props gathers distinct proposition ids") {
  const PropTable t = three_props();
  std::vector<int> props;
  collect_props(parse_formula("F (p1 & F (p2 & p1))", t), props);
  REQUIRE(props == std::vector<int>{1, 2});
}
