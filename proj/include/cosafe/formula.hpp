#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cosafe {

/// Atomic proposition. Ids are dense, 0..n; id 0 is the reserved proposition
/// labelling the accessible workspace outside every declared region.
struct Proposition {
  int id = 0;
  std::string name;
};

/// Table of declared propositions. The reserved proposition is always
/// present as id 0 and is never user-declared.
class PropTable {
 public:
  PropTable() { props_.push_back({0, "p0"}); }

  int declare(const std::string& name) {
    if (name == "p0") throw std::invalid_argument("p0 is reserved");
    if (auto it = by_name_.find(name); it != by_name_.end()) return it->second;
    const int id = static_cast<int>(props_.size());
    props_.push_back({id, name});
    by_name_.emplace(name, id);
    return id;
  }

  std::optional<int> find(const std::string& name) const {
    if (name == "p0") return 0;
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(int id) const { return props_.at(static_cast<size_t>(id)).name; }
  int size() const { return static_cast<int>(props_.size()); }
  const std::vector<Proposition>& all() const { return props_; }

 private:
  std::vector<Proposition> props_;
  std::unordered_map<std::string, int> by_name_;
};

enum class Op : int { Atom, True, False, Not, And, Or, Next, Until, Eventually };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable AST node of a co-safe LTL formula.
struct Formula {
  Op op = Op::True;
  int prop = -1;        // valid for Atom
  FormulaPtr lhs;       // unary child or left operand
  FormulaPtr rhs;       // right operand of And/Or/Until

  Formula(Op o, int p, FormulaPtr l, FormulaPtr r)
      : op(o), prop(p), lhs(std::move(l)), rhs(std::move(r)) {}
};

inline FormulaPtr f_atom(int prop) {
  return std::make_shared<Formula>(Op::Atom, prop, nullptr, nullptr);
}
inline FormulaPtr f_true() { return std::make_shared<Formula>(Op::True, -1, nullptr, nullptr); }
inline FormulaPtr f_false() { return std::make_shared<Formula>(Op::False, -1, nullptr, nullptr); }
inline FormulaPtr f_not(FormulaPtr c) {
  return std::make_shared<Formula>(Op::Not, -1, std::move(c), nullptr);
}
inline FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(Op::And, -1, std::move(a), std::move(b));
}
inline FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(Op::Or, -1, std::move(a), std::move(b));
}
inline FormulaPtr f_next(FormulaPtr c) {
  return std::make_shared<Formula>(Op::Next, -1, std::move(c), nullptr);
}
inline FormulaPtr f_until(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(Op::Until, -1, std::move(a), std::move(b));
}
inline FormulaPtr f_eventually(FormulaPtr c) {
  return std::make_shared<Formula>(Op::Eventually, -1, std::move(c), nullptr);
}

inline bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->prop != b->prop) return false;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

namespace detail {

// Binding strength used for minimal parenthesisation when printing.
// unary (!, F, X) > U > & > |
inline int precedence(Op op) {
  switch (op) {
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Until: return 3;
    default: return 4;
  }
}

inline void print_rec(const FormulaPtr& f, int parent_prec, std::string& out,
                      const PropTable& props) {
  const int prec = precedence(f->op);
  const bool need_paren = prec < parent_prec;
  if (need_paren) out += '(';
  switch (f->op) {
    case Op::Atom: out += props.name(f->prop); break;
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Not:
      out += '!';
      print_rec(f->lhs, 4, out, props);
      break;
    case Op::Eventually:
      out += "F ";
      print_rec(f->lhs, 4, out, props);
      break;
    case Op::Next:
      out += "X ";
      print_rec(f->lhs, 4, out, props);
      break;
    case Op::And:
      print_rec(f->lhs, 2, out, props);
      out += " & ";
      print_rec(f->rhs, 3, out, props);
      break;
    case Op::Or:
      print_rec(f->lhs, 1, out, props);
      out += " | ";
      print_rec(f->rhs, 2, out, props);
      break;
    case Op::Until:
      print_rec(f->lhs, 4, out, props);
      out += " U ";
      print_rec(f->rhs, 3, out, props);
      break;
  }
  if (need_paren) out += ')';
}

}  // namespace detail

inline std::string to_string(const FormulaPtr& f, const PropTable& props) {
  std::string out;
  detail::print_rec(f, 0, out, props);
  return out;
}

/// Parse error with a character position into the source text.
struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
};

namespace detail {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const PropTable& props)
      : text_(text), props_(props) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_or();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return f;
  }

 private:
  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (peek() == '|') {
      ++pos_;
      f = f_or(f, parse_and());
    }
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_until();
    while (peek() == '&') {
      ++pos_;
      f = f_and(f, parse_until());
    }
    return f;
  }

  FormulaPtr parse_until() {
    FormulaPtr f = parse_unary();
    skip_ws();
    // Right-associative: a U b U c == a U (b U c).
    if (match_word("U")) return f_until(f, parse_until());
    return f;
  }

  FormulaPtr parse_unary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of formula", pos_);
    const char c = text_[pos_];
    if (c == '!') {
      ++pos_;
      return f_not(parse_unary());
    }
    if (c == '(') {
      ++pos_;
      FormulaPtr f = parse_or();
      skip_ws();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return f;
    }
    if (match_word("F")) return f_eventually(parse_unary());
    if (match_word("X")) return f_next(parse_unary());
    if (match_word("true")) return f_true();
    if (match_word("false")) return f_false();
    return parse_atom();
  }

  FormulaPtr parse_atom() {
    skip_ws();
    const size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) throw ParseError("expected proposition or '('", pos_);
    const std::string name(text_.substr(start, pos_ - start));
    auto id = props_.find(name);
    if (!id) throw ParseError("undeclared proposition '" + name + "'", start);
    return f_atom(*id);
  }

  // Matches a keyword followed by a non-identifier character.
  bool match_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) != w) return false;
    const size_t after = pos_ + w.size();
    if (after < text_.size()) {
      const char c = text_[after];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
    }
    pos_ = after;
    return true;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  const PropTable& props_;
  size_t pos_ = 0;
};

}  // namespace detail

/// Parse a formula over the declared propositions.
/// Grammar: `!` not, `&` and, `|` or, `F` eventually, `X` next, `U` until,
/// parentheses; precedence `!`,`F`,`X` > `U` > `&` > `|`.
inline FormulaPtr parse_formula(std::string_view text, const PropTable& props) {
  return detail::FormulaParser(text, props).parse();
}

/// Collect the distinct proposition ids occurring in a formula.
inline void collect_props(const FormulaPtr& f, std::vector<int>& out) {
  if (!f) return;
  if (f->op == Op::Atom) {
    for (int p : out)
      if (p == f->prop) return;
    out.push_back(f->prop);
    return;
  }
  collect_props(f->lhs, out);
  collect_props(f->rhs, out);
}

}  // namespace cosafe
