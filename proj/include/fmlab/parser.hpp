#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "fmlab/error.hpp"
#include "fmlab/formula.hpp"

namespace fmlab {

// Grammar (ASCII):
//   phi  ::= rel "(" term {"," term} ")" | term "=" term | "~" phi
//          | "(" phi op phi ")"            op in { & | -> <-> }
//          | "A" var "." phi | "E" var "." phi
//          | "E[<=" int "]" var "." phi | "E[>" int "]" var "." phi
//   term ::= name | name "(" term ")"
// Identifiers: [a-z][a-z0-9_]*. Whether a name is a variable or a constant is
// resolved against the model at evaluation time.
class FormulaParser {
 public:
  explicit FormulaParser(const std::string& text) : s_(text) {}

  FormulaPtr parse() {
    auto f = formula();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return f;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool eat_str(const char* w) {
    skip_ws();
    std::size_t n = std::string(w).size();
    if (s_.compare(pos_, n, w) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ >= s_.size() || s_[pos_] < 'a' || s_[pos_] > 'z') fail("expected identifier");
    while (pos_ < s_.size() &&
           (std::islower((unsigned char)s_[pos_]) || std::isdigit((unsigned char)s_[pos_]) ||
            s_[pos_] == '_'))
      ++pos_;
    return s_.substr(start, pos_ - start);
  }

  int integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
    if (pos_ == start) fail("expected integer");
    return std::stoi(s_.substr(start, pos_ - start));
  }

  TermPtr term() {
    std::string n = ident();
    if (eat('(')) {
      auto inner = term();
      expect(')');
      return t_app(n, inner);
    }
    return t_name(n);
  }

  FormulaPtr formula() {
    skip_ws();
    char c = peek();
    if (c == '~') {
      ++pos_;
      return f_not(formula());
    }
    if (c == '(') {
      ++pos_;
      auto l = formula();
      Formula::Kind k;
      if (eat('&')) {
        k = Formula::Kind::conj;
      } else if (eat_str("->")) {
        k = Formula::Kind::impl;
      } else if (eat_str("<->")) {
        k = Formula::Kind::iff;
      } else if (eat('|')) {
        k = Formula::Kind::disj;
      } else {
        fail("expected connective");
      }
      auto r = formula();
      expect(')');
      return f_bin(k, l, r);
    }
    if (c == 'A' || c == 'E') {
      // uppercase: quantifier keywords (identifiers are lowercase)
      ++pos_;
      skip_ws();
      if (c == 'E' && pos_ < s_.size() && s_[pos_] == '[') {
        ++pos_;
        Formula::Kind k;
        if (eat_str("<=")) {
          k = Formula::Kind::count_at_most;
        } else if (eat('>')) {
          k = Formula::Kind::count_more_than;
        } else {
          fail("expected '<=' or '>'");
        }
        int bound = integer();
        expect(']');
        std::string v = ident();
        expect('.');
        return f_quant(k, v, formula(), bound);
      }
      std::string v = ident();
      expect('.');
      return f_quant(c == 'A' ? Formula::Kind::forall : Formula::Kind::exists, v, formula());
    }
    // atom: relation, function-term equality, or name equality
    std::string n = ident();
    if (eat('(')) {
      std::vector<TermPtr> args;
      args.push_back(term());
      while (eat(',')) args.push_back(term());
      expect(')');
      if (eat('=')) {
        if (args.size() != 1) fail("function term takes one argument");
        return f_eq(t_app(n, args[0]), term());
      }
      return f_rel(n, std::move(args));
    }
    expect('=');
    return f_eq(t_name(n), term());
  }
};

inline FormulaPtr parse_formula(const std::string& text) {
  return FormulaParser(text).parse();
}

}  // namespace fmlab
