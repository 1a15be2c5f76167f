#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "fmlab/error.hpp"
#include "fmlab/structures.hpp"

namespace fmlab {

// Terms: bare name (variable or constant symbol, resolved against the model
// at evaluation time) or a unary function application. Nesting is allowed by
// the grammar; consumers that forbid composition enforce it themselves.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { name, apply };
  Kind kind;
  std::string symbol;
  TermPtr arg;  // apply only
};

inline TermPtr t_name(std::string n) {
  return std::make_shared<Term>(Term{Term::Kind::name, std::move(n), nullptr});
}
inline TermPtr t_app(std::string f, TermPtr arg) {
  return std::make_shared<Term>(Term{Term::Kind::apply, std::move(f), std::move(arg)});
}

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind {
    rel,
    eq,
    neg,
    conj,
    disj,
    impl,
    iff,
    forall,
    exists,
    count_at_most,   // E[<=k] v. body
    count_more_than  // E[>k] v. body
  };
  Kind kind;
  std::string symbol;          // relation name, or bound variable
  std::vector<TermPtr> terms;  // rel arguments; eq stores {lhs, rhs}
  FormulaPtr left, right;      // binary children; quantifier body in left
  int bound = 0;               // counting threshold
};

inline FormulaPtr f_rel(std::string name, std::vector<TermPtr> args) {
  return std::make_shared<Formula>(
      Formula{Formula::Kind::rel, std::move(name), std::move(args), nullptr, nullptr, 0});
}
inline FormulaPtr f_eq(TermPtr l, TermPtr r) {
  return std::make_shared<Formula>(
      Formula{Formula::Kind::eq, "", {std::move(l), std::move(r)}, nullptr, nullptr, 0});
}
inline FormulaPtr f_not(FormulaPtr f) {
  return std::make_shared<Formula>(
      Formula{Formula::Kind::neg, "", {}, std::move(f), nullptr, 0});
}
inline FormulaPtr f_bin(Formula::Kind k, FormulaPtr l, FormulaPtr r) {
  return std::make_shared<Formula>(Formula{k, "", {}, std::move(l), std::move(r), 0});
}
inline FormulaPtr f_and(FormulaPtr l, FormulaPtr r) {
  return f_bin(Formula::Kind::conj, std::move(l), std::move(r));
}
inline FormulaPtr f_or(FormulaPtr l, FormulaPtr r) {
  return f_bin(Formula::Kind::disj, std::move(l), std::move(r));
}
inline FormulaPtr f_imp(FormulaPtr l, FormulaPtr r) {
  return f_bin(Formula::Kind::impl, std::move(l), std::move(r));
}
inline FormulaPtr f_iff(FormulaPtr l, FormulaPtr r) {
  return f_bin(Formula::Kind::iff, std::move(l), std::move(r));
}
inline FormulaPtr f_quant(Formula::Kind k, std::string var, FormulaPtr body, int bound = 0) {
  return std::make_shared<Formula>(
      Formula{k, std::move(var), {}, std::move(body), nullptr, bound});
}
inline FormulaPtr f_forall(std::string v, FormulaPtr b) {
  return f_quant(Formula::Kind::forall, std::move(v), std::move(b));
}
inline FormulaPtr f_exists(std::string v, FormulaPtr b) {
  return f_quant(Formula::Kind::exists, std::move(v), std::move(b));
}
inline FormulaPtr f_count_le(int k, std::string v, FormulaPtr b) {
  return f_quant(Formula::Kind::count_at_most, std::move(v), std::move(b), k);
}
inline FormulaPtr f_count_gt(int k, std::string v, FormulaPtr b) {
  return f_quant(Formula::Kind::count_more_than, std::move(v), std::move(b), k);
}

inline FormulaPtr f_true() { return f_eq(t_name("x"), t_name("x")); }         // x=x
inline FormulaPtr f_false() { return f_not(f_true()); }                       // ~(x=x)

// Left fold; empty conjunction is x=x, empty disjunction is ~(x=x).
inline FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_true();
  FormulaPtr acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = f_and(acc, fs[i]);
  return acc;
}
inline FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_false();
  FormulaPtr acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = f_or(acc, fs[i]);
  return acc;
}

inline std::string to_text(const TermPtr& t) {
  if (t->kind == Term::Kind::name) return t->symbol;
  return t->symbol + "(" + to_text(t->arg) + ")";
}

inline std::string to_text(const FormulaPtr& f) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::rel: {
      std::string s = f->symbol + "(";
      for (std::size_t i = 0; i < f->terms.size(); ++i) {
        if (i) s += ",";
        s += to_text(f->terms[i]);
      }
      return s + ")";
    }
    case K::eq:
      return to_text(f->terms[0]) + "=" + to_text(f->terms[1]);
    case K::neg:
      return "~" + to_text(f->left);
    case K::conj:
      return "(" + to_text(f->left) + " & " + to_text(f->right) + ")";
    case K::disj:
      return "(" + to_text(f->left) + " | " + to_text(f->right) + ")";
    case K::impl:
      return "(" + to_text(f->left) + " -> " + to_text(f->right) + ")";
    case K::iff:
      return "(" + to_text(f->left) + " <-> " + to_text(f->right) + ")";
    case K::forall:
      return "A " + f->symbol + ". " + to_text(f->left);
    case K::exists:
      return "E " + f->symbol + ". " + to_text(f->left);
    case K::count_at_most:
      return "E[<=" + std::to_string(f->bound) + "] " + f->symbol + ". " + to_text(f->left);
    case K::count_more_than:
      return "E[>" + std::to_string(f->bound) + "] " + f->symbol + ". " + to_text(f->left);
  }
  return "";
}

namespace detail {
inline void term_names(const TermPtr& t, std::set<std::string>& bare,
                       std::set<std::string>& funcs) {
  if (t->kind == Term::Kind::name) {
    bare.insert(t->symbol);
  } else {
    funcs.insert(t->symbol);
    term_names(t->arg, bare, funcs);
  }
}
inline void collect_names(const FormulaPtr& f, const std::set<std::string>& bound,
                          std::set<std::string>& bare, std::set<std::string>& rels,
                          std::set<std::string>& funcs, std::set<std::string>& binders) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::rel:
      rels.insert(f->symbol);
      [[fallthrough]];
    case K::eq: {
      std::set<std::string> names;
      for (const auto& t : f->terms) term_names(t, names, funcs);
      for (const auto& n : names)
        if (!bound.count(n)) bare.insert(n);
      return;
    }
    case K::neg:
      collect_names(f->left, bound, bare, rels, funcs, binders);
      return;
    case K::conj:
    case K::disj:
    case K::impl:
    case K::iff:
      collect_names(f->left, bound, bare, rels, funcs, binders);
      collect_names(f->right, bound, bare, rels, funcs, binders);
      return;
    default: {  // quantifiers
      binders.insert(f->symbol);
      auto b = bound;
      b.insert(f->symbol);
      collect_names(f->left, b, bare, rels, funcs, binders);
      return;
    }
  }
}
}  // namespace detail

// Bare names not captured by a quantifier: variables or constant symbols,
// depending on the vocabulary they are later resolved against.
inline std::set<std::string> free_names(const FormulaPtr& f) {
  std::set<std::string> bare, rels, funcs, binders;
  detail::collect_names(f, {}, bare, rels, funcs, binders);
  return bare;
}

inline std::set<std::string> bound_names(const FormulaPtr& f) {
  std::set<std::string> bare, rels, funcs, binders;
  detail::collect_names(f, {}, bare, rels, funcs, binders);
  return binders;
}

// Free variables relative to a vocabulary: free names that are not constants.
inline std::set<std::string> free_variables(const FormulaPtr& f, const SimpleVocabulary& v) {
  std::set<std::string> out;
  for (const auto& n : free_names(f))
    if (!v.has_constant(n)) out.insert(n);
  return out;
}

namespace detail {
inline TermPtr subst_term(const TermPtr& t, const std::map<std::string, TermPtr>& sub) {
  if (t->kind == Term::Kind::name) {
    auto it = sub.find(t->symbol);
    return it == sub.end() ? t : it->second;
  }
  return t_app(t->symbol, subst_term(t->arg, sub));
}
}  // namespace detail

// Substitutes free occurrences of bare names. Quantifiers shadow; substituting
// a term whose names would be captured is an error.
inline FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, TermPtr>& sub) {
  using K = Formula::Kind;
  if (sub.empty()) return f;
  switch (f->kind) {
    case K::rel: {
      std::vector<TermPtr> ts;
      ts.reserve(f->terms.size());
      for (const auto& t : f->terms) ts.push_back(detail::subst_term(t, sub));
      return f_rel(f->symbol, std::move(ts));
    }
    case K::eq:
      return f_eq(detail::subst_term(f->terms[0], sub), detail::subst_term(f->terms[1], sub));
    case K::neg:
      return f_not(substitute(f->left, sub));
    case K::conj:
    case K::disj:
    case K::impl:
    case K::iff:
      return f_bin(f->kind, substitute(f->left, sub), substitute(f->right, sub));
    default: {
      auto inner = sub;
      inner.erase(f->symbol);
      for (const auto& [from, to] : inner) {
        std::set<std::string> names, funcs;
        detail::term_names(to, names, funcs);
        if (names.count(f->symbol))
          throw InputError("substitution would capture variable '" + f->symbol + "'");
      }
      return f_quant(f->kind, f->symbol, substitute(f->left, inner), f->bound);
    }
  }
}

// Renames every bound variable to a fresh name avoiding `avoid`. Keeps the
// formula's extension; used before splicing member formulas into templates.
inline FormulaPtr freshen_bound(const FormulaPtr& f, std::set<std::string>& avoid,
                                int& counter) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::rel:
    case K::eq:
      return f;
    case K::neg:
      return f_not(freshen_bound(f->left, avoid, counter));
    case K::conj:
    case K::disj:
    case K::impl:
    case K::iff:
      return f_bin(f->kind, freshen_bound(f->left, avoid, counter),
                   freshen_bound(f->right, avoid, counter));
    default: {
      std::string fresh;
      do {
        fresh = "u" + std::to_string(counter++);
      } while (avoid.count(fresh));
      avoid.insert(fresh);
      auto body = substitute(f->left, {{f->symbol, t_name(fresh)}});
      return f_quant(f->kind, fresh, freshen_bound(body, avoid, counter), f->bound);
    }
  }
}

inline FormulaPtr freshen_bound(const FormulaPtr& f, std::set<std::string> avoid = {}) {
  auto names = free_names(f);
  avoid.insert(names.begin(), names.end());
  int counter = 0;
  return freshen_bound(f, avoid, counter);
}

}  // namespace fmlab
