#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fmlab/error.hpp"
#include "fmlab/formula.hpp"
#include "fmlab/structures.hpp"

namespace fmlab {

using Assignment = std::map<std::string, int>;

namespace detail {

// Small environment with shadowing; lookup scans from the back.
struct Env {
  std::vector<std::pair<std::string, int>> stack;

  const int* find(const std::string& name) const {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }
};

// nullopt means an undefined partial-function application somewhere inside.
inline std::optional<int> eval_term(const SimpleModel& m, const TermPtr& t, const Env& env) {
  if (t->kind == Term::Kind::name) {
    auto c = m.constant_values.find(t->symbol);
    if (c != m.constant_values.end()) return c->second;
    if (const int* v = env.find(t->symbol)) return *v;
    throw EvalError("unassigned free variable '" + t->symbol + "'");
  }
  auto f = m.function_values.find(t->symbol);
  if (f == m.function_values.end()) throw EvalError("unknown function '" + t->symbol + "'");
  auto inner = eval_term(m, t->arg, env);
  if (!inner) return std::nullopt;
  return f->second.apply(*inner);
}

inline bool eval(const SimpleModel& m, const FormulaPtr& f, Env& env) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::rel: {
      // A unary relation symbol may be a predicate or a declared relation.
      auto pred = m.predicate_values.find(f->symbol);
      if (pred != m.predicate_values.end()) {
        if (f->terms.size() != 1) throw EvalError("predicate '" + f->symbol + "' takes 1 argument");
        auto v = eval_term(m, f->terms[0], env);
        return v && pred->second.count(*v) != 0;
      }
      auto rel = m.relation_values.find(f->symbol);
      if (rel == m.relation_values.end()) throw EvalError("unknown symbol '" + f->symbol + "'");
      if ((int)f->terms.size() != rel->second.arity)
        throw EvalError("arity mismatch for '" + f->symbol + "'");
      Tuple tup(f->terms.size());
      for (std::size_t i = 0; i < f->terms.size(); ++i) {
        auto v = eval_term(m, f->terms[i], env);
        if (!v) return false;  // undefined application falsifies the atom
        tup[i] = *v;
      }
      return rel->second.contains(tup);
    }
    case K::eq: {
      auto l = eval_term(m, f->terms[0], env);
      if (!l) return false;
      auto r = eval_term(m, f->terms[1], env);
      return r && *l == *r;
    }
    case K::neg:
      return !eval(m, f->left, env);
    case K::conj:
      return eval(m, f->left, env) && eval(m, f->right, env);
    case K::disj:
      return eval(m, f->left, env) || eval(m, f->right, env);
    case K::impl:
      return !eval(m, f->left, env) || eval(m, f->right, env);
    case K::iff:
      return eval(m, f->left, env) == eval(m, f->right, env);
    default: {
      if (m.vocabulary.has_constant(f->symbol))
        throw EvalError("bound variable '" + f->symbol + "' shadows a constant");
      env.stack.emplace_back(f->symbol, 0);
      int count = 0;
      bool result = false;
      bool decided = false;
      for (int e = 0; e < m.universe.size && !decided; ++e) {
        env.stack.back().second = e;
        bool b = eval(m, f->left, env);
        switch (f->kind) {
          case K::forall:
            if (!b) {
              result = false;
              decided = true;
            } else {
              result = true;
            }
            break;
          case K::exists:
            if (b) {
              result = true;
              decided = true;
            }
            break;
          case K::count_at_most:
            if (b && ++count > f->bound) {
              result = false;
              decided = true;
            }
            break;
          case K::count_more_than:
            if (b && ++count > f->bound) {
              result = true;
              decided = true;
            }
            break;
          default:
            break;
        }
      }
      if (!decided) {
        if (f->kind == K::forall) result = true;
        if (f->kind == K::count_at_most) result = true;
        if (f->kind == K::count_more_than) result = false;
      }
      env.stack.pop_back();
      return result;
    }
  }
}

}  // namespace detail

// Tarskian truth over a simple model. Counting quantifiers by enumeration;
// atoms touching an undefined function application are false.
inline bool evaluate(const SimpleModel& m, const FormulaPtr& f, const Assignment& a) {
  detail::Env env;
  env.stack.reserve(a.size() + 8);
  for (const auto& [k, v] : a) {
    if (!m.universe.contains(v)) throw EvalError("assignment for '" + k + "' out of range");
    env.stack.emplace_back(k, v);
  }
  return detail::eval(m, f, env);
}

// { tuple : m |= phi(tuple) } with coordinates following `vars`.
inline RelationTable definable_relation(const SimpleModel& m, const FormulaPtr& phi,
                                        const std::vector<std::string>& vars) {
  auto free = free_variables(phi, m.vocabulary);
  for (const auto& v : free)
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw EvalError("free variable '" + v + "' not listed");
  std::set<Tuple> out;
  detail::Env env;
  for (const auto& v : vars) env.stack.emplace_back(v, 0);
  Tuple t(vars.size(), 0);
  bool done = vars.empty() && m.universe.size == 0;
  while (!done) {
    for (std::size_t i = 0; i < vars.size(); ++i) env.stack[i].second = t[i];
    if (detail::eval(m, phi, env)) out.insert(t);
    int i = (int)t.size() - 1;
    while (i >= 0 && t[i] == m.universe.size - 1) t[i--] = 0;
    if (i < 0) break;
    ++t[i];
  }
  return RelationTable((int)vars.size(), std::move(out));
}

}  // namespace fmlab
