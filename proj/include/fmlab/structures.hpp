#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fmlab/error.hpp"
#include "fmlab/util.hpp"

namespace fmlab {

struct Universe {
  int size = 1;  // elements are 0..size-1

  bool contains(int e) const { return e >= 0 && e < size; }
};

using Tuple = std::vector<int>;

// Finite n-place relation; tuples kept sorted (std::set is lexicographic).
struct RelationTable {
  int arity = 0;
  std::set<Tuple> tuples;

  RelationTable() = default;
  RelationTable(int n, std::set<Tuple> ts) : arity(n), tuples(std::move(ts)) {
    for (const auto& t : tuples)
      if ((int)t.size() != arity) throw InputError("tuple length does not match arity");
  }

  bool contains(const Tuple& t) const { return tuples.count(t) != 0; }
  bool in_range(const Universe& u) const {
    for (const auto& t : tuples)
      for (int e : t)
        if (!u.contains(e)) return false;
    return true;
  }
};

// Finite map element -> element. Functional by representation; injectivity is
// a checked property so that invalid inputs can be reported, not just rejected.
struct PartialInjection {
  std::map<int, int> pairs;

  bool is_injective() const {
    std::set<int> seen;
    for (auto [s, t] : pairs)
      if (!seen.insert(t).second) return false;
    return true;
  }
  std::optional<int> apply(int x) const {
    auto it = pairs.find(x);
    if (it == pairs.end()) return std::nullopt;
    return it->second;
  }
  bool in_range(const Universe& u) const {
    for (auto [s, t] : pairs)
      if (!u.contains(s) || !u.contains(t)) return false;
    return true;
  }
};

struct SimpleVocabulary {
  std::vector<std::string> constants;
  std::vector<std::string> unary_predicates;
  std::vector<std::string> unary_functions;
  std::vector<std::pair<std::string, int>> relation_symbols;

  bool has_constant(const std::string& n) const {
    return std::find(constants.begin(), constants.end(), n) != constants.end();
  }
  bool has_predicate(const std::string& n) const {
    return std::find(unary_predicates.begin(), unary_predicates.end(), n) !=
           unary_predicates.end();
  }
  bool has_function(const std::string& n) const {
    return std::find(unary_functions.begin(), unary_functions.end(), n) !=
           unary_functions.end();
  }
  std::optional<int> relation_arity(const std::string& n) const {
    for (const auto& [name, ar] : relation_symbols)
      if (name == n) return ar;
    return std::nullopt;
  }

  // Names must be valid identifiers and pairwise distinct across all kinds.
  void check() const {
    std::set<std::string> seen;
    auto add = [&](const std::string& n) {
      if (!is_identifier(n)) throw InputError("bad symbol name: '" + n + "'");
      if (!seen.insert(n).second) throw InputError("duplicate symbol name: '" + n + "'");
    };
    for (const auto& n : constants) add(n);
    for (const auto& n : unary_predicates) add(n);
    for (const auto& n : unary_functions) add(n);
    for (const auto& [n, ar] : relation_symbols) {
      add(n);
      if (ar < 0) throw InputError("negative relation arity for '" + n + "'");
    }
  }
};

struct SimpleModel {
  Universe universe;
  SimpleVocabulary vocabulary;
  std::map<std::string, int> constant_values;
  std::map<std::string, std::set<int>> predicate_values;
  std::map<std::string, PartialInjection> function_values;
  std::map<std::string, RelationTable> relation_values;

  // Every symbol interpreted, all values inside the universe.
  void check() const {
    vocabulary.check();
    for (const auto& n : vocabulary.constants) {
      auto it = constant_values.find(n);
      if (it == constant_values.end()) throw InputError("constant '" + n + "' uninterpreted");
      if (!universe.contains(it->second)) throw InputError("constant '" + n + "' out of range");
    }
    for (const auto& n : vocabulary.unary_predicates) {
      auto it = predicate_values.find(n);
      if (it == predicate_values.end()) throw InputError("predicate '" + n + "' uninterpreted");
      for (int e : it->second)
        if (!universe.contains(e)) throw InputError("predicate '" + n + "' out of range");
    }
    for (const auto& n : vocabulary.unary_functions) {
      auto it = function_values.find(n);
      if (it == function_values.end()) throw InputError("function '" + n + "' uninterpreted");
      if (!it->second.in_range(universe)) throw InputError("function '" + n + "' out of range");
    }
    for (const auto& [n, ar] : vocabulary.relation_symbols) {
      auto it = relation_values.find(n);
      if (it == relation_values.end()) throw InputError("relation '" + n + "' uninterpreted");
      if (it->second.arity != ar) throw InputError("relation '" + n + "' arity mismatch");
      if (!it->second.in_range(universe)) throw InputError("relation '" + n + "' out of range");
    }
  }

  SimpleModel with_predicate(const std::string& name, std::set<int> elems) const {
    SimpleModel m = *this;
    if (!m.vocabulary.has_predicate(name)) m.vocabulary.unary_predicates.push_back(name);
    m.predicate_values[name] = std::move(elems);
    m.check();
    return m;
  }
  SimpleModel with_constant(const std::string& name, int value) const {
    SimpleModel m = *this;
    if (!m.vocabulary.has_constant(name)) m.vocabulary.constants.push_back(name);
    m.constant_values[name] = value;
    m.check();
    return m;
  }
};

// Convenience: a model whose only symbol is one relation (usually "r").
inline SimpleModel model_of_relation(int universe_size, const std::string& name,
                                     const RelationTable& r) {
  SimpleModel m;
  m.universe.size = universe_size;
  m.vocabulary.relation_symbols.emplace_back(name, r.arity);
  m.relation_values[name] = r;
  m.check();
  return m;
}

struct AnalysisParams {
  int lambda0 = 0;
  int lambda1 = 0;
  int k_threshold = 1;
  int k2_threshold = 1;

  static AnalysisParams defaults_for(const Universe& u) {
    AnalysisParams p;
    p.lambda0 = p.lambda1 = ceil_sqrt(u.size);
    return p;
  }
};

struct Violation {
  std::string symbol;
  std::string kind;  // "predicate_size" | "function_domain_size" | "not_injective" | "out_of_range"
  std::string detail;
};

// Checks the size discipline: predicates of size <= lambda0, functions that
// are partial injections with domain <= lambda1, all values in range.
// Violations are data, not failures.
inline std::vector<Violation> validate_simple_model(const SimpleModel& m,
                                                    const AnalysisParams& p) {
  std::vector<Violation> out;
  for (const auto& n : m.vocabulary.unary_predicates) {
    const auto& v = m.predicate_values.at(n);
    if ((int)v.size() > p.lambda0)
      out.push_back({n, "predicate_size",
                     "size " + std::to_string(v.size()) + " > lambda0 " +
                         std::to_string(p.lambda0)});
    for (int e : v)
      if (!m.universe.contains(e)) {
        out.push_back({n, "out_of_range", "element " + std::to_string(e)});
        break;
      }
  }
  for (const auto& n : m.vocabulary.unary_functions) {
    const auto& f = m.function_values.at(n);
    if ((int)f.pairs.size() > p.lambda1)
      out.push_back({n, "function_domain_size",
                     "domain " + std::to_string(f.pairs.size()) + " > lambda1 " +
                         std::to_string(p.lambda1)});
    if (!f.is_injective()) out.push_back({n, "not_injective", "repeated target"});
    if (!f.in_range(m.universe)) out.push_back({n, "out_of_range", "pair outside universe"});
  }
  for (const auto& [n, v] : m.constant_values)
    if (!m.universe.contains(v)) out.push_back({n, "out_of_range", "constant value"});
  return out;
}

inline bool is_permutation(const std::vector<int>& perm, const Universe& u) {
  if ((int)perm.size() != u.size) return false;
  std::vector<bool> seen(u.size, false);
  for (int v : perm) {
    if (!u.contains(v) || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

inline RelationTable apply_permutation(const RelationTable& r, const std::vector<int>& perm) {
  Universe u{(int)perm.size()};
  if (!is_permutation(perm, u)) throw InputError("not a permutation");
  std::set<Tuple> out;
  for (const auto& t : r.tuples) {
    Tuple s(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) s[i] = perm[t[i]];
    out.insert(std::move(s));
  }
  return RelationTable(r.arity, std::move(out));
}

// Exhaustive search for a permutation mapping r1 onto r2; returns the
// lexicographically least witness, or nullopt. Desk scale only.
inline std::optional<std::vector<int>> is_isomorphic_copy(const RelationTable& r1,
                                                          const RelationTable& r2,
                                                          const Universe& u,
                                                          int search_limit = 10) {
  if (r1.arity != r2.arity) throw InputError("arity mismatch");
  if (u.size > search_limit) throw BudgetError("search limit exceeded");
  if (r1.tuples.size() != r2.tuples.size()) return std::nullopt;
  std::vector<int> perm(u.size);
  for (int i = 0; i < u.size; ++i) perm[i] = i;
  do {
    bool ok = true;
    for (const auto& t : r1.tuples) {
      Tuple s(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) s[i] = perm[t[i]];
      if (!r2.contains(s)) {
        ok = false;
        break;
      }
    }
    if (ok) return perm;  // equal cardinality makes "into" equal "onto"
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace fmlab
