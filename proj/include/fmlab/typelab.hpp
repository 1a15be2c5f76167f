#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fmlab/delta.hpp"
#include "fmlab/eval.hpp"
#include "fmlab/partition.hpp"
#include "fmlab/structures.hpp"

namespace fmlab {

// The set of (member index, parameter tuple) pairs a tuple satisfies.
// Parameter tuples range over A^arity including repetitions.
struct TypeFingerprint {
  std::vector<std::pair<int, Tuple>> satisfied;  // sorted

  bool operator==(const TypeFingerprint& o) const { return satisfied == o.satisfied; }
  bool operator<(const TypeFingerprint& o) const { return satisfied < o.satisfied; }
};

inline TypeFingerprint compute_type(const SimpleModel& m, const DeltaSet& d, const Tuple& tuple,
                                    const std::set<int>& a) {
  TypeFingerprint fp;
  std::vector<int> pool(a.begin(), a.end());
  detail::Env env;
  for (int i = 0; i < d.size(); ++i) {
    const auto& mem = d.members[i];
    if (mem.object_arity() != (int)tuple.size()) continue;  // mismatched members are skipped
    env.stack.clear();
    for (int j = 0; j < mem.object_arity(); ++j)
      env.stack.emplace_back(mem.object_vars[j], tuple[j]);
    for (int j = 0; j < mem.param_arity(); ++j) env.stack.emplace_back(mem.param_vars[j], 0);
    for_each_tuple_from(pool, mem.param_arity(), [&](const Tuple& params) {
      for (int j = 0; j < mem.param_arity(); ++j)
        env.stack[mem.object_arity() + j].second = params[j];
      if (detail::eval(m, mem.formula, env)) fp.satisfied.emplace_back(i, params);
    });
  }
  return fp;  // construction order is already canonical (member asc, tuple lex)
}

// E_A: elements grouped by equal fingerprints over parameter set A.
struct TypePartition : Partition {
  std::set<int> parameter_set;
};

inline TypePartition type_partition(const SimpleModel& m, const DeltaSet& d,
                                    const std::set<int>& a) {
  for (const auto& mem : d.members)
    if (mem.object_arity() != 1)
      throw InputError("type partitions need object arity 1 members");
  std::map<TypeFingerprint, std::vector<int>> groups;
  for (int e = 0; e < m.universe.size; ++e) groups[compute_type(m, d, {e}, a)].push_back(e);
  std::vector<std::vector<int>> classes;
  classes.reserve(groups.size());
  for (auto& [fp, cls] : groups) classes.push_back(std::move(cls));
  std::sort(classes.begin(), classes.end(),
            [](const auto& x, const auto& y) { return x[0] < y[0]; });
  TypePartition p;
  p.classes = std::move(classes);
  p.parameter_set = a;
  p.check(m.universe.size);
  return p;
}

struct KDeltaResult {
  int k = 0;
  std::vector<int> witness;  // canonically least A attaining k (size, then lex)
  bool exact = true;         // false when the subset budget ran out
  long long subsets_examined = 0;
};

// Maximal k such that some A with |A| <= lambda0 makes E_A k-big. Exhaustive
// over subsets, enumerated by increasing size and lexicographically within a
// size; the first subset attaining the maximum is the witness.
inline KDeltaResult k_delta(const SimpleModel& m, const DeltaSet& d, int lambda0,
                            long long budget = 2'000'000) {
  if (lambda0 > m.universe.size) throw InputError("lambda0 exceeds universe size");
  KDeltaResult res;
  res.k = 0;
  for (int sz = 0; sz <= lambda0; ++sz) {
    bool within = for_each_subset(m.universe.size, sz, [&](const std::vector<int>& a) {
      if (res.subsets_examined++ >= budget) return false;
      auto part = type_partition(m, d, std::set<int>(a.begin(), a.end()));
      int k = bigness(part);
      if (k > res.k) {
        res.k = k;
        res.witness = a;
      }
      return true;
    });
    if (!within) {
      res.exact = false;
      return res;
    }
  }
  return res;
}

// psi(x1,x2) over d's symbols plus a marker predicate: in any model where the
// marker denotes A, psi defines exactly E_A. One guarded biconditional per
// member, universally closed over its parameter variables.
inline FormulaPtr interpret_equivalence_formula(const DeltaSet& d, const std::string& marker) {
  for (const auto& mem : d.members)
    if (mem.object_arity() != 1)
      throw InputError("equivalence interpretation needs object arity 1 members");
  std::vector<FormulaPtr> conjuncts;
  for (const auto& mem : d.members) {
    std::set<std::string> avoid = {"x1", "x2", marker};
    for (int j = 0; j < mem.param_arity(); ++j) avoid.insert("b" + std::to_string(j));
    FormulaPtr body = freshen_bound(mem.formula, avoid);
    std::map<std::string, TermPtr> to1{{mem.object_vars[0], t_name("x1")}};
    std::map<std::string, TermPtr> to2{{mem.object_vars[0], t_name("x2")}};
    for (int j = 0; j < mem.param_arity(); ++j) {
      auto b = t_name("b" + std::to_string(j));
      to1[mem.param_vars[j]] = b;
      to2[mem.param_vars[j]] = b;
    }
    FormulaPtr agree = f_iff(substitute(body, to1), substitute(body, to2));
    if (mem.param_arity() == 0) {
      conjuncts.push_back(agree);
      continue;
    }
    std::vector<FormulaPtr> guards;
    for (int j = 0; j < mem.param_arity(); ++j)
      guards.push_back(f_rel(marker, {t_name("b" + std::to_string(j))}));
    FormulaPtr f = f_imp(f_and_all(guards), agree);
    for (int j = mem.param_arity() - 1; j >= 0; --j)
      f = f_forall("b" + std::to_string(j), f);
    conjuncts.push_back(f);
  }
  return f_and_all(conjuncts);
}

}  // namespace fmlab
