#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fmlab/decompose.hpp"
#include "fmlab/delta.hpp"
#include "fmlab/eval.hpp"
#include "fmlab/generators.hpp"
#include "fmlab/partition.hpp"
#include "fmlab/typelab.hpp"

namespace fmlab {

// First candidate (in list order) defining a k-big equivalence relation;
// the partition is re-verified reflexive/symmetric/transitive before use.
inline std::optional<std::pair<FormulaPtr, Partition>> find_big_equivalence(
    const SimpleModel& m, const std::vector<FormulaPtr>& candidates, int k) {
  for (const auto& phi : candidates) {
    auto varset = free_variables(phi, m.vocabulary);
    if (varset.size() != 2) throw InputError("candidate must have exactly 2 free variables");
    std::vector<std::string> vars(varset.begin(), varset.end());
    auto rel = definable_relation(m, phi, vars);
    auto part = partition_from_equivalence(rel, m.universe);
    if (part && is_k_big(*part, k)) return std::make_pair(phi, *part);
  }
  return std::nullopt;
}

struct ConfigurationResult {
  int length = 0;
  std::vector<Tuple> a_seq, b_seq;
  Tuple params;       // matching searches only
  bool exact = true;  // false when the node budget ran out
  long long nodes = 0;
};

namespace detail {

struct PairEvaluator {
  const SimpleModel& m;
  const FormulaPtr& phi;
  std::vector<std::string> xvars, yvars, zvars;
  Env env;

  PairEvaluator(const SimpleModel& model, const FormulaPtr& f, std::vector<std::string> xs,
                std::vector<std::string> ys, std::vector<std::string> zs = {})
      : m(model), phi(f), xvars(std::move(xs)), yvars(std::move(ys)), zvars(std::move(zs)) {
    auto free = free_variables(phi, m.vocabulary);
    std::set<std::string> declared;
    for (const auto& v : xvars) declared.insert(v);
    for (const auto& v : yvars) declared.insert(v);
    for (const auto& v : zvars) declared.insert(v);
    for (const auto& v : free)
      if (!declared.count(v)) throw InputError("unexpected free variable '" + v + "'");
    for (const auto& v : xvars) env.stack.emplace_back(v, 0);
    for (const auto& v : yvars) env.stack.emplace_back(v, 0);
    for (const auto& v : zvars) env.stack.emplace_back(v, 0);
  }

  bool sat(const Tuple& a, const Tuple& b, const Tuple& c = {}) {
    for (std::size_t i = 0; i < a.size(); ++i) env.stack[i].second = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) env.stack[xvars.size() + i].second = b[i];
    for (std::size_t i = 0; i < c.size(); ++i)
      env.stack[xvars.size() + yvars.size() + i].second = c[i];
    return eval(m, phi, env);
  }
};

}  // namespace detail

// Longest staircase: sequences a_0..a_{L-1}, b_0..b_{L-1} with
// phi(a_i, b_j) <-> i <= j. Backtracking, lexicographic candidate order;
// results under budget are exact, otherwise lower bounds.
inline ConfigurationResult find_order_configuration(const SimpleModel& m, const FormulaPtr& phi,
                                                    std::vector<std::string> xvars,
                                                    std::vector<std::string> yvars, int max_len,
                                                    long long budget = 10'000'000) {
  detail::PairEvaluator ev(m, phi, std::move(xvars), std::move(yvars));
  ConfigurationResult res;
  std::vector<Tuple> as, bs;

  auto record = [&]() {
    if ((int)as.size() > res.length) {
      res.length = (int)as.size();
      res.a_seq = as;
      res.b_seq = bs;
    }
  };

  // extend with (a, b): phi(a,b), ~phi(a, b_j) for old j, phi(a_i, b) for old i
  auto dfs = [&](auto&& self) -> void {
    record();
    if ((int)as.size() >= max_len || res.length >= max_len || !res.exact) return;
    for_each_tuple(m.universe.size, (int)ev.xvars.size(), [&](const Tuple& a) {
      if (!res.exact || res.length >= max_len) return;
      for_each_tuple(m.universe.size, (int)ev.yvars.size(), [&](const Tuple& b) {
        if (!res.exact || res.length >= max_len) return;
        if (++res.nodes > budget) {
          res.exact = false;
          return;
        }
        if (!ev.sat(a, b)) return;
        for (const auto& bj : bs)
          if (ev.sat(a, bj)) return;
        for (const auto& ai : as)
          if (!ev.sat(ai, b)) return;
        as.push_back(a);
        bs.push_back(b);
        self(self);
        as.pop_back();
        bs.pop_back();
      });
    });
  };
  dfs(dfs);
  return res;
}

// Longest diagonal at a single parameter point: distinct a's and b's with
// phi(a_i, b_j, params) <-> i = j. Parameter tuples scanned lexicographically.
inline ConfigurationResult find_matching_configuration(const SimpleModel& m,
                                                       const FormulaPtr& phi,
                                                       std::vector<std::string> zvars,
                                                       int max_len,
                                                       long long budget = 10'000'000) {
  detail::PairEvaluator ev(m, phi, {"x"}, {"y"}, std::move(zvars));
  ConfigurationResult res;
  std::vector<Tuple> as, bs;
  Tuple current_params;

  auto record = [&]() {
    if ((int)as.size() > res.length) {
      res.length = (int)as.size();
      res.a_seq = as;
      res.b_seq = bs;
      res.params = current_params;
    }
  };

  auto dfs = [&](auto&& self) -> void {
    record();
    if ((int)as.size() >= max_len || res.length >= max_len || !res.exact) return;
    for (int a = 0; a < m.universe.size; ++a) {
      for (int b = 0; b < m.universe.size; ++b) {
        if (!res.exact || res.length >= max_len) return;
        if (++res.nodes > budget) {
          res.exact = false;
          return;
        }
        Tuple at{a}, bt{b};
        if (!ev.sat(at, bt, current_params)) continue;
        bool ok = true;
        for (const auto& bj : bs)
          if (ev.sat(at, bj, current_params)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        for (const auto& ai : as)
          if (ev.sat(ai, bt, current_params)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        as.push_back(at);
        bs.push_back(bt);
        self(self);
        as.pop_back();
        bs.pop_back();
      }
    }
  };

  for_each_tuple(m.universe.size, (int)ev.zvars.size(), [&](const Tuple& c) {
    if (!res.exact || res.length >= max_len) return;
    current_params = c;
    as.clear();
    bs.clear();
    dfs(dfs);
  });
  return res;
}

// Multi-level variant: L levels, each with its own parameter point and an
// L-length diagonal, where every earlier level's pairs take one constant
// truth value at each later level's parameters.
struct LeveledConfiguration {
  int levels = 0;
  std::vector<Tuple> params;                // one per level
  std::vector<std::vector<int>> a_seqs, b_seqs;
  bool exact = true;
  long long nodes = 0;
};

inline LeveledConfiguration find_matching_levels(const SimpleModel& m, const FormulaPtr& phi,
                                                 std::vector<std::string> zvars, int max_len,
                                                 long long budget = 10'000'000) {
  detail::PairEvaluator ev(m, phi, {"x"}, {"y"}, std::move(zvars));
  LeveledConfiguration best;
  long long nodes = 0;
  bool exact = true;

  // one level: an L-diagonal at params `c`, constant against earlier levels
  std::vector<Tuple> level_params;
  std::vector<std::vector<int>> level_as, level_bs;

  auto constant_across = [&](const Tuple& c) {
    for (std::size_t l1 = 0; l1 < level_as.size(); ++l1) {
      bool first = true, val = false;
      for (int a : level_as[l1])
        for (int b : level_bs[l1]) {
          bool v = ev.sat({a}, {b}, c);
          if (first) {
            val = v;
            first = false;
          } else if (v != val) {
            return false;
          }
        }
    }
    return true;
  };

  auto try_levels = [&](int target) -> bool {
    level_params.clear();
    level_as.clear();
    level_bs.clear();
    std::vector<int> as, bs;
    auto build_pairs = [&](auto&& self, const Tuple& c) -> bool {
      if ((int)as.size() == target) return true;
      for (int a = 0; a < m.universe.size; ++a)
        for (int b = 0; b < m.universe.size; ++b) {
          if (++nodes > budget) {
            exact = false;
            return false;
          }
          if (!ev.sat({a}, {b}, c)) continue;
          bool ok = true;
          for (int bj : bs)
            if (ev.sat({a}, {bj}, c)) {
              ok = false;
              break;
            }
          if (ok)
            for (int ai : as)
              if (ev.sat({ai}, {b}, c)) {
                ok = false;
                break;
              }
          if (!ok) continue;
          as.push_back(a);
          bs.push_back(b);
          if (self(self, c)) return true;
          as.pop_back();
          bs.pop_back();
        }
      return false;
    };
    auto add_level = [&](auto&& self) -> bool {
      if ((int)level_params.size() == target) return true;
      bool found = false;
      for_each_tuple(m.universe.size, (int)ev.zvars.size(), [&](const Tuple& c) {
        if (found || !exact) return;
        if (!constant_across(c)) return;
        as.clear();
        bs.clear();
        if (!build_pairs(build_pairs, c)) return;
        level_params.push_back(c);
        level_as.push_back(as);
        level_bs.push_back(bs);
        if (self(self)) {
          found = true;
          return;
        }
        level_params.pop_back();
        level_as.pop_back();
        level_bs.pop_back();
      });
      return found;
    };
    return add_level(add_level);
  };

  for (int target = 1; target <= max_len && exact; ++target) {
    if (!try_levels(target)) break;
    best.levels = target;
    best.params = level_params;
    best.a_seqs = level_as;
    best.b_seqs = level_bs;
  }
  best.exact = exact;
  best.nodes = nodes;
  return best;
}

// Family of instances for the trend probe: generator-built or file-loaded,
// with size-dependent lambda expressions ("sqrt", "log", or a constant).
struct FamilyInstance {
  std::string label;
  std::optional<GeneratorSpec> generator;
  int size = 0;
  std::optional<SimpleModel> model;  // file-loaded instances
  std::optional<int> lambda0_override;
};

struct FamilyDescriptor {
  std::vector<FamilyInstance> instances;
  std::string lambda0_expr = "sqrt";
  std::string lambda1_expr = "sqrt";
  std::uint64_t seed = 0;
};

inline int eval_lambda_expr(const std::string& expr, int n) {
  if (expr == "sqrt") return ceil_sqrt(n);
  if (expr == "log") return ceil_log2(n);
  for (char c : expr)
    if (!std::isdigit((unsigned char)c)) throw InputError("bad lambda expression '" + expr + "'");
  return std::stoi(expr);
}

struct ProbeInstanceRecord {
  std::string label;
  int size = 0;
  int lambda0 = 0;
  KDeltaResult k;       // k is a lower bound: only the bare model is examined
  bool decomposed = false;
  int decomposition_k = 0;
  int a_star_size = 0;
  int atom_count = 0;
  std::string error;
};

struct ProbeReport {
  std::vector<ProbeInstanceRecord> records;
  std::string verdict;  // "bounded" | "growing" | "inconclusive"
};

// Artifact policy, not derived from any bound: growing needs strictly
// increasing k over the top three sizes; bounded needs the maximum attained
// at least twice and not only at the largest size.
inline std::string probe_verdict(const std::vector<int>& sizes, const std::vector<int>& ks) {
  if (ks.empty()) return "inconclusive";
  int m = (int)ks.size();
  if (m >= 3 && ks[m - 1] > ks[m - 2] && ks[m - 2] > ks[m - 3]) return "growing";
  int kmax = *std::max_element(ks.begin(), ks.end());
  int attained = (int)std::count(ks.begin(), ks.end(), kmax);
  int largest_size = *std::max_element(sizes.begin(), sizes.end());
  bool only_at_largest = true;
  for (int i = 0; i < m; ++i)
    if (ks[i] == kmax && sizes[i] != largest_size) only_at_largest = false;
  if (attained >= 2 && !only_at_largest) return "bounded";
  return "inconclusive";
}

// Per-instance k over the given member set plus auto-decomposition stats;
// failures are recorded and the probe continues.
inline ProbeReport dichotomy_probe(const FamilyDescriptor& fam, const DeltaSet& d,
                                   long long k_budget = 2'000'000) {
  ProbeReport rep;
  int prev_gen_size = 0;
  for (std::size_t idx = 0; idx < fam.instances.size(); ++idx) {
    const auto& inst = fam.instances[idx];
    ProbeInstanceRecord rec;
    rec.label = inst.label;
    try {
      SimpleModel m;
      if (inst.model) {
        m = *inst.model;
      } else if (inst.generator) {
        if (inst.size <= prev_gen_size)
          throw InputError("generated sizes must be strictly increasing");
        prev_gen_size = inst.size;
        std::uint64_t s = fam.seed;
        std::uint64_t mix = s + idx + 1;
        m = model_of_relation(inst.size, "r", generate(*inst.generator, inst.size, splitmix64(mix)));
      } else {
        throw InputError("instance has neither generator nor model");
      }
      rec.size = m.universe.size;
      rec.lambda0 = inst.lambda0_override ? *inst.lambda0_override
                                          : eval_lambda_expr(fam.lambda0_expr, rec.size);
      rec.k = k_delta(m, d, std::min(rec.lambda0, rec.size), k_budget);
      auto rit = m.relation_values.find("r");
      if (rit != m.relation_values.end() && rit->second.arity == 2) {
        auto ar = auto_decompose(m.universe, rit->second);
        rec.decomposed = ar.verification.exact;
        rec.decomposition_k = ar.k_final;
        rec.a_star_size = ar.decomposition.stats.a_star_size;
        rec.atom_count = ar.decomposition.stats.atom_count;
      }
    } catch (const Error& e) {
      rec.error = e.what();
    }
    rep.records.push_back(std::move(rec));
  }
  std::vector<int> sizes, ks;
  for (const auto& r : rep.records)
    if (r.error.empty()) {
      sizes.push_back(r.size);
      ks.push_back(r.k.k);
    }
  rep.verdict = probe_verdict(sizes, ks);
  return rep;
}

}  // namespace fmlab
