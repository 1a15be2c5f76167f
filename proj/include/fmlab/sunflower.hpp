#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fmlab/eval.hpp"
#include "fmlab/formula.hpp"
#include "fmlab/structures.hpp"

namespace fmlab {

// Coordinate positions are either constant across the chosen subsequence
// (with their fixed value) or injective across it. Positions are arbitrary
// sets, not a constant prefix: extraction cannot reorder coordinates.
struct DeltaPattern {
  std::map<int, int> constant_positions;  // position -> value
  std::set<int> injective_positions;

  bool holds_on(const std::vector<Tuple>& subseq) const {
    for (const auto& [pos, val] : constant_positions)
      for (const auto& t : subseq)
        if (t[pos] != val) return false;
    for (int pos : injective_positions) {
      std::set<int> seen;
      for (const auto& t : subseq)
        if (!seen.insert(t[pos]).second) return false;
    }
    if (!subseq.empty()) {
      std::size_t n = subseq[0].size();
      if (constant_positions.size() + injective_positions.size() != n) return false;
    }
    return true;
  }
};

// Certified length: g(m) = (m-1)^2 + 1 iterated once per coordinate. Any
// sequence of this length contains an m-tuple delta system (an upper bound on
// the minimal such number, not the minimum itself).
inline long long delta_bound(int n, int m) {
  if (n < 1 || m < 1) throw InputError("delta_bound needs n, m >= 1");
  long long v = m;
  for (int i = 0; i < n; ++i) {
    if (v > 2'000'000) throw InputError("delta bound beyond desk scale");
    v = (v - 1) * (v - 1) + 1;
  }
  return v;
}

// Exact mode, singleton tuples only: the minimal d such that every length-d
// sequence over the alphabet contains an m-member system (m repeats of one
// value or m distinct values). Exhaustive, so tiny scales only.
inline long long delta_bound_exact_min(int m, int alphabet) {
  if (m < 1 || m > 3 || alphabet < 1 || alphabet > 6)
    throw InputError("exact mode covers m <= 3 and alphabets up to 6");
  for (long long d = (m == 1 ? 1 : m);; ++d) {
    long long total = 1;
    for (long long i = 0; i < d; ++i) {
      total *= alphabet;
      if (total > 4'000'000) throw InputError("exact mode search space too large");
    }
    bool all_have = true;
    for (long long code = 0; code < total && all_have; ++code) {
      std::vector<int> counts(alphabet, 0);
      long long v = code;
      int distinct = 0, most = 0;
      for (long long i = 0; i < d; ++i) {
        int val = (int)(v % alphabet);
        v /= alphabet;
        if (counts[val]++ == 0) ++distinct;
        most = std::max(most, counts[val]);
      }
      if (most < m && distinct < m) all_have = false;
    }
    if (all_have) return d;
  }
}

struct ExtractionResult {
  std::vector<int> indices;  // increasing positions into the input sequence
  DeltaPattern pattern;
  std::map<Tuple, int> multiplicity;  // input tuples occurring more than once
};

// Coordinate-by-coordinate pigeonhole refinement. At or above
// delta_bound(n,m) in length this always returns >= m members; below it,
// best effort or nullopt.
inline std::optional<ExtractionResult> extract_delta_system(const std::vector<Tuple>& seq,
                                                            int m) {
  if (m < 1) throw InputError("m must be >= 1");
  if (seq.empty()) return std::nullopt;
  int n = (int)seq[0].size();
  for (const auto& t : seq)
    if ((int)t.size() != n) throw InputError("mixed tuple lengths");

  ExtractionResult res;
  {
    std::map<Tuple, int> counts;
    for (const auto& t : seq) ++counts[t];
    for (const auto& [t, c] : counts)
      if (c > 1) res.multiplicity[t] = c;
  }

  std::vector<int> live(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) live[i] = (int)i;

  for (int pos = 0; pos < n; ++pos) {
    // value -> first index holding it, plus occurrence counts
    std::map<int, int> count;
    for (int i : live) ++count[seq[i][pos]];
    int best_val = -1, best_count = 0;
    for (const auto& [v, c] : count)
      if (c > best_count) {
        best_val = v;
        best_count = c;
      }
    long long need = 1;
    {  // members still needed after this coordinate: g^(remaining)(m)
      need = m;
      for (int rest = n - 1 - pos; rest > 0; --rest) need = (need - 1) * (need - 1) + 1;
    }
    bool constant_ok = best_count >= need;
    bool injective_ok = (long long)count.size() >= need;
    bool pick_constant;
    if (constant_ok || injective_ok) {
      pick_constant = constant_ok;  // ties to constant; deterministic
    } else {
      pick_constant = best_count >= (long long)count.size();  // best effort
    }
    std::vector<int> next;
    if (pick_constant) {
      for (int i : live)
        if (seq[i][pos] == best_val) next.push_back(i);
      res.pattern.constant_positions[pos] = best_val;
    } else {
      std::set<int> used;
      for (int i : live)
        if (used.insert(seq[i][pos]).second) next.push_back(i);
      res.pattern.injective_positions.insert(pos);
    }
    live = std::move(next);
  }

  if ((int)live.size() < m) return std::nullopt;
  res.indices = live;
  std::vector<Tuple> chosen;
  for (int i : live) chosen.push_back(seq[i]);
  if (!res.pattern.holds_on(chosen)) throw Error("extraction produced an invalid pattern");
  return res;
}

// Model + formula + codes such that theta(b, a0..a{n-1}) holds exactly at the
// coded members. The formula depends only on n; the model encodes which
// positions are constant (s0 over the anchor constants), the codes (s1), the
// constant values (c_t) and the pivot-to-position maps (f_t).
struct CodingBundle {
  SimpleModel model;
  FormulaPtr theta;
  std::vector<int> codes;
};

namespace detail {

inline std::string anchor_name(int t) { return "cs" + std::to_string(t); }

// theta(x, y0..y{n-1}) := s1(x) and, per position t:
//   s0(cs_t)                     -> y_t = c_t
//   first non-constant position  -> y_t = x
//   later non-constant positions -> y_t = f_t(x)
// "first non-constant" is expressed through the s0 flags of positions < t.
inline FormulaPtr coding_formula(int n) {
  std::vector<FormulaPtr> parts;
  parts.push_back(f_rel("s1", {t_name("x")}));
  for (int t = 0; t < n; ++t) {
    auto yt = t_name("y" + std::to_string(t));
    auto flag = [&](int j) { return f_rel("s0", {t_name(anchor_name(j))}); };
    FormulaPtr earlier_all_const = f_true();
    for (int j = 0; j < t; ++j)
      earlier_all_const = (j == 0) ? flag(0) : f_and(earlier_all_const, flag(j));
    FormulaPtr is_pivot = (t == 0) ? f_not(flag(0)) : f_and(f_not(flag(t)), earlier_all_const);
    FormulaPtr not_pivot_noncfg =
        (t == 0) ? f_false() : f_and(f_not(flag(t)), f_not(earlier_all_const));
    parts.push_back(f_imp(flag(t), f_eq(yt, t_name("c" + std::to_string(t)))));
    parts.push_back(f_imp(is_pivot, f_eq(yt, t_name("x"))));
    parts.push_back(
        f_imp(not_pivot_noncfg, f_eq(t_app("f" + std::to_string(t), t_name("x")), yt)));
  }
  return f_and_all(parts);
}

}  // namespace detail

inline CodingBundle code_delta_system(const Universe& u, const std::vector<Tuple>& seq,
                                      const DeltaPattern& pat) {
  int n = 0;
  if (!seq.empty()) n = (int)seq[0].size();
  else n = (int)(pat.constant_positions.size() + pat.injective_positions.size());
  if (n < 1) throw InputError("coding needs tuples of positive length");
  if (u.size <= n) throw InputError("universe too small for the anchor constants");
  if (!pat.holds_on(seq)) throw InputError("sequence does not satisfy the pattern");

  CodingBundle b;
  SimpleModel& m = b.model;
  m.universe = u;

  // n+1 distinct anchors; s0 marks the anchors of constant positions.
  std::set<int> s0;
  for (int t = 0; t <= n; ++t) {
    m.vocabulary.constants.push_back(detail::anchor_name(t));
    m.constant_values[detail::anchor_name(t)] = t;
  }
  for (const auto& [pos, val] : pat.constant_positions) s0.insert(pos);

  int pivot = -1;
  for (int t = 0; t < n; ++t)
    if (!s0.count(t)) {
      pivot = t;
      break;
    }

  for (int t = 0; t < n; ++t) {
    std::string cn = "c" + std::to_string(t);
    m.vocabulary.constants.push_back(cn);
    auto it = pat.constant_positions.find(t);
    m.constant_values[cn] = (it != pat.constant_positions.end()) ? it->second : 0;
  }

  std::set<int> s1;
  if (pivot >= 0) {
    for (const auto& t : seq) {
      b.codes.push_back(t[pivot]);
      s1.insert(t[pivot]);
    }
  } else if (!seq.empty()) {
    // all positions constant: a single code stands for the one distinct tuple
    b.codes.assign(seq.size(), 0);
    s1.insert(0);
  }

  for (int t = 0; t < n; ++t) {
    std::string fn = "f" + std::to_string(t);
    m.vocabulary.unary_functions.push_back(fn);
    PartialInjection pi;
    if (pivot >= 0 && t != pivot && !s0.count(t))
      for (const auto& tup : seq) pi.pairs[tup[pivot]] = tup[t];
    m.function_values[fn] = pi;
    if (!pi.is_injective()) throw Error("coding produced a non-injective position map");
  }

  std::set<int> s0_anchors;
  for (int pos : s0) s0_anchors.insert(pos);  // anchor cs_t is interpreted as element t
  m.vocabulary.unary_predicates.push_back("s0");
  m.predicate_values["s0"] = s0_anchors;
  m.vocabulary.unary_predicates.push_back("s1");
  m.predicate_values["s1"] = s1;
  m.check();

  b.theta = detail::coding_formula(n);
  return b;
}

// Exhaustive biconditional check over U^{n+1}:
//   theta(b, a) <-> exists i (b = codes[i] and a = seq[i]).
inline bool verify_coding(const CodingBundle& b, const std::vector<Tuple>& seq) {
  int n = (int)b.model.vocabulary.unary_functions.size();
  std::set<std::pair<int, Tuple>> expected;
  for (std::size_t i = 0; i < seq.size(); ++i) expected.emplace(b.codes[i], seq[i]);

  detail::Env env;
  env.stack.emplace_back("x", 0);
  for (int t = 0; t < n; ++t) env.stack.emplace_back("y" + std::to_string(t), 0);
  bool ok = true;
  std::vector<int> a(n, 0);
  for (int x = 0; x < b.model.universe.size && ok; ++x) {
    env.stack[0].second = x;
    std::fill(a.begin(), a.end(), 0);
    while (ok) {
      for (int t = 0; t < n; ++t) env.stack[t + 1].second = a[t];
      bool holds = detail::eval(b.model, b.theta, env);
      bool should = expected.count({x, a}) != 0;
      if (holds != should) ok = false;
      int i = n - 1;
      while (i >= 0 && a[i] == b.model.universe.size - 1) a[i--] = 0;
      if (i < 0) break;
      ++a[i];
    }
  }
  return ok;
}

}  // namespace fmlab
