#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fmlab/eval.hpp"
#include "fmlab/splitting.hpp"
#include "fmlab/typelab.hpp"

namespace fmlab {

// Signals that the chosen k is too small for this instance; auto mode
// escalates on any of these.
struct MajorityTieError : Error {
  using Error::Error;
};
struct MajorityIdentityError : Error {
  using Error::Error;
};
struct DeterminismError : Error {
  Tuple positive, negative;  // pairs with equal atom types but different r
  DeterminismError(Tuple pos, Tuple neg)
      : Error("atom types do not determine the relation"),
        positive(std::move(pos)),
        negative(std::move(neg)) {}
};

struct DecompositionParams {
  int k = 1;
  int k2 = 1;
  std::optional<std::set<int>> a;  // explicit parameter set; else greedy
};

// Majority votes of big classes: t_values[y][i] is how most of class i
// relates to y, and parts group each class's elements by their vote vector.
struct MajorityTable {
  std::vector<std::vector<int>> big_classes;
  std::vector<std::vector<bool>> t_values;            // [y][i]
  std::vector<std::vector<std::vector<int>>> parts;   // [i][j] -> elements
  std::vector<std::vector<std::vector<bool>>> part_keys;  // [i][j] -> vote vector
};

inline MajorityTable majority_table(const SimpleModel& m, const RelationTable& r,
                                    const std::vector<std::vector<int>>& big_classes) {
  MajorityTable t;
  t.big_classes = big_classes;
  int nu = m.universe.size;
  int i_star = (int)big_classes.size();
  t.t_values.assign(nu, std::vector<bool>(i_star, false));
  for (int y = 0; y < nu; ++y)
    for (int i = 0; i < i_star; ++i) {
      int pos = 0;
      for (int x : big_classes[i]) pos += r.contains({x, y}) ? 1 : 0;
      int neg = (int)big_classes[i].size() - pos;
      if (pos == neg) throw MajorityTieError("class not big enough for strict majority");
      t.t_values[y][i] = pos > neg;
    }
  t.parts.resize(i_star);
  t.part_keys.resize(i_star);
  for (int i = 0; i < i_star; ++i) {
    std::map<std::vector<bool>, std::vector<int>> groups;
    for (int y : big_classes[i]) groups[t.t_values[y]].push_back(y);
    for (auto& [key, elems] : groups) {
      t.part_keys[i].push_back(key);
      t.parts[i].push_back(std::move(elems));
    }
  }
  return t;
}

// Greedy edge coloring of the minority digraph restricted off `excluded`:
// each piece is a partial injection, pieces are disjoint, their union is the
// restriction. Piece count <= max out-degree + max in-degree - 1.
inline std::vector<PartialInjection> color_s_relation(const SRelation& s,
                                                      const std::set<int>& excluded) {
  if (s.n != 1) throw InputError("coloring needs a binary minority relation");
  std::vector<PartialInjection> pieces;
  for (const auto& [x, p] : s.pairs) {  // std::set gives lexicographic edge order
    int y = p[0];
    if (excluded.count(x) || excluded.count(y)) continue;
    bool placed = false;
    for (auto& piece : pieces) {
      bool src_used = piece.pairs.count(x) != 0;
      bool tgt_used = false;
      for (auto [s2, t2] : piece.pairs)
        if (t2 == y) {
          tgt_used = true;
          break;
        }
      if (!src_used && !tgt_used) {
        piece.pairs[x] = y;
        placed = true;
        break;
      }
    }
    if (!placed) {
      PartialInjection pi;
      pi.pairs[x] = y;
      pieces.push_back(std::move(pi));
    }
  }
  return pieces;
}

struct DecompositionStats {
  int k = 0;
  int k2 = 0;
  int l0 = 0;
  int a_size = 0;
  int a_star_size = 0;
  int class_count = 0;       // E_{A*} classes
  int big_class_count = 0;   // majority classes
  int piece_count = 0;
  int atom_count = 0;        // |Phi|
  int realized_types = 0;
  int positive_types = 0;
};

struct Decomposition {
  SimpleModel model;                  // synthesized simple model (no r)
  std::vector<FormulaPtr> atom_basis;  // Phi
  FormulaPtr defining_formula;
  DecompositionStats stats;
  std::set<int> a;
  std::set<int> a_star;
  // symbols feeding the atom basis (selector constants excluded)
  std::vector<std::string> basis_constants, basis_predicates, basis_functions;
  // atom truth vectors realized by pairs, split by r
  std::set<std::vector<bool>> positive_vectors;
  std::set<std::vector<bool>> negative_vectors;
};

inline std::string element_constant_name(int x) { return "a" + std::to_string(x); }

// A = A0 + members of classes of size <= 2k + sources whose minority
// out-degree exceeds 2^{|D|(k+k2)}*k2 + l*.
inline std::set<int> build_a_star(const SimpleModel& m, const DeltaSet& d, const std::set<int>& a,
                                  const DecompositionParams& p) {
  std::set<int> astar = a;
  auto part = type_partition(m, d, a);
  for (const auto& cls : part.classes)
    if ((int)cls.size() <= 2 * p.k) astar.insert(cls.begin(), cls.end());
  long long dd = d.size();
  BigInt lstar = BigInt(p.k) * pow2(dd * p.k + 1);
  BigInt threshold = pow2(dd * (p.k + p.k2)) * p.k2 + lstar;
  auto s = s_relation(m, d, a, p.k, 1);
  for (const auto& [x, deg] : s.out_degrees())
    if (BigInt(deg) > threshold) astar.insert(x);
  return astar;
}

namespace detail {

// Fast atom-vector evaluation against the synthesized model tables. The atom
// basis mirrors this exactly; tests cross-check against the generic evaluator.
struct AtomBasis {
  std::vector<FormulaPtr> atoms;
  // evaluators as (kind, payload) tuples resolved against the model
  enum class Op { x_is_const, y_is_const, pred_x, pred_y, fx_is_y, fy_is_x, fx_is_const, fconst_is_y };
  struct Entry {
    Op op;
    int value = 0;                       // constant element
    const std::set<int>* pred = nullptr;
    const PartialInjection* func = nullptr;
  };
  std::vector<Entry> entries;

  std::vector<bool> vector_for(int x, int y) const {
    std::vector<bool> v(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const Entry& e = entries[i];
      switch (e.op) {
        case Op::x_is_const: v[i] = x == e.value; break;
        case Op::y_is_const: v[i] = y == e.value; break;
        case Op::pred_x: v[i] = e.pred->count(x) != 0; break;
        case Op::pred_y: v[i] = e.pred->count(y) != 0; break;
        case Op::fx_is_y: {
          auto r = e.func->apply(x);
          v[i] = r && *r == y;
          break;
        }
        case Op::fy_is_x: {
          auto r = e.func->apply(y);
          v[i] = r && *r == x;
          break;
        }
        case Op::fx_is_const: {
          auto r = e.func->apply(x);
          v[i] = r && *r == e.value;
          break;
        }
        case Op::fconst_is_y: {
          auto r = e.func->apply(e.value);
          v[i] = r && *r == y;
          break;
        }
      }
    }
    return v;
  }
};

// Atom shapes, in order: x=c, y=c, s(x), s(y), then per function f:
// f(x)=y, f(y)=x, f(x)=c, f(c)=y. Terms stay composition-free.
inline AtomBasis build_atom_basis(const SimpleModel& model,
                                  const std::vector<std::string>& consts,
                                  const std::vector<std::string>& preds,
                                  const std::vector<std::string>& funcs) {
  AtomBasis basis;
  using Op = AtomBasis::Op;
  auto add = [&](FormulaPtr f, AtomBasis::Entry e) {
    basis.atoms.push_back(std::move(f));
    basis.entries.push_back(e);
  };
  for (const auto& c : consts)
    add(f_eq(t_name("x"), t_name(c)), {Op::x_is_const, model.constant_values.at(c), nullptr, nullptr});
  for (const auto& c : consts)
    add(f_eq(t_name("y"), t_name(c)), {Op::y_is_const, model.constant_values.at(c), nullptr, nullptr});
  for (const auto& s : preds)
    add(f_rel(s, {t_name("x")}), {Op::pred_x, 0, &model.predicate_values.at(s), nullptr});
  for (const auto& s : preds)
    add(f_rel(s, {t_name("y")}), {Op::pred_y, 0, &model.predicate_values.at(s), nullptr});
  for (const auto& f : funcs) {
    const auto* fn = &model.function_values.at(f);
    add(f_eq(t_app(f, t_name("x")), t_name("y")), {Op::fx_is_y, 0, nullptr, fn});
    add(f_eq(t_app(f, t_name("y")), t_name("x")), {Op::fy_is_x, 0, nullptr, fn});
    for (const auto& c : consts)
      add(f_eq(t_app(f, t_name("x")), t_name(c)),
          {Op::fx_is_const, model.constant_values.at(c), nullptr, fn});
    for (const auto& c : consts)
      add(f_eq(t_app(f, t_name(c)), t_name("y")),
          {Op::fconst_is_y, model.constant_values.at(c), nullptr, fn});
  }
  return basis;
}

}  // namespace detail

// The binary pipeline: greedy A (unless given), E_A, minority relation, A*,
// class predicates, injection pieces, majority parts; checks that the atom
// types determine r. |U| = 1 degenerates to a direct lookup formula.
inline Decomposition build_simple_decomposition(const Universe& u, const RelationTable& r,
                                                const DecompositionParams& p) {
  if (r.arity != 2) throw InputError("decomposition expects a binary relation");
  if (!r.in_range(u)) throw InputError("relation out of range");
  Decomposition dec;
  dec.stats.k = p.k;
  dec.stats.k2 = p.k2;

  if (u.size == 1) {
    SimpleModel model;
    model.universe = u;
    model.check();
    dec.model = model;
    dec.defining_formula = r.contains({0, 0}) ? f_true() : f_false();
    dec.stats.atom_count = 0;
    return dec;
  }

  SimpleModel m = model_of_relation(u.size, "r", r);
  DeltaSet d;
  d.members.push_back(make_split("r(x,y)", {"x"}, {"y"}));

  std::set<int> a;
  if (p.a) {
    a = *p.a;
  } else {
    auto cert = greedy_splitting_set(m, d, p.k, 1);
    a = cert.a;
    dec.stats.l0 = cert.l0;
  }
  dec.a = a;
  dec.stats.a_size = (int)a.size();

  auto part = type_partition(m, d, a);
  auto s = s_relation(m, d, a, p.k, 1);
  auto astar = build_a_star(m, d, a, p);
  dec.a_star = astar;
  dec.stats.a_star_size = (int)astar.size();

  // Synthesized model: constants for A*, predicates for E_{A*} classes,
  // injection pieces off A*, majority-part predicates over big classes.
  SimpleModel model;
  model.universe = u;
  std::vector<std::string> const_names, pred_names, func_names;
  for (int x : astar) {
    std::string n = element_constant_name(x);
    model.vocabulary.constants.push_back(n);
    model.constant_values[n] = x;
    const_names.push_back(n);
  }

  auto part_star = type_partition(m, d, astar);
  dec.stats.class_count = (int)part_star.classes.size();
  for (int i = 0; i < (int)part_star.classes.size(); ++i) {
    std::string n = "ecls" + std::to_string(i);
    model.vocabulary.unary_predicates.push_back(n);
    model.predicate_values[n] =
        std::set<int>(part_star.classes[i].begin(), part_star.classes[i].end());
    pred_names.push_back(n);
  }

  auto pieces = color_s_relation(s, astar);
  dec.stats.piece_count = (int)pieces.size();
  for (int i = 0; i < (int)pieces.size(); ++i) {
    std::string n = "f" + std::to_string(i);
    model.vocabulary.unary_functions.push_back(n);
    model.function_values[n] = pieces[i];
    func_names.push_back(n);
  }

  std::vector<std::vector<int>> big_classes;
  for (const auto& cls : part.classes) {
    if ((int)cls.size() <= 2 * p.k) continue;
    std::vector<int> off;
    for (int e : cls)
      if (!astar.count(e)) off.push_back(e);
    if (!off.empty()) big_classes.push_back(std::move(off));
  }
  auto mt = majority_table(m, r, big_classes);
  dec.stats.big_class_count = (int)big_classes.size();

  // R(x,y) = t_values[y][i] exactly off the minority relation; failure means
  // the minority threshold k undershoots this instance.
  for (int i = 0; i < (int)big_classes.size(); ++i)
    for (int y = 0; y < u.size; ++y)
      for (int x : big_classes[i]) {
        bool rel = r.contains({x, y});
        bool expect = mt.t_values[y][i];
        if ((rel == expect) != !s.contains(x, {y}))
          throw MajorityIdentityError("majority identity fails at (" + std::to_string(x) + "," +
                                      std::to_string(y) + ")");
      }

  for (int i = 0; i < (int)mt.parts.size(); ++i)
    for (int j = 0; j < (int)mt.parts[i].size(); ++j) {
      std::string n = "part" + std::to_string(i) + "_" + std::to_string(j);
      model.vocabulary.unary_predicates.push_back(n);
      model.predicate_values[n] = std::set<int>(mt.parts[i][j].begin(), mt.parts[i][j].end());
      pred_names.push_back(n);
    }

  model.check();
  auto basis = detail::build_atom_basis(model, const_names, pred_names, func_names);
  dec.model = std::move(model);
  dec.atom_basis = basis.atoms;
  dec.basis_constants = const_names;
  dec.basis_predicates = pred_names;
  dec.basis_functions = func_names;
  dec.stats.atom_count = (int)basis.atoms.size();

  std::optional<std::pair<Tuple, Tuple>> violation;
  std::map<std::vector<bool>, std::pair<Tuple, Tuple>> first_seen;  // vector -> (pos?, neg?)
  for (int x = 0; x < u.size && !violation; ++x)
    for (int y = 0; y < u.size && !violation; ++y) {
      auto v = basis.vector_for(x, y);
      bool rel = r.contains({x, y});
      if (rel) {
        dec.positive_vectors.insert(v);
        if (dec.negative_vectors.count(v)) violation = {{Tuple{x, y}, first_seen[v].second}};
        if (first_seen[v].first.empty()) first_seen[v].first = {x, y};
      } else {
        dec.negative_vectors.insert(v);
        if (dec.positive_vectors.count(v)) violation = {{first_seen[v].first, Tuple{x, y}}};
        if (first_seen[v].second.empty()) first_seen[v].second = {x, y};
      }
    }
  dec.stats.realized_types = (int)(dec.positive_vectors.size() + dec.negative_vectors.size());
  for (const auto& v : dec.positive_vectors)
    if (dec.negative_vectors.count(v)) dec.stats.realized_types -= 1;
  dec.stats.positive_types = (int)dec.positive_vectors.size();
  if (violation) throw DeterminismError(violation->first, violation->second);

  return dec;
}

// chi_D: some positive atom-type vector is satisfied. Conjunction per vector
// in basis order, disjuncts in lexicographic vector order.
inline FormulaPtr positive_types_formula(const std::vector<FormulaPtr>& basis,
                                         const std::set<std::vector<bool>>& vectors) {
  std::vector<FormulaPtr> disjuncts;
  for (const auto& v : vectors) {
    std::vector<FormulaPtr> lits;
    lits.reserve(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
      lits.push_back(v[i] ? basis[i] : f_not(basis[i]));
    disjuncts.push_back(f_and_all(lits));
  }
  return f_or_all(disjuncts);
}

// phi(x,y) := (c_pos = c_true) -> chi_{D}(x,y), with both constants pinned to
// element 0 in this instance's model. Only the realized positive vector set D
// is emitted; the formula defines the same relation on this instance.
inline FormulaPtr synthesize_defining_formula(Decomposition& dec, const RelationTable& r) {
  if (dec.model.universe.size == 1) return dec.defining_formula;
  // Recompute the realized positive vectors from r rather than trusting the
  // cached ones; a clash here carries its witness pair.
  auto basis = detail::build_atom_basis(dec.model, dec.basis_constants, dec.basis_predicates,
                                        dec.basis_functions);
  std::map<std::vector<bool>, Tuple> pos_seen, neg_seen;
  for (int x = 0; x < dec.model.universe.size; ++x)
    for (int y = 0; y < dec.model.universe.size; ++y) {
      auto v = basis.vector_for(x, y);
      if (r.contains({x, y})) {
        if (neg_seen.count(v)) throw DeterminismError({x, y}, neg_seen[v]);
        pos_seen.emplace(std::move(v), Tuple{x, y});
      } else {
        if (pos_seen.count(v)) throw DeterminismError(pos_seen[v], {x, y});
        neg_seen.emplace(std::move(v), Tuple{x, y});
      }
    }
  std::set<std::vector<bool>> positives;
  for (const auto& [v, w] : pos_seen) positives.insert(v);
  dec.positive_vectors = positives;
  auto chi = positive_types_formula(dec.atom_basis, positives);
  dec.model = dec.model.with_constant("ctrue", 0).with_constant("cpos", 0);
  dec.defining_formula = f_imp(f_eq(t_name("cpos"), t_name("ctrue")), chi);
  return dec.defining_formula;
}

// Single-exponential uniform variant: one disjunct per possible atom-type
// vector, each guarded by its own selector constant; selectors equal c_true
// exactly for realized positive vectors. Emitted only for small bases.
inline FormulaPtr uniform_defining_formula(Decomposition& dec) {
  int n = (int)dec.atom_basis.size();
  if (n > 16) throw InputError("atom basis too large for the uniform form");
  if (dec.model.universe.size < 2) throw InputError("universe too small for selector constants");
  if (!dec.model.vocabulary.has_constant("ctrue"))
    dec.model = dec.model.with_constant("ctrue", 0);
  std::vector<FormulaPtr> disjuncts;
  for (long long mask = 0; mask < (1LL << n); ++mask) {
    std::vector<bool> v(n);
    for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1;
    std::string cname = "ct" + std::to_string(mask);
    dec.model = dec.model.with_constant(cname, dec.positive_vectors.count(v) ? 0 : 1);
    std::vector<FormulaPtr> lits;
    lits.push_back(f_eq(t_name(cname), t_name("ctrue")));
    for (int i = 0; i < n; ++i)
      lits.push_back(v[i] ? dec.atom_basis[i] : f_not(dec.atom_basis[i]));
    disjuncts.push_back(f_and_all(lits));
  }
  return f_or_all(disjuncts);
}

struct VerifyResult {
  bool exact = false;
  std::vector<Tuple> counterexamples;  // first few differing pairs
};

inline VerifyResult verify_decomposition(const Decomposition& dec, const FormulaPtr& phi,
                                         const RelationTable& r) {
  VerifyResult res;
  auto defined = definable_relation(dec.model, phi, {"x", "y"});
  res.exact = defined.tuples == r.tuples;
  if (!res.exact) {
    for (const auto& t : defined.tuples)
      if (!r.contains(t) && res.counterexamples.size() < 5) res.counterexamples.push_back(t);
    for (const auto& t : r.tuples)
      if (!defined.contains(t) && res.counterexamples.size() < 5) res.counterexamples.push_back(t);
  }
  return res;
}

struct AutoStep {
  int k = 0;
  std::string outcome;  // "ok" | "majority_tie" | "majority_identity" | "determinism"
};

struct AutoResult {
  Decomposition decomposition;
  FormulaPtr formula;
  int k_final = 0;  // the instance's complexity level
  std::vector<AutoStep> trail;
  VerifyResult verification;
};

// Escalates k (with k2 = k) until the pipeline accepts; guaranteed to end by
// 2k >= |U|, where A* swallows the universe.
inline AutoResult auto_decompose(const Universe& u, const RelationTable& r) {
  AutoResult res;
  for (int k = 1; k <= u.size + 1; ++k) {
    DecompositionParams p;
    p.k = k;
    p.k2 = k;
    try {
      res.decomposition = build_simple_decomposition(u, r, p);
      res.formula = synthesize_defining_formula(res.decomposition, r);
      res.k_final = k;
      res.trail.push_back({k, "ok"});
      res.verification = verify_decomposition(res.decomposition, res.formula, r);
      return res;
    } catch (const MajorityTieError&) {
      res.trail.push_back({k, "majority_tie"});
    } catch (const MajorityIdentityError&) {
      res.trail.push_back({k, "majority_identity"});
    } catch (const DeterminismError&) {
      res.trail.push_back({k, "determinism"});
    }
  }
  throw Error("auto decomposition did not converge");  // unreachable
}

}  // namespace fmlab
