#pragma once

#include <set>
#include <string>
#include <vector>

#include "fmlab/delta.hpp"
#include "fmlab/splitting.hpp"
#include "fmlab/typelab.hpp"

namespace fmlab {

// Thresholds and parameter sets for the symmetry implication test. The base
// minority relation uses (a_base, k_base); chi counts classmates up to k1
// (normally k1 = k_base so chi matches the minority definition); chi' asks
// for more than m2 witnesses; the derived relations get their own sets.
struct SymmetryConfig {
  std::string marker = "aset";
  std::set<int> a_base;
  int k_base = 1;
  int k1 = 1;
  int m2 = 1;
  std::set<int> a_d1, a_d2;
  int k_d1 = 1, k_d2 = 1;
};

struct SymmetryCounterexample {
  int a = 0, b = 0;
  Tuple c;
};

struct SymmetryReport {
  bool holds = false;
  long long base_pairs = 0;
  std::vector<SymmetryCounterexample> counterexamples;  // capped
  std::string chi_text, chi_prime_text;
};

// Instance-level test of the implication
//   a S^n b c  ==>  a S'^{n-1} c  or  b S''^n a c
// where S'' extends the member set by chi (interpreting S^n) and S' by
// chi' (the high-multiplicity projection of chi). Counterexamples indicate
// thresholds below the scale the implication needs, not a defect.
inline SymmetryReport symmetry_instance_check(const SimpleModel& m, const DeltaSet& d, int n,
                                              const SymmetryConfig& cfg) {
  if (n < 2) throw InputError("symmetry check needs n >= 2");
  for (const auto& mem : d.members)
    if (mem.object_arity() != 1) throw InputError("members must have object arity 1");
  if (m.vocabulary.has_predicate(cfg.marker) || m.vocabulary.has_constant(cfg.marker) ||
      m.vocabulary.has_function(cfg.marker) || m.vocabulary.relation_arity(cfg.marker))
    throw InputError("marker name collides with the vocabulary");

  SimpleModel mm = m.with_predicate(cfg.marker, cfg.a_base);

  auto psi = interpret_equivalence_formula(d, cfg.marker);

  // chi(x, y, z0..z{n-2}): some member of parameter arity n sees x in a
  // small agreement class at (y, z...)
  std::vector<std::string> zvars;
  for (int i = 0; i + 1 < n; ++i) zvars.push_back("z" + std::to_string(i));
  std::vector<FormulaPtr> disjuncts;
  for (const auto& mem : d.members) {
    if (mem.param_arity() != n) continue;
    std::set<std::string> avoid = {"x", "y", "xp", "x1", "x2", cfg.marker};
    avoid.insert(zvars.begin(), zvars.end());
    auto body = freshen_bound(mem.formula, avoid);
    std::map<std::string, TermPtr> at_x{{mem.object_vars[0], t_name("x")}};
    std::map<std::string, TermPtr> at_xp{{mem.object_vars[0], t_name("xp")}};
    at_x[mem.param_vars[0]] = at_xp[mem.param_vars[0]] = t_name("y");
    for (int i = 0; i + 1 < n; ++i)
      at_x[mem.param_vars[i + 1]] = at_xp[mem.param_vars[i + 1]] = t_name(zvars[i]);
    auto same_class = substitute(psi, {{std::string("x1"), t_name("x")},
                                       {std::string("x2"), t_name("xp")}});
    auto agree = f_iff(substitute(body, at_x), substitute(body, at_xp));
    disjuncts.push_back(f_count_le(cfg.k1, "xp", f_and(same_class, agree)));
  }
  if (disjuncts.empty()) throw InputError("no member of parameter arity n");
  auto chi = f_or_all(disjuncts);
  auto chi_prime = f_count_gt(cfg.m2, "y", chi);

  DeltaSet d1 = d, d2 = d;
  {
    SplitFormula s1{chi_prime, {"x"}, zvars};
    d1.members.push_back(s1);
    std::vector<std::string> chi_params = {"y"};
    chi_params.insert(chi_params.end(), zvars.begin(), zvars.end());
    SplitFormula s2{chi, {"x"}, chi_params};
    d2.members.push_back(s2);
  }

  auto s_base = s_relation(mm, d, cfg.a_base, cfg.k_base, n);
  auto s_d2 = s_relation(mm, d2, cfg.a_d2, cfg.k_d2, n);

  SymmetryReport rep;
  rep.chi_text = to_text(chi);
  rep.chi_prime_text = to_text(chi_prime);
  rep.base_pairs = (long long)s_base.pairs.size();

  if (n >= 2) {
    auto s_d1 = s_relation(mm, d1, cfg.a_d1, cfg.k_d1, n - 1);
    for (const auto& [a, params] : s_base.pairs) {
      int b = params[0];
      Tuple c(params.begin() + 1, params.end());
      Tuple a_c;
      a_c.push_back(a);
      a_c.insert(a_c.end(), c.begin(), c.end());
      bool left = s_d1.contains(a, c);
      bool right = s_d2.contains(b, a_c);
      if (!left && !right && rep.counterexamples.size() < 10)
        rep.counterexamples.push_back({a, b, c});
    }
  }
  rep.holds = rep.counterexamples.empty();
  return rep;
}

}  // namespace fmlab
