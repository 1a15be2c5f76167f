#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fmlab/delta.hpp"
#include "fmlab/eval.hpp"
#include "fmlab/typelab.hpp"

namespace fmlab {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt pow2(long long e) {
  if (e < 0 || e > 1'000'000) throw InputError("exponent beyond desk scale");
  return BigInt(1) << (unsigned)e;
}

namespace detail {

// Truth column of one member at fixed parameters: bit per element.
inline std::vector<bool> member_column(const SimpleModel& m, const SplitFormula& mem,
                                       const Tuple& params) {
  Env env;
  env.stack.emplace_back(mem.object_vars[0], 0);
  for (int j = 0; j < mem.param_arity(); ++j)
    env.stack.emplace_back(mem.param_vars[j], params[j]);
  std::vector<bool> col(m.universe.size);
  for (int e = 0; e < m.universe.size; ++e) {
    env.stack[0].second = e;
    col[e] = eval(m, mem.formula, env);
  }
  return col;
}

// Within each class, elements whose agreement count on `col` is <= k.
inline void minority_into(const Partition& part, const std::vector<bool>& col, int k,
                          std::set<int>& out) {
  for (const auto& cls : part.classes) {
    int pos = 0;
    for (int e : cls) pos += col[e] ? 1 : 0;
    int neg = (int)cls.size() - pos;
    for (int e : cls) {
      int agree = col[e] ? pos : neg;
      if (agree <= k) out.insert(e);
    }
  }
}

}  // namespace detail

// Elements agreeing with at most k of their E_A classmates on
// member(.,params); the element itself counts toward the agreement.
inline std::set<int> minority_set(const SimpleModel& m, const DeltaSet& d, const std::set<int>& a,
                                  int k, int member, const Tuple& params) {
  if (member < 0 || member >= d.size()) throw InputError("member index out of range");
  const auto& mem = d.members[member];
  if (mem.object_arity() != 1) throw InputError("minority needs object arity 1");
  if ((int)params.size() != mem.param_arity()) throw InputError("parameter arity mismatch");
  auto part = type_partition(m, d, a);
  std::set<int> out;
  detail::minority_into(part, detail::member_column(m, mem, params), k, out);
  return out;
}

// The (n+1)-place minority relation: (x, params) pairs where x is in some
// participating member's minority set at those parameters.
struct SRelation {
  int n = 1;
  std::set<std::pair<int, Tuple>> pairs;
  int threshold_k = 0;
  std::set<int> parameter_set;

  bool contains(int x, const Tuple& params) const { return pairs.count({x, params}) != 0; }
  std::map<int, int> out_degrees() const {  // x -> #{params : x S params}
    std::map<int, int> deg;
    for (const auto& [x, p] : pairs) ++deg[x];
    return deg;
  }
};

inline SRelation s_relation(const SimpleModel& m, const DeltaSet& d, const std::set<int>& a,
                            int k, int n) {
  if (n < 1) throw InputError("n must be >= 1");
  std::vector<int> participating;
  for (int i = 0; i < d.size(); ++i)
    if (d.members[i].object_arity() == 1 && d.members[i].param_arity() == n)
      participating.push_back(i);
  if (participating.empty())
    throw InputError("no formula of parameter arity " + std::to_string(n));
  auto part = type_partition(m, d, a);
  SRelation s;
  s.n = n;
  s.threshold_k = k;
  s.parameter_set = a;
  for_each_tuple(m.universe.size, n, [&](const Tuple& params) {
    std::set<int> mins;
    for (int i : participating)
      detail::minority_into(part, detail::member_column(m, d.members[i], params), k, mins);
    for (int x : mins) s.pairs.emplace(x, params);
  });
  return s;
}

struct SplitCheck {
  std::string name;
  bool pass = false;
  std::string observed;
  std::string bound;
};

struct SplitCertificate {
  std::set<int> a;
  int l0 = 0;
  std::vector<long long> m_sequence;  // m_0..m_{k+1}
  long long majority_bound = 0;       // m*
  std::vector<int> qualifying_classes;  // least elements of classes passing the l0 test
  std::vector<SplitCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Greedy parameter-set construction: extend A while some (member, params)
// splits an E_A class into two parts each of size >= (k+1)*2^{m_{l+1}}.
// Terminates after at most k+1 rounds. The certificate carries the size
// check, the split-side check, and the at-most-k-heavy-types check.
inline SplitCertificate greedy_splitting_set(const SimpleModel& m, const DeltaSet& d, int k,
                                             int n) {
  if (k < 1) throw InputError("k must be >= 1");
  if (n < d.max_param_arity()) throw InputError("n below the maximum parameter arity");
  for (const auto& mem : d.members)
    if (mem.object_arity() != 1) throw InputError("splitting needs object arity 1 members");

  SplitCertificate cert;
  cert.m_sequence.assign(k + 2, 0);
  for (int l = k; l >= 0; --l) {
    long long f = d.size();
    for (int i = 0; i < n; ++i) f *= (long long)n * (l + 1);
    cert.m_sequence[l] = f + cert.m_sequence[l + 1];
  }
  long long mstar = d.size();
  for (int i = 0; i < n + 1; ++i) mstar *= (k + 1);
  for (int i = 0; i < n; ++i) mstar *= n;
  cert.majority_bound = mstar;

  std::set<int> a;
  int l = 0;
  while (l <= k) {
    BigInt threshold = BigInt(k + 1) * pow2(cert.m_sequence[l + 1]);
    if (threshold > m.universe.size) break;  // no class can split into two such parts
    auto part = type_partition(m, d, a);
    bool extended = false;
    for (int i = 0; i < d.size() && !extended; ++i) {
      const auto& mem = d.members[i];
      for_each_tuple(m.universe.size, mem.param_arity(), [&](const Tuple& params) {
        if (extended) return;
        auto col = detail::member_column(m, mem, params);
        for (const auto& cls : part.classes) {
          int pos = 0;
          for (int e : cls) pos += col[e] ? 1 : 0;
          int neg = (int)cls.size() - pos;
          if (BigInt(pos) >= threshold && BigInt(neg) >= threshold) {
            a.insert(params.begin(), params.end());
            extended = true;
            return;
          }
        }
      });
    }
    if (!extended) break;
    ++l;
  }
  cert.a = a;
  cert.l0 = l;

  auto part = type_partition(m, d, a);
  BigInt qualify = BigInt(k + 1) * pow2(cert.m_sequence[l]);
  for (const auto& cls : part.classes)
    if (BigInt((int)cls.size()) >= qualify) cert.qualifying_classes.push_back(cls[0]);

  {
    SplitCheck c;
    c.name = "parameter_set_size";
    c.observed = std::to_string(a.size());
    c.bound = std::to_string((long long)n * (k + 1));
    c.pass = (long long)a.size() <= (long long)n * (k + 1);
    cert.checks.push_back(c);
  }
  {
    // Every (member, params) split leaves one side of every class small.
    BigInt side_bound = BigInt(k + 1) * pow2(mstar);
    int worst = 0;
    bool pass = true;
    for (int i = 0; i < d.size(); ++i) {
      const auto& mem = d.members[i];
      for_each_tuple(m.universe.size, mem.param_arity(), [&](const Tuple& params) {
        auto col = detail::member_column(m, mem, params);
        for (const auto& cls : part.classes) {
          int pos = 0;
          for (int e : cls) pos += col[e] ? 1 : 0;
          int small_side = std::min(pos, (int)cls.size() - pos);
          worst = std::max(worst, small_side);
          if (BigInt(small_side) > side_bound) pass = false;
        }
      });
    }
    SplitCheck c;
    c.name = "split_side";
    c.observed = std::to_string(worst);
    c.bound = side_bound.str();
    c.pass = pass;
    cert.checks.push_back(c);
  }
  {
    // At most k classes realize >= k*2^{m*} elements each.
    BigInt heavy = BigInt(k) * pow2(mstar);
    int count = 0;
    for (const auto& cls : part.classes)
      if (BigInt((int)cls.size()) >= heavy) ++count;
    SplitCheck c;
    c.name = "heavy_types";
    c.observed = std::to_string(count);
    c.bound = std::to_string(k);
    c.pass = count <= k;
    cert.checks.push_back(c);
  }
  return cert;
}

struct BoundReport {
  std::string l_star;
  std::string per_target_bound;
  std::string heavy_source_threshold;
  std::string heavy_source_bound;
  long long observed_small_class_mass = 0;
  long long observed_max_per_target = 0;
  long long observed_heavy_sources = 0;
  bool pass = false;
};

// The three degree bounds for the minority relation built from (A, k):
// small-class mass, in-degree per parameter point, and count of sources with
// out-degree above the 2^{|D|(k+k2)}*k2 + l* threshold. `binomial_variant`
// switches the class-count exponent from |D|k to |D|*C(k, rel_arity).
inline BoundReport verify_split_bounds(const SimpleModel& m, const DeltaSet& d,
                                       const std::set<int>& a, int k, int k2,
                                       bool binomial_variant = false, int rel_arity = 2) {
  BoundReport rep;
  long long dd = d.size();
  BigInt lstar;
  if (!binomial_variant) {
    lstar = BigInt(k) * pow2(dd * k + 1);
  } else {
    BigInt binom = 1;
    for (int i = 0; i < rel_arity; ++i) binom = binom * (k - i) / (i + 1);
    if (binom < 0) binom = 0;
    lstar = BigInt(k) * pow2((long long)(dd * (long long)binom) + 1);
  }
  BigInt per_target = BigInt(dd) * k * k + lstar;
  BigInt out_threshold = pow2(dd * (k + k2)) * k2 + lstar;
  BigInt heavy_bound = BigInt(dd) * k2 * k2 * k * k * pow2(dd * (k + k2)) + lstar;

  auto part = type_partition(m, d, a);
  for (const auto& cls : part.classes)
    if ((int)cls.size() <= 2 * k) rep.observed_small_class_mass += (long long)cls.size();

  auto s = s_relation(m, d, a, k, 1);
  std::map<Tuple, int> in_deg;
  for (const auto& [x, p] : s.pairs) ++in_deg[p];
  for (const auto& [p, c] : in_deg)
    rep.observed_max_per_target = std::max(rep.observed_max_per_target, (long long)c);
  for (const auto& [x, c] : s.out_degrees())
    if (BigInt(c) > out_threshold) ++rep.observed_heavy_sources;

  rep.l_star = lstar.str();
  rep.per_target_bound = per_target.str();
  rep.heavy_source_threshold = out_threshold.str();
  rep.heavy_source_bound = heavy_bound.str();
  rep.pass = BigInt(rep.observed_small_class_mass) <= lstar &&
             BigInt(rep.observed_max_per_target) <= per_target &&
             BigInt(rep.observed_heavy_sources) <= heavy_bound;
  return rep;
}

}  // namespace fmlab
