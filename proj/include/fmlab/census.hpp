#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

#include "fmlab/error.hpp"

namespace fmlab {

using CensusInt = boost::multiprecision::cpp_int;

// 2^e by repeated squaring. The multiplication-loop route lives in test code
// and must agree bit for bit.
inline CensusInt census_pow2(long long e) {
  if (e < 0) throw InputError("negative exponent");
  CensusInt base = 2, acc = 1;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

inline CensusInt census_factorial(int n) {
  CensusInt acc = 1;
  for (int i = 2; i <= n; ++i) acc *= i;
  return acc;
}

inline long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

struct CensusReport {
  int n = 0;
  int m = 0;
  // counting argument: least N with 2^{N^{n+1}} > m^2 * 2^{N^n}
  int relation_least_n = 0;
  std::string relation_lhs, relation_rhs;  // values at that N
  // permutation-count argument (n >= 2): least N with m * N! < 2^{N^n}
  std::optional<int> function_least_n;
  std::string function_lhs, function_rhs;
  // sufficient threshold: least N >= 2 with 2^{N^n} > m^2; implies the
  // relation inequality for every larger N
  int threshold_n = 0;
  bool threshold_consistent = false;
};

// Exact big-integer census of the counting inequalities that separate
// (n+1)-place relation quantifiers from n-place ones and from permutations.
inline CensusReport count_census(int n, int m) {
  if (n < 1 || m < 1) throw InputError("census needs n, m >= 1");
  if (n > 8 || m > 1024) throw InputError("census parameters beyond desk scale");
  CensusReport rep;
  rep.n = n;
  rep.m = m;
  CensusInt m2 = CensusInt(m) * m;

  for (int N = 1;; ++N) {
    CensusInt lhs = census_pow2(ipow(N, n + 1));
    CensusInt rhs = m2 * census_pow2(ipow(N, n));
    if (lhs > rhs) {
      rep.relation_least_n = N;
      rep.relation_lhs = lhs.str();
      rep.relation_rhs = rhs.str();
      break;
    }
  }

  if (n >= 2) {
    for (int N = 1;; ++N) {
      CensusInt lhs = CensusInt(m) * census_factorial(N);
      CensusInt rhs = census_pow2(ipow(N, n));
      if (lhs < rhs) {
        rep.function_least_n = N;
        rep.function_lhs = lhs.str();
        rep.function_rhs = rhs.str();
        break;
      }
    }
  }

  for (int N = 2;; ++N) {
    if (census_pow2(ipow(N, n)) > m2) {
      rep.threshold_n = N;
      break;
    }
  }
  // every N at or above the sufficient threshold satisfies the inequality,
  // and the exact loop can only stop at or before it
  rep.threshold_consistent = rep.relation_least_n <= rep.threshold_n;
  for (int N = rep.threshold_n; N <= rep.threshold_n + 2; ++N) {
    CensusInt lhs = census_pow2(ipow(N, n + 1));
    CensusInt rhs = m2 * census_pow2(ipow(N, n));
    if (!(lhs > rhs)) rep.threshold_consistent = false;
  }
  return rep;
}

}  // namespace fmlab
