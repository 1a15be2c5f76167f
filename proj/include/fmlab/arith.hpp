#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fmlab/eval.hpp"
#include "fmlab/formula.hpp"
#include "fmlab/partition.hpp"
#include "fmlab/structures.hpp"

namespace fmlab {

// A claimed interpretation of ({0..n-1}; 0, S, +, *) inside a universe of
// n^2 elements, built from copies isomorphic to the base partition plus at
// most three element parameters. The formulas speak about binary relation
// symbols e0..e{copies-1} and parameter constants p0..p2.
struct ArithWitness {
  int n = 0;
  Partition base;
  std::vector<Partition> copies;
  std::vector<int> parameters;
  std::map<std::string, FormulaPtr> formulas;  // zero, succ, plus, times

  SimpleModel evaluation_model() const {
    SimpleModel m;
    m.universe.size = base.size();
    for (int i = 0; i < (int)copies.size(); ++i) {
      std::string n_ = "e" + std::to_string(i);
      m.vocabulary.relation_symbols.emplace_back(n_, 2);
      m.relation_values[n_] = pairs_of_partition(copies[i]);
    }
    for (int i = 0; i < (int)parameters.size(); ++i) {
      std::string n_ = "p" + std::to_string(i);
      m.vocabulary.constants.push_back(n_);
      m.constant_values[n_] = parameters[i];
    }
    m.check();
    return m;
  }
};

struct ArithVerifyReport {
  bool pass = false;
  std::vector<std::string> failures;
  std::vector<int> representatives;  // decoded elements standing for 0..n-1
};

// The verifier is the oracle: it rebuilds the true partial tables 0, S, +, *
// (results < n only) independently of the search and compares graphs exactly,
// then re-derives each copy's isomorphism to the base.
inline ArithVerifyReport verify_arithmetic_interpretation(const ArithWitness& w) {
  ArithVerifyReport rep;
  auto fail = [&](const std::string& s) { rep.failures.push_back(s); };
  int n = w.n;
  if (n < 1) {
    fail("n must be positive");
    return rep;
  }
  if (w.base.size() != n * n) fail("base universe is not n^2");
  SimpleModel m;
  try {
    m = w.evaluation_model();
  } catch (const Error& e) {
    fail(std::string("bad witness model: ") + e.what());
    return rep;
  }
  int nu = m.universe.size;

  // class-size multiset equality plus an explicit mapping permutation
  std::vector<int> base_sizes;
  for (const auto& c : w.base.classes) base_sizes.push_back((int)c.size());
  std::sort(base_sizes.begin(), base_sizes.end());
  for (std::size_t ci = 0; ci < w.copies.size(); ++ci) {
    const auto& cp = w.copies[ci];
    std::vector<int> sizes;
    for (const auto& c : cp.classes) sizes.push_back((int)c.size());
    std::sort(sizes.begin(), sizes.end());
    if (cp.size() != w.base.size() || sizes != base_sizes) {
      fail("copy " + std::to_string(ci) + " not isomorphic: class sizes differ");
      continue;
    }
    // classes sorted by (size, least element) pair up to give a witness
    auto order = [](const Partition& p) {
      std::vector<std::vector<int>> cs = p.classes;
      std::sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a[0] < b[0];
      });
      return cs;
    };
    auto bc = order(w.base), cc = order(cp);
    std::vector<int> perm(nu, -1);
    for (std::size_t i = 0; i < bc.size(); ++i)
      for (std::size_t j = 0; j < bc[i].size(); ++j) perm[bc[i][j]] = cc[i][j];
    if (apply_permutation(pairs_of_partition(w.base), perm).tuples !=
        pairs_of_partition(cp).tuples)
      fail("copy " + std::to_string(ci) + " permutation witness failed");
  }

  auto get = [&](const char* name) -> FormulaPtr {
    auto it = w.formulas.find(name);
    if (it == w.formulas.end()) {
      fail(std::string("missing formula '") + name + "'");
      return nullptr;
    }
    return it->second;
  };
  auto zero = get("zero");
  auto succ = get("succ");
  auto plus = get("plus");
  auto times = get("times");
  if (!zero || !succ || !plus || !times || !rep.failures.empty()) return rep;

  try {
    auto zs = definable_relation(m, zero, {"x"});
    if (zs.tuples.size() != 1) {
      fail("zero is not unique");
      return rep;
    }
    std::vector<int> reps;
    reps.push_back((*zs.tuples.begin())[0]);

    auto succ_graph = definable_relation(m, succ, {"x", "y"});
    for (int i = 0; i + 1 < n; ++i) {
      int cur = reps[i], next = -1;
      for (const auto& t : succ_graph.tuples)
        if (t[0] == cur) {
          if (next != -1) {
            fail("successor not functional");
            return rep;
          }
          next = t[1];
        }
      if (next == -1) {
        fail("successor chain stops early");
        return rep;
      }
      reps.push_back(next);
    }
    std::set<int> distinct(reps.begin(), reps.end());
    if ((int)distinct.size() != n) {
      fail("representatives not distinct");
      return rep;
    }
    std::set<Tuple> succ_expect;
    for (int i = 0; i + 1 < n; ++i) succ_expect.insert({reps[i], reps[i + 1]});
    if (succ_graph.tuples != succ_expect) {
      fail("successor graph differs from the table");
      return rep;
    }
    rep.representatives = reps;

    std::set<Tuple> plus_expect, times_expect;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i + j < n) plus_expect.insert({reps[i], reps[j], reps[i + j]});
        if (i * j < n) times_expect.insert({reps[i], reps[j], reps[i * j]});
      }
    if (definable_relation(m, plus, {"x", "y", "z"}).tuples != plus_expect)
      fail("addition graph differs from the table");
    if (definable_relation(m, times, {"x", "y", "z"}).tuples != times_expect)
      fail("multiplication graph differs from the table");
  } catch (const Error& e) {
    fail(std::string("evaluation error: ") + e.what());
  }

  rep.pass = rep.failures.empty();
  return rep;
}

namespace detail {

// Grid view of the base: element <-> (row, col) through class order.
struct GridView {
  int n;
  std::vector<std::vector<int>> cell;  // [row][col] -> element

  static GridView of(const Partition& base, int n) {
    GridView g;
    g.n = n;
    g.cell.assign(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g.cell[i][j] = base.classes[i][j];
    return g;
  }

  Partition rows() const {
    Partition p;
    p.classes.resize(n);
    for (int i = 0; i < n; ++i) p.classes[i] = cell[i];
    return normalize(p);
  }
  Partition cols() const {
    Partition p;
    p.classes.resize(n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) p.classes[j].push_back(cell[i][j]);
    return normalize(p);
  }
  Partition diag(int sign) const {  // sign +1: classes of (i+j) mod n; -1: (i-j) mod n
    Partition p;
    p.classes.resize(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int c = ((i + sign * j) % n + n) % n;
        p.classes[c].push_back(cell[i][j]);
      }
    return normalize(p);
  }

  static Partition normalize(Partition p) {
    for (auto& c : p.classes) std::sort(c.begin(), c.end());
    std::sort(p.classes.begin(), p.classes.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return p;
  }
};

// num_i(u): u is the column-0 representative of i, counted off with the
// copy-defined successor step (row r, col 1) ~sumdiag~ (r+1, 0). Binder names
// carry the depth so the recursive substitution cannot capture.
inline FormulaPtr arith_num_formula(int i, int n) {
  if (i == 0) return f_eq(t_name("u"), t_name("p0"));
  if (i == 1) return f_eq(t_name("u"), t_name("p1"));
  std::string v = "v" + std::to_string(i), c = "w" + std::to_string(i);
  auto prev = substitute(arith_num_formula(i - 1, n), {{std::string("u"), t_name(v)}});
  auto step = f_exists(c, f_and(f_and(f_rel("e0", {t_name(c), t_name(v)}),
                                      f_rel("e1", {t_name(c), t_name("p2")})),
                                f_rel("e2", {t_name(c), t_name("u")})));
  return f_and(f_rel("e1", {t_name("u"), t_name("p0")}), f_exists(v, f_and(prev, step)));
}

inline FormulaPtr arith_lookup(const std::vector<std::array<int, 3>>& rows, int n,
                               const char* vx, const char* vy, const char* vz) {
  std::vector<FormulaPtr> disjuncts;
  for (const auto& row : rows) {
    auto fx = substitute(arith_num_formula(row[0], n), {{std::string("u"), t_name(vx)}});
    auto fy = substitute(arith_num_formula(row[1], n), {{std::string("u"), t_name(vy)}});
    auto fz = substitute(arith_num_formula(row[2], n), {{std::string("u"), t_name(vz)}});
    disjuncts.push_back(f_and(f_and(fx, fy), fz));
  }
  return f_or_all(disjuncts);
}

}  // namespace detail

struct ArithSearchResult {
  std::optional<ArithWitness> witness;
  ArithVerifyReport report;
  long long candidates_tried = 0;
  bool exhausted = false;
};

// Bounded search over copy/parameter choices with lookup-style formula
// templates; the first candidate accepted by the verifier wins. Exhaustion is
// not a refutation. Deterministic.
inline ArithSearchResult search_arithmetic_interpretation(const Partition& base, int n,
                                                          long long budget = 10'000) {
  if (n < 1 || n > 4) throw InputError("search supports n <= 4");
  if (base.size() != n * n || (int)base.classes.size() != n)
    throw InputError("base must have n classes of size n on n^2 elements");
  if (!is_k_big(base, n)) throw InputError("base is not n-big");
  for (const auto& c : base.classes)
    if ((int)c.size() != n) throw InputError("base must have n classes of size n on n^2 elements");

  auto grid = detail::GridView::of(base, n);
  std::vector<Partition> pool = {grid.rows(), grid.cols(), grid.diag(1), grid.diag(-1)};

  std::vector<std::array<int, 3>> plus_rows, times_rows;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i + j < n) plus_rows.push_back({i, j, i + j});
      if (i * j < n) times_rows.push_back({i, j, i * j});
    }
  std::vector<std::array<int, 2>> succ_rows;
  for (int i = 0; i + 1 < n; ++i) succ_rows.push_back({i, i + 1});

  ArithSearchResult res;
  // parameter triples: the canonical anchors first, then decoys the verifier
  // is expected to reject
  std::vector<std::array<int, 3>> params = {
      {grid.cell[0][0], grid.cell[1 % n][0], grid.cell[0][1 % n]},
      {grid.cell[0][0], grid.cell[0][1 % n], grid.cell[1 % n][0]},
      {grid.cell[0][0], grid.cell[0][0], grid.cell[0][0]},
  };
  for (int c0 = 0; c0 < 4; ++c0)
    for (int c1 = 0; c1 < 4; ++c1)
      for (int c2 = 0; c2 < 4; ++c2) {
        if (c0 == c1 || c1 == c2 || c0 == c2) continue;
        for (const auto& pr : params) {
          if (res.candidates_tried++ >= budget) {
            res.exhausted = true;
            return res;
          }
          ArithWitness w;
          w.n = n;
          w.base = base;
          w.copies = {pool[c0], pool[c1], pool[c2]};
          w.parameters = {pr[0], pr[1], pr[2]};
          w.formulas["zero"] =
              substitute(detail::arith_num_formula(0, n), {{std::string("u"), t_name("x")}});
          {
            std::vector<FormulaPtr> ds;
            for (const auto& row : succ_rows) {
              auto fx = substitute(detail::arith_num_formula(row[0], n),
                                   {{std::string("u"), t_name("x")}});
              auto fy = substitute(detail::arith_num_formula(row[1], n),
                                   {{std::string("u"), t_name("y")}});
              ds.push_back(f_and(fx, fy));
            }
            w.formulas["succ"] = f_or_all(ds);
          }
          w.formulas["plus"] = detail::arith_lookup(plus_rows, n, "x", "y", "z");
          w.formulas["times"] = detail::arith_lookup(times_rows, n, "x", "y", "z");
          auto rep = verify_arithmetic_interpretation(w);
          if (rep.pass) {
            res.witness = std::move(w);
            res.report = std::move(rep);
            return res;
          }
        }
      }
  res.exhausted = true;
  return res;
}

}  // namespace fmlab
