#include <doctest.h>

#include <random>

#include "fmlab/decompose.hpp"
#include "fmlab/generators.hpp"

using namespace fmlab;

namespace {

DeltaSet delta_rxy() {
  DeltaSet d;
  d.members.push_back(make_split("r(x,y)", {"x"}, {"y"}));
  return d;
}

RelationTable random_relation(std::mt19937& rng, int size, int denom) {
  std::set<Tuple> ts;
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      if ((int)(rng() % (unsigned)denom) == 0) ts.insert({i, j});
  return RelationTable(2, std::move(ts));
}

}  // namespace

TEST_CASE("build_a_star swallows small universes") {
  Universe u{3};
  auto r = gen_successor(3);
  auto m = model_of_relation(3, "r", r);
  DecompositionParams p;
  p.k = 2;
  p.k2 = 2;
  auto astar = build_a_star(m, delta_rxy(), {}, p);
  CHECK(astar == std::set<int>{0, 1, 2});  // every class has <= 2k elements
}

TEST_CASE("build_a_star on the empty relation follows the class-size cutoff") {
  auto r = RelationTable(2, {});
  auto m = model_of_relation(6, "r", r);
  DecompositionParams p;
  p.k = 3;  // 2k = 6 >= |U|: the single class is small, so A* is everything
  p.k2 = 3;
  CHECK(build_a_star(m, delta_rxy(), {}, p) == std::set<int>{0, 1, 2, 3, 4, 5});
  p.k = 2;  // 2k = 4 < 6: the class stays big and nothing else qualifies
  p.k2 = 2;
  CHECK(build_a_star(m, delta_rxy(), {}, p).empty());
}

TEST_CASE("build_a_star keeps big balanced classes out") {
  std::set<Tuple> ts;
  for (int x = 0; x < 9; ++x)
    for (int y = 0; y < 9; ++y)
      if (x / 3 == y / 3) ts.insert({x, y});
  auto m = model_of_relation(9, "r", RelationTable(2, std::move(ts)));
  DecompositionParams p;
  p.k = 1;
  p.k2 = 1;
  auto cert = greedy_splitting_set(m, delta_rxy(), 1, 1);
  auto astar = build_a_star(m, delta_rxy(), cert.a, p);
  CHECK(astar == cert.a);  // classes of size 3 > 2k; no heavy sources
}

TEST_CASE("color_s_relation splits into partial injections") {
  SRelation s;
  s.n = 1;
  s.pairs = {{0, {2}}, {0, {3}}, {1, {2}}};
  auto pieces = color_s_relation(s, {});
  CHECK(pieces.size() == 2);
  std::set<std::pair<int, int>> all;
  for (const auto& p : pieces) {
    CHECK(p.is_injective());
    for (auto [a, b] : p.pairs) CHECK(all.emplace(a, b).second);
  }
  CHECK(all.size() == 3);

  SRelation matching;
  matching.n = 1;
  for (int i = 0; i < 4; ++i) matching.pairs.insert({i, {i + 4}});
  CHECK(color_s_relation(matching, {}).size() == 1);

  SRelation empty;
  empty.n = 1;
  CHECK(color_s_relation(empty, {}).empty());
}

TEST_CASE("coloring respects exclusions and degree bounds") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    SRelation s;
    s.n = 1;
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j)
        if (rng() % 4 == 0) s.pairs.insert({i, {j}});
    std::set<int> excl;
    if (rng() % 2) excl = {0, 3};
    auto pieces = color_s_relation(s, excl);
    std::set<std::pair<int, int>> all;
    int max_out = 0, max_in = 0;
    std::map<int, int> out, in;
    for (const auto& [x, p] : s.pairs) {
      if (excl.count(x) || excl.count(p[0])) continue;
      max_out = std::max(max_out, ++out[x]);
      max_in = std::max(max_in, ++in[p[0]]);
      all.emplace(x, p[0]);
    }
    std::set<std::pair<int, int>> covered;
    for (const auto& p : pieces) {
      CHECK(p.is_injective());
      for (auto [a, b] : p.pairs) {
        CHECK(!excl.count(a));
        CHECK(!excl.count(b));
        CHECK(covered.emplace(a, b).second);
      }
    }
    CHECK(covered == all);
    if (!all.empty()) CHECK((int)pieces.size() <= max_out + max_in - 1);
  }
}

TEST_CASE("majority_table votes strictly and splits by vote vectors") {
  auto r = RelationTable(2, {{0, 5}, {1, 5}});
  auto m = model_of_relation(6, "r", r);
  auto t = majority_table(m, r, {{0, 1, 2}});
  CHECK(t.t_values[5][0] == true);   // 2 of 3 vote true
  CHECK(t.t_values[4][0] == false);
  REQUIRE(t.parts.size() == 1);
  CHECK(t.parts[0].size() == 1);  // all of {0,1,2} vote false against each other

  // a tie is an error
  auto r2 = RelationTable(2, {{0, 5}, {1, 5}});
  auto m2 = model_of_relation(6, "r", r2);
  CHECK_THROWS_AS(majority_table(m2, r2, {{0, 1, 2, 3}}), MajorityTieError);
}

TEST_CASE("two big classes split their parts by two-bit vote vectors") {
  // class 0 votes true exactly against y < 3; class 1 against even y
  std::set<Tuple> ts;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 6; ++y)
      if (y < 3) ts.insert({x, y});
  for (int x = 3; x < 6; ++x)
    for (int y = 0; y < 6; ++y)
      if (y % 2 == 0) ts.insert({x, y});
  auto r = RelationTable(2, std::move(ts));
  auto m = model_of_relation(6, "r", r);
  auto t = majority_table(m, r, {{0, 1, 2}, {3, 4, 5}});
  REQUIRE(t.parts.size() == 2);
  CHECK(t.parts[0].size() == 2);  // {0,2} with (T,T), {1} with (T,F)
  CHECK(t.parts[0][0] == std::vector<int>{1});
  CHECK(t.parts[0][1] == std::vector<int>{0, 2});
  CHECK(t.part_keys[0][0] == std::vector<bool>{true, false});
  CHECK(t.part_keys[0][1] == std::vector<bool>{true, true});
  CHECK(t.parts[1].size() == 2);  // {3,5} odd -> (F,F)? keyed by their own votes
}

TEST_CASE("decomposing the empty relation is trivial") {
  Universe u{6};
  RelationTable r(2, {});
  auto ar = auto_decompose(u, r);
  CHECK(ar.k_final == 1);
  CHECK(ar.decomposition.stats.piece_count == 0);
  CHECK(ar.verification.exact);
  // chi_empty: the formula defines nothing
  CHECK(definable_relation(ar.decomposition.model, ar.formula, {"x", "y"}).tuples.empty());
}

TEST_CASE("decomposing the successor cycle keeps its pieces") {
  Universe u{8};
  auto r = gen_successor(8);
  DecompositionParams p;
  p.k = 1;
  p.k2 = 2;
  auto dec = build_simple_decomposition(u, r, p);
  CHECK(dec.a_star.empty());
  CHECK(dec.stats.piece_count == 1);  // the successor map itself
  auto phi = synthesize_defining_formula(dec, r);
  auto v = verify_decomposition(dec, phi, r);
  CHECK(v.exact);
}

TEST_CASE("decomposing a 2x4 equivalence ends in class predicates") {
  Universe u{8};
  std::set<Tuple> ts;
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y)
      if (x / 4 == y / 4) ts.insert({x, y});
  RelationTable r(2, std::move(ts));
  auto ar = auto_decompose(u, r);
  CHECK(ar.verification.exact);
  CHECK(ar.decomposition.stats.piece_count == 0);
  CHECK(ar.decomposition.stats.class_count >= 2);
  // escalation passed through ties at k < 4
  CHECK(ar.k_final == 4);
}

TEST_CASE("full relation and identity relation decompose exactly") {
  Universe u{5};
  std::set<Tuple> full, diag;
  for (int i = 0; i < 5; ++i) {
    diag.insert({i, i});
    for (int j = 0; j < 5; ++j) full.insert({i, j});
  }
  auto ar1 = auto_decompose(u, RelationTable(2, full));
  CHECK(ar1.verification.exact);
  auto ar2 = auto_decompose(u, RelationTable(2, diag));
  CHECK(ar2.verification.exact);
}

TEST_CASE("one-element universes use the direct formula") {
  Universe u{1};
  auto ar = auto_decompose(u, RelationTable(2, {{0, 0}}));
  CHECK(ar.verification.exact);
  CHECK(to_text(ar.formula) == "x=x");
  auto ar2 = auto_decompose(u, RelationTable(2, {}));
  CHECK(ar2.verification.exact);
  CHECK(to_text(ar2.formula) == "~x=x");
}

TEST_CASE("atom basis matches the generic evaluator") {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    int size = 4 + (int)(rng() % 5);
    auto r = random_relation(rng, size, 3);
    auto ar = auto_decompose(Universe{size}, r);
    const auto& dec = ar.decomposition;
    auto basis = detail::build_atom_basis(dec.model, dec.basis_constants, dec.basis_predicates,
                                          dec.basis_functions);
    for (int probe = 0; probe < 10; ++probe) {
      int x = (int)(rng() % (unsigned)size), y = (int)(rng() % (unsigned)size);
      auto fast = basis.vector_for(x, y);
      for (std::size_t i = 0; i < basis.atoms.size(); ++i) {
        bool slow = evaluate(dec.model, basis.atoms[i], {{"x", x}, {"y", y}});
        CHECK(fast[i] == slow);
      }
    }
  }
}

TEST_CASE("auto decomposition verifies on random relations") {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    int size = 2 + (int)(rng() % 9);
    int denom = 2 + (int)(rng() % 4);
    auto r = random_relation(rng, size, denom);
    auto ar = auto_decompose(Universe{size}, r);
    CHECK(ar.verification.exact);
    CHECK(ar.k_final <= (size + 3) / 2);
  }
}

TEST_CASE("the synthesized model respects realized lambda bounds") {
  std::mt19937 rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    int size = 4 + (int)(rng() % 6);
    auto r = random_relation(rng, size, 3);
    auto ar = auto_decompose(Universe{size}, r);
    const auto& m = ar.decomposition.model;
    int max_pred = 0, max_dom = 0;
    for (const auto& [n, v] : m.predicate_values) max_pred = std::max(max_pred, (int)v.size());
    for (const auto& [n, f] : m.function_values) max_dom = std::max(max_dom, (int)f.pairs.size());
    AnalysisParams p;
    p.lambda0 = max_pred;
    p.lambda1 = max_dom;
    CHECK(validate_simple_model(m, p).empty());
  }
}

TEST_CASE("decomposition size discipline at fixed parameters") {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 15; ++trial) {
    int size = 4 + (int)(rng() % 7);
    auto r = random_relation(rng, size, 3);
    auto ar = auto_decompose(Universe{size}, r);
    const auto& st = ar.decomposition.stats;
    int k = st.k, k2 = st.k2;
    // closed-form caps: |A| from the greedy, small-class mass, heavy sources
    BigInt lstar = BigInt(k) * pow2(k + 1);
    BigInt astar_cap = BigInt(k + 1) + lstar + BigInt(1) * k2 * k2 * k * k * pow2(k + k2) + lstar;
    CHECK(BigInt(st.a_star_size) <= astar_cap);
    // piece count: out-threshold + in-bound
    BigInt piece_cap = pow2(k + k2) * k2 + lstar + BigInt(1) * k * k + lstar;
    CHECK(BigInt(st.piece_count) <= piece_cap);
    // atoms: 2|A*| + 2 preds + per piece (2 + 2|A*|)
    CHECK(st.atom_count ==
          2 * st.a_star_size +
              2 * (st.class_count + [&] {
                int parts = 0;
                for (const auto& nm : ar.decomposition.basis_predicates)
                  if (nm.rfind("part", 0) == 0) ++parts;
                return parts;
              }()) +
              st.piece_count * (2 + 2 * st.a_star_size));
  }
}

TEST_CASE("isomorphism invariance of the pipeline") {
  std::mt19937 rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    int size = 4 + (int)(rng() % 5);
    auto r = random_relation(rng, size, 3);
    std::vector<int> perm(size);
    for (int i = 0; i < size; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    auto r2 = apply_permutation(r, perm);
    auto a1 = auto_decompose(Universe{size}, r);
    auto a2 = auto_decompose(Universe{size}, r2);
    CHECK(a1.verification.exact);
    CHECK(a2.verification.exact);
    CHECK(a1.k_final == a2.k_final);
    CHECK(a1.decomposition.stats.a_star_size == a2.decomposition.stats.a_star_size);
    CHECK(a1.decomposition.stats.class_count == a2.decomposition.stats.class_count);
  }
}

TEST_CASE("uniform formula agrees when the basis is small") {
  Universe u{4};
  auto r = gen_successor(4);
  auto ar = auto_decompose(u, r);
  if (ar.decomposition.stats.atom_count <= 16) {
    auto dec = ar.decomposition;
    auto uni = uniform_defining_formula(dec);
    CHECK(definable_relation(dec.model, uni, {"x", "y"}).tuples == r.tuples);
  }
}

TEST_CASE("verify_decomposition returns counterexamples") {
  Universe u{3};
  RelationTable r(2, {{0, 1}});
  auto ar = auto_decompose(u, r);
  auto bad = verify_decomposition(ar.decomposition, f_false(), r);
  CHECK(!bad.exact);
  REQUIRE(!bad.counterexamples.empty());
  CHECK(bad.counterexamples[0] == Tuple{0, 1});
  auto good = verify_decomposition(ar.decomposition, ar.formula, r);
  CHECK(good.exact);
}
