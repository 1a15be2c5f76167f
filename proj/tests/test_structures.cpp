#include <doctest.h>

#include <random>

#include "fmlab/structure_io.hpp"
#include "fmlab/structures.hpp"

using namespace fmlab;

TEST_CASE("validate_simple_model reports bound violations") {
  SimpleModel m;
  m.universe.size = 6;
  m.vocabulary.unary_predicates.push_back("s");
  m.predicate_values["s"] = {0, 1};
  m.vocabulary.unary_functions.push_back("f");
  m.function_values["f"] = PartialInjection{{{0, 1}, {1, 2}, {2, 3}, {3, 4}}};
  m.check();

  AnalysisParams p;
  p.lambda0 = 3;
  p.lambda1 = 2;
  auto v = validate_simple_model(m, p);
  REQUIRE(v.size() == 1);
  CHECK(v[0].symbol == "f");
  CHECK(v[0].kind == "function_domain_size");

  p.lambda1 = 4;
  CHECK(validate_simple_model(m, p).empty());
}

TEST_CASE("validate_simple_model flags non-injective maps") {
  SimpleModel m;
  m.universe.size = 3;
  m.vocabulary.unary_functions.push_back("f");
  m.function_values["f"] = PartialInjection{{{0, 1}, {2, 1}}};
  m.check();
  AnalysisParams p;
  p.lambda0 = 3;
  p.lambda1 = 3;
  auto v = validate_simple_model(m, p);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == "not_injective");
}

TEST_CASE("apply_permutation maps tuples coordinatewise") {
  RelationTable r(2, {{0, 1}});
  CHECK(apply_permutation(r, {1, 0}).tuples == std::set<Tuple>{{1, 0}});
  CHECK(apply_permutation(r, {0, 1}).tuples == r.tuples);

  RelationTable r2(2, {{0, 1}, {1, 2}});
  CHECK(apply_permutation(r2, {1, 2, 0}).tuples == std::set<Tuple>{{1, 2}, {2, 0}});

  CHECK_THROWS_AS(apply_permutation(r, {0, 0}), InputError);
}

TEST_CASE("apply_permutation is a group action") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::set<Tuple> ts;
    for (int i = 0; i < 8; ++i) ts.insert({(int)(rng() % 6), (int)(rng() % 6)});
    RelationTable r(2, ts);
    std::vector<int> p1(6), p2(6);
    for (int i = 0; i < 6; ++i) p1[i] = p2[i] = i;
    std::shuffle(p1.begin(), p1.end(), rng);
    std::shuffle(p2.begin(), p2.end(), rng);
    std::vector<int> comp(6);
    for (int i = 0; i < 6; ++i) comp[i] = p2[p1[i]];
    CHECK(apply_permutation(apply_permutation(r, p1), p2).tuples ==
          apply_permutation(r, comp).tuples);
  }
}

TEST_CASE("is_isomorphic_copy finds the least witness") {
  Universe u{4};
  RelationTable r1(2, {{0, 1}});
  RelationTable r2(2, {{2, 3}});
  auto w = is_isomorphic_copy(r1, r2, u);
  REQUIRE(w.has_value());
  CHECK(*w == std::vector<int>{2, 3, 0, 1});
  CHECK(apply_permutation(r1, *w).tuples == r2.tuples);

  CHECK(*is_isomorphic_copy(r1, r1, u) == std::vector<int>{0, 1, 2, 3});

  Universe u2{2};
  RelationTable a(2, {{0, 1}});
  RelationTable b(2, {{0, 1}, {1, 0}});
  CHECK(!is_isomorphic_copy(a, b, u2).has_value());

  Universe big{11};
  CHECK_THROWS_AS(is_isomorphic_copy(r1, r2, big), BudgetError);
}

TEST_CASE("is_isomorphic_copy is symmetric and its witness maps exactly") {
  std::mt19937 rng(11);
  Universe u{5};
  for (int trial = 0; trial < 30; ++trial) {
    std::set<Tuple> ts;
    for (int i = 0; i < 5; ++i) ts.insert({(int)(rng() % 5), (int)(rng() % 5)});
    RelationTable r1(2, ts);
    std::vector<int> p(5);
    for (int i = 0; i < 5; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), rng);
    auto r2 = apply_permutation(r1, p);
    auto w12 = is_isomorphic_copy(r1, r2, u);
    auto w21 = is_isomorphic_copy(r2, r1, u);
    REQUIRE(w12.has_value());
    REQUIRE(w21.has_value());
    CHECK(apply_permutation(r1, *w12).tuples == r2.tuples);
    CHECK(apply_permutation(r2, *w21).tuples == r1.tuples);
  }
}

TEST_CASE("structure files round-trip with sorted tuples") {
  Json j = Json::parse(R"({
    "universe": 4,
    "relations": [{"name": "r", "arity": 2, "tuples": [[2,3],[0,1]]}],
    "predicates": [{"name": "s", "elements": [1,0]}],
    "functions": [{"name": "f", "pairs": [[0,1]]}],
    "constants": {"c": 2},
    "lambda0": 2, "lambda1": 2
  })");
  auto sf = read_structure(j);
  CHECK(sf.model.universe.size == 4);
  CHECK(sf.model.relation_values.at("r").tuples == std::set<Tuple>{{0, 1}, {2, 3}});
  CHECK(sf.params.lambda0 == 2);

  auto out = write_structure(sf.model, sf.params);
  auto again = read_structure(out);
  CHECK(write_structure(again.model, again.params) == out);
  // lexicographic tuple order in the output
  CHECK(out["relations"][0]["tuples"][0] == Json::array({0, 1}));
}

TEST_CASE("structure files reject unknown keys and bad data") {
  CHECK_THROWS_AS(read_structure(Json::parse(R"({"universe": 3, "extra": 1})")), InputError);
  CHECK_THROWS_AS(read_structure(Json::parse(R"({"universe": 0})")), InputError);
  CHECK_THROWS_AS(
      read_structure(Json::parse(
          R"({"universe": 2, "relations": [{"name":"r","arity":2,"tuples":[[0,5]]}]})")),
      InputError);
  CHECK_THROWS_AS(
      read_structure(Json::parse(
          R"({"universe": 3, "functions": [{"name":"f","pairs":[[0,1],[0,2]]}]})")),
      InputError);
}
