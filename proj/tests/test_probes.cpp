#include <doctest.h>

#include "fmlab/parser.hpp"
#include "fmlab/probes.hpp"
#include "fmlab/symmetry.hpp"

using namespace fmlab;

namespace {

DeltaSet delta_rxy() {
  DeltaSet d;
  d.members.push_back(make_split("r(x,y)", {"x"}, {"y"}));
  return d;
}

}  // namespace

TEST_CASE("find_big_equivalence accepts only big equivalences") {
  std::set<Tuple> ts;
  for (int x = 0; x < 9; ++x)
    for (int y = 0; y < 9; ++y)
      if (x / 3 == y / 3) ts.insert({x, y});
  auto m = model_of_relation(9, "r", RelationTable(2, std::move(ts)));
  auto hit = find_big_equivalence(m, {parse_formula("r(x,y)")}, 3);
  REQUIRE(hit.has_value());
  CHECK(hit->second.classes.size() == 3);

  auto succ = model_of_relation(8, "r", gen_successor(8));
  CHECK(!find_big_equivalence(succ, {parse_formula("r(x,y)")}, 1).has_value());

  // equality gives singletons: never 2-big
  CHECK(!find_big_equivalence(succ, {parse_formula("x=y")}, 2).has_value());
  CHECK(find_big_equivalence(succ, {parse_formula("x=y")}, 1).has_value());
}

TEST_CASE("order configuration on a linear order has full length") {
  for (int n = 4; n <= 6; ++n) {
    auto m = model_of_relation(n, "r", gen_linear_order(n));
    auto phi = parse_formula("(r(x,y) | x=y)");
    auto res = find_order_configuration(m, phi, {"x"}, {"y"}, n + 2);
    CHECK(res.exact);
    CHECK(res.length == n);
  }
}

TEST_CASE("order configuration degenerate cases") {
  std::set<Tuple> full;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) full.insert({i, j});
  auto m_full = model_of_relation(4, "r", RelationTable(2, full));
  auto res_full = find_order_configuration(m_full, parse_formula("r(x,y)"), {"x"}, {"y"}, 6);
  CHECK(res_full.length == 1);

  auto m_empty = model_of_relation(4, "r", RelationTable(2, {}));
  auto res_empty = find_order_configuration(m_empty, parse_formula("r(x,y)"), {"x"}, {"y"}, 6);
  CHECK(res_empty.length == 0);
}

TEST_CASE("order configuration witnesses satisfy the staircase") {
  auto m = model_of_relation(5, "r", gen_linear_order(5));
  auto phi = parse_formula("(r(x,y) | x=y)");
  auto res = find_order_configuration(m, phi, {"x"}, {"y"}, 7);
  REQUIRE(res.length == 5);
  for (int i = 0; i < res.length; ++i)
    for (int j = 0; j < res.length; ++j) {
      bool v = evaluate(m, phi, {{"x", res.a_seq[i][0]}, {"y", res.b_seq[j][0]}});
      CHECK(v == (i <= j));
    }
}

TEST_CASE("order search reports budget exhaustion as a lower bound") {
  auto m = model_of_relation(6, "r", gen_linear_order(6));
  auto phi = parse_formula("(r(x,y) | x=y)");
  auto res = find_order_configuration(m, phi, {"x"}, {"y"}, 6, 10);
  CHECK(!res.exact);
}

TEST_CASE("matching configuration on a perfect matching") {
  auto m = model_of_relation(8, "r", gen_matching(8));
  auto res = find_matching_configuration(m, parse_formula("r(x,y)"), {}, 8);
  CHECK(res.exact);
  CHECK(res.length == 4);

  std::set<Tuple> full;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) full.insert({i, j});
  auto m_full = model_of_relation(4, "r", RelationTable(2, full));
  CHECK(find_matching_configuration(m_full, parse_formula("r(x,y)"), {}, 6).length == 1);

  auto m_empty = model_of_relation(4, "r", RelationTable(2, {}));
  CHECK(find_matching_configuration(m_empty, parse_formula("r(x,y)"), {}, 6).length == 0);
}

TEST_CASE("matching configuration with parameters picks a working point") {
  // r(x,y,z): matching shifted by z; every z works, z scanned lexicographically
  std::set<Tuple> ts;
  for (int z = 0; z < 2; ++z)
    for (int i = 0; i < 3; ++i) ts.insert({i, (i + z) % 3 + 3, z});
  auto m = model_of_relation(6, "r", RelationTable(3, std::move(ts)));
  auto res = find_matching_configuration(m, parse_formula("r(x,y,z)"), {"z"}, 5);
  CHECK(res.length == 3);
  CHECK(res.params == Tuple{0});
}

TEST_CASE("leveled matching requires cross-level constancy") {
  // single matching relation, parameterless levels collapse to one level
  auto m = model_of_relation(8, "r", gen_matching(8));
  auto one = find_matching_levels(m, parse_formula("r(x,y)"), {}, 3);
  CHECK(one.levels >= 1);
}

TEST_CASE("probe verdict rules replay from the k vector") {
  CHECK(probe_verdict({4, 6, 8, 10}, {1, 1, 1, 1}) == "bounded");
  CHECK(probe_verdict({4, 9, 16}, {2, 3, 4}) == "growing");
  CHECK(probe_verdict({4, 9}, {2, 3}) == "inconclusive");       // too short for growth
  CHECK(probe_verdict({4, 9, 16}, {2, 4, 4}) == "bounded");   // max attained twice
  CHECK(probe_verdict({4, 9, 16}, {2, 3, 5}) == "growing");
  CHECK(probe_verdict({4, 9, 16}, {1, 3, 2}) == "inconclusive");  // single maximum, no growth
  CHECK(probe_verdict({}, {}) == "inconclusive");
}

TEST_CASE("dichotomy probe separates successor from balanced families") {
  FamilyDescriptor succ;
  succ.lambda0_expr = "2";
  for (int n = 4; n <= 16; ++n) {
    FamilyInstance fi;
    fi.generator = GeneratorSpec{"successor"};
    fi.size = n;
    fi.label = "successor-" + std::to_string(n);
    succ.instances.push_back(fi);
  }
  auto rep1 = dichotomy_probe(succ, delta_rxy());
  REQUIRE(rep1.records.size() == 13);
  for (const auto& r : rep1.records) {
    CHECK(r.error.empty());
    CHECK(r.k.k == 1);
  }
  CHECK(rep1.verdict == "bounded");

  FamilyDescriptor bal;
  bal.lambda0_expr = "sqrt";
  for (int n : {4, 9, 16}) {
    FamilyInstance fi;
    fi.generator = GeneratorSpec{"balanced-equivalence"};
    fi.size = n;
    fi.label = "balanced-" + std::to_string(n);
    bal.instances.push_back(fi);
  }
  auto rep2 = dichotomy_probe(bal, delta_rxy());
  REQUIRE(rep2.records.size() == 3);
  CHECK(rep2.records[0].k.k == 2);
  CHECK(rep2.records[1].k.k == 3);
  CHECK(rep2.records[2].k.k == 4);
  CHECK(rep2.verdict == "growing");
}

TEST_CASE("probe records failures and continues") {
  FamilyDescriptor fam;
  FamilyInstance bad;
  bad.label = "broken";
  fam.instances.push_back(bad);  // neither generator nor model
  FamilyInstance ok;
  ok.generator = GeneratorSpec{"successor"};
  ok.size = 5;
  ok.label = "successor-5";
  fam.instances.push_back(ok);
  auto rep = dichotomy_probe(fam, delta_rxy());
  REQUIRE(rep.records.size() == 2);
  CHECK(!rep.records[0].error.empty());
  CHECK(rep.records[1].error.empty());
}

TEST_CASE("symmetry check holds vacuously on an empty minority relation") {
  std::set<Tuple> ts;  // ternary equivalence-flavoured relation
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z)
        if (x / 2 == y / 2 && y / 2 == z / 2) ts.insert({x, y, z});
  auto m = model_of_relation(4, "r", RelationTable(3, std::move(ts)));
  DeltaSet d;
  d.members.push_back(make_split("r(x,y0,y1)", {"x"}, {"y0", "y1"}));
  SymmetryConfig cfg;
  cfg.k_base = 1;
  cfg.k1 = 1;
  cfg.m2 = 1;
  cfg.k_d1 = 1;
  cfg.k_d2 = 1;
  auto rep = symmetry_instance_check(m, d, 2, cfg);
  CHECK(rep.base_pairs == 0);
  CHECK(rep.holds);
}

TEST_CASE("generous thresholds saturate the right-hand side") {
  auto m = model_of_relation(6, "r",
                             RelationTable(3, [] {
                               std::set<Tuple> ts;
                               for (int i = 0; i < 6; ++i) ts.insert({i, (i + 1) % 6, (i + 2) % 6});
                               return ts;
                             }()));
  DeltaSet d;
  d.members.push_back(make_split("r(x,y0,y1)", {"x"}, {"y0", "y1"}));
  SymmetryConfig cfg;
  cfg.k_base = 1;
  cfg.k1 = 1;
  cfg.m2 = 1;
  cfg.k_d1 = 6;  // |U|: every element is a minority everywhere
  cfg.k_d2 = 6;
  auto rep = symmetry_instance_check(m, d, 2, cfg);
  CHECK(rep.base_pairs > 0);
  CHECK(rep.holds);
}

TEST_CASE("adversarial thresholds produce counterexamples") {
  auto m = model_of_relation(6, "r",
                             RelationTable(3, [] {
                               std::set<Tuple> ts;
                               for (int i = 0; i < 6; ++i) ts.insert({i, (i + 1) % 6, (i + 2) % 6});
                               return ts;
                             }()));
  DeltaSet d;
  d.members.push_back(make_split("r(x,y0,y1)", {"x"}, {"y0", "y1"}));
  SymmetryConfig generous, stingy;
  generous.k_base = stingy.k_base = 1;
  generous.k1 = stingy.k1 = 1;
  generous.m2 = stingy.m2 = 1;
  generous.k_d1 = generous.k_d2 = 6;
  stingy.k_d1 = stingy.k_d2 = 0;  // nothing qualifies as a minority
  auto rep = symmetry_instance_check(m, d, 2, stingy);
  CHECK(!rep.holds);
  CHECK(!rep.counterexamples.empty());
}
