#include <doctest.h>

#include <random>

#include "fmlab/sunflower.hpp"

using namespace fmlab;

TEST_CASE("delta_bound iterates the pigeonhole step") {
  CHECK(delta_bound(1, 3) == 5);
  CHECK(delta_bound(2, 3) == 17);  // g(g(3)) = g(5)
  CHECK(delta_bound(1, 1) == 1);
  CHECK(delta_bound(3, 1) == 1);
  CHECK(delta_bound(1, 2) == 2);
  CHECK_THROWS_AS(delta_bound(0, 3), InputError);
}

TEST_CASE("exact minimal bounds meet the certified bound where repeats bind") {
  CHECK(delta_bound_exact_min(3, 4) == 5);  // matches delta_bound(1, 3)
  CHECK(delta_bound_exact_min(3, 2) == 5);  // only repeats can supply 3 members
  CHECK(delta_bound_exact_min(3, 1) == 3);  // single-letter alphabet: below the bound
  CHECK(delta_bound_exact_min(2, 4) == 2);
  CHECK_THROWS_AS(delta_bound_exact_min(4, 4), InputError);
}

TEST_CASE("extraction on the worked example") {
  std::vector<Tuple> seq = {{1, 2}, {1, 3}, {1, 4}, {1, 2}, {5, 6}};
  auto res = extract_delta_system(seq, 3);
  REQUIRE(res.has_value());
  CHECK(res->indices == std::vector<int>{0, 1, 2});
  CHECK(res->pattern.constant_positions == std::map<int, int>{{0, 1}});
  CHECK(res->pattern.injective_positions == std::set<int>{1});
  CHECK(res->multiplicity == std::map<Tuple, int>{{{1, 2}, 2}});
}

TEST_CASE("identical tuples form an all-constant system") {
  std::vector<Tuple> seq(4, Tuple{3, 3});
  auto res = extract_delta_system(seq, 4);
  REQUIRE(res.has_value());
  CHECK(res->indices.size() == 4);
  CHECK(res->pattern.injective_positions.empty());
  CHECK(res->pattern.constant_positions.size() == 2);
}

TEST_CASE("distinct singletons form an injective system") {
  std::vector<Tuple> seq = {{0}, {1}, {2}, {3}, {4}};
  auto res = extract_delta_system(seq, 3);
  REQUIRE(res.has_value());
  CHECK(res->indices.size() == 5);
  CHECK(res->pattern.injective_positions == std::set<int>{0});
}

TEST_CASE("extraction below the bound can fail") {
  std::vector<Tuple> seq = {{0}, {0}, {1}, {1}};  // no value 3 times, 2 distinct
  CHECK(!extract_delta_system(seq, 3).has_value());
  CHECK(!extract_delta_system({}, 1).has_value());
}

TEST_CASE("exhaustive completeness: n=1, m=3, alphabet 4, length 5") {
  int count = 0;
  for (int mask = 0; mask < 1024; ++mask) {
    std::vector<Tuple> seq;
    int v = mask;
    for (int i = 0; i < 5; ++i) {
      seq.push_back({v % 4});
      v /= 4;
    }
    auto res = extract_delta_system(seq, 3);
    REQUIRE(res.has_value());
    CHECK((int)res->indices.size() >= 3);
    ++count;
  }
  CHECK(count == 1024);
}

TEST_CASE("randomized completeness at the bound with coding round trips") {
  std::mt19937 rng(71);
  for (int n = 1; n <= 3; ++n)
    for (int m = 2; m <= 4; ++m) {
      long long len = delta_bound(n, m);
      for (int trial = 0; trial < 50; ++trial) {
        std::vector<Tuple> seq;
        for (long long i = 0; i < len; ++i) {
          Tuple t(n);
          for (int j = 0; j < n; ++j) t[j] = (int)(rng() % 6);
          seq.push_back(std::move(t));
        }
        auto res = extract_delta_system(seq, m);
        REQUIRE(res.has_value());
        REQUIRE((int)res->indices.size() >= m);
        std::vector<Tuple> chosen;
        for (int i : res->indices) chosen.push_back(seq[i]);
        CHECK(res->pattern.holds_on(chosen));

        Universe u{6};
        auto bundle = code_delta_system(u, chosen, res->pattern);
        CHECK(verify_coding(bundle, chosen));
      }
    }
}

TEST_CASE("coding the worked example") {
  std::vector<Tuple> seq = {{1, 2}, {1, 3}, {1, 4}};
  DeltaPattern pat;
  pat.constant_positions[0] = 1;
  pat.injective_positions.insert(1);
  auto b = code_delta_system(Universe{8}, seq, pat);
  CHECK(b.codes == std::vector<int>{2, 3, 4});
  CHECK(b.model.predicate_values.at("s1") == std::set<int>{2, 3, 4});
  CHECK(b.model.constant_values.at("c0") == 1);
  CHECK(verify_coding(b, seq));
}

TEST_CASE("coding a single tuple") {
  std::vector<Tuple> seq = {{2, 5}};
  DeltaPattern pat;
  pat.constant_positions[0] = 2;
  pat.constant_positions[1] = 5;
  auto b = code_delta_system(Universe{7}, seq, pat);
  CHECK(b.codes.size() == 1);
  CHECK(verify_coding(b, seq));
}

TEST_CASE("coding distinct singletons") {
  std::vector<Tuple> seq = {{3}, {4}, {5}};
  DeltaPattern pat;
  pat.injective_positions.insert(0);
  auto b = code_delta_system(Universe{6}, seq, pat);
  CHECK(b.codes == std::vector<int>{3, 4, 5});
  CHECK(verify_coding(b, seq));
}

TEST_CASE("coding the empty sequence leaves theta unsatisfiable") {
  DeltaPattern pat;
  pat.constant_positions[0] = 0;
  pat.injective_positions.insert(1);
  auto b = code_delta_system(Universe{5}, {}, pat);
  CHECK(verify_coding(b, {}));
}

TEST_CASE("a tampered bundle fails verification") {
  std::vector<Tuple> seq = {{1, 2}, {1, 3}, {1, 4}};
  DeltaPattern pat;
  pat.constant_positions[0] = 1;
  pat.injective_positions.insert(1);
  auto b = code_delta_system(Universe{8}, seq, pat);
  auto& s1 = b.model.predicate_values.at("s1");
  s1.erase(3);  // drop one code
  CHECK(!verify_coding(b, seq));
}

TEST_CASE("coding rejects undersized universes and bad patterns") {
  std::vector<Tuple> seq = {{0, 1}};
  DeltaPattern pat;
  pat.constant_positions[0] = 0;
  pat.constant_positions[1] = 1;
  CHECK_THROWS_AS(code_delta_system(Universe{2}, seq, pat), InputError);
  DeltaPattern wrong;
  wrong.constant_positions[0] = 7;
  wrong.constant_positions[1] = 1;
  CHECK_THROWS_AS(code_delta_system(Universe{5}, seq, wrong), InputError);
}
