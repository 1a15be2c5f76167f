#pragma once

#include <set>
#include <string>

#include "fmlab/error.hpp"
#include "fmlab/structures.hpp"
#include "fmlab/util.hpp"

namespace fmlab {

inline RelationTable gen_successor(int n) {
  std::set<Tuple> t;
  for (int i = 0; i < n; ++i) t.insert({i, (i + 1) % n});
  return RelationTable(2, std::move(t));
}

// ceil_sqrt(n) classes of consecutive elements, full equivalence relation
// including the diagonal; exact only when n is a perfect square.
inline RelationTable gen_balanced_equivalence(int n) {
  int c = ceil_sqrt(n);
  std::set<Tuple> t;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x / c == y / c) t.insert({x, y});
  return RelationTable(2, std::move(t));
}

inline RelationTable gen_linear_order(int n) {
  std::set<Tuple> t;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) t.insert({i, j});
  return RelationTable(2, std::move(t));
}

inline RelationTable gen_matching(int n) {
  if (n % 2) throw InputError("matching needs an even universe");
  std::set<Tuple> t;
  for (int i = 0; i < n / 2; ++i) t.insert({i, i + n / 2});
  return RelationTable(2, std::move(t));
}

// 4-neighbour adjacency on a ceil_sqrt(n) wide grid, both directions.
inline RelationTable gen_grid(int n) {
  int w = ceil_sqrt(n);
  std::set<Tuple> t;
  auto inside = [&](int r, int c) { return r >= 0 && c >= 0 && r * w + c < n && c < w; };
  for (int e = 0; e < n; ++e) {
    int r = e / w, c = e % w;
    const int dr[] = {0, 0, 1, -1}, dc[] = {1, -1, 0, 0};
    for (int d = 0; d < 4; ++d)
      if (inside(r + dr[d], c + dc[d])) t.insert({e, (r + dr[d]) * w + (c + dc[d])});
  }
  return RelationTable(2, std::move(t));
}

// Each ordered pair without loops independently with probability num/den.
inline RelationTable gen_random_graph(int n, std::uint64_t num, std::uint64_t den,
                                      std::uint64_t seed) {
  if (den == 0 || num > den) throw InputError("probability must be a rational in [0,1]");
  Rng rng(seed);
  std::set<Tuple> t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rng.bernoulli(num, den)) t.insert({i, j});
    }
  return RelationTable(2, std::move(t));
}

struct GeneratorSpec {
  std::string name;
  std::uint64_t p_num = 1, p_den = 2;  // random-graph density
};

inline RelationTable generate(const GeneratorSpec& g, int size, std::uint64_t seed) {
  if (g.name == "successor") return gen_successor(size);
  if (g.name == "balanced-equivalence") return gen_balanced_equivalence(size);
  if (g.name == "linear-order") return gen_linear_order(size);
  if (g.name == "matching") return gen_matching(size);
  if (g.name == "grid") return gen_grid(size);
  if (g.name == "random-graph") return gen_random_graph(size, g.p_num, g.p_den, seed);
  throw InputError("unknown generator '" + g.name + "'");
}

}  // namespace fmlab
