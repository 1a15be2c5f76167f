#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "fmlab/error.hpp"
#include "fmlab/structures.hpp"

namespace fmlab {

// Disjoint classes covering 0..size-1; classes ordered by least element,
// elements sorted within a class.
struct Partition {
  std::vector<std::vector<int>> classes;

  int size() const {
    int n = 0;
    for (const auto& c : classes) n += (int)c.size();
    return n;
  }

  std::vector<int> class_index_map() const {  // element -> class index
    std::vector<int> idx(size(), -1);
    for (int i = 0; i < (int)classes.size(); ++i)
      for (int e : classes[i]) idx[e] = i;
    return idx;
  }

  void check(int universe_size) const {
    std::vector<int> seen(universe_size, 0);
    int prev_least = -1;
    for (const auto& c : classes) {
      if (c.empty()) throw InputError("empty partition class");
      if (!std::is_sorted(c.begin(), c.end())) throw InputError("unsorted partition class");
      if (c[0] <= prev_least) throw InputError("classes not ordered by least element");
      prev_least = c[0];
      for (int e : c) {
        if (e < 0 || e >= universe_size || seen[e]++) throw InputError("not a partition");
      }
    }
    for (int s : seen)
      if (!s) throw InputError("partition does not cover universe");
  }
};

// At least k classes of size at least k.
inline bool is_k_big(const Partition& p, int k) {
  int count = 0;
  for (const auto& c : p.classes)
    if ((int)c.size() >= k) ++count;
  return count >= k;
}

// Largest k for which the partition is k-big (>= 1 on a nonempty universe).
inline int bigness(const Partition& p) {
  std::vector<int> sizes;
  sizes.reserve(p.classes.size());
  for (const auto& c : p.classes) sizes.push_back((int)c.size());
  std::sort(sizes.rbegin(), sizes.rend());
  int k = 0;
  for (int i = 0; i < (int)sizes.size(); ++i)
    if (sizes[i] >= i + 1) k = i + 1;
  return k;
}

// Builds a partition from a binary relation if it is an equivalence on the
// whole universe; nullopt otherwise.
inline std::optional<Partition> partition_from_equivalence(const RelationTable& r,
                                                           const Universe& u) {
  if (r.arity != 2) return std::nullopt;
  std::vector<std::vector<bool>> adj(u.size, std::vector<bool>(u.size, false));
  for (const auto& t : r.tuples) adj[t[0]][t[1]] = true;
  for (int x = 0; x < u.size; ++x) {
    if (!adj[x][x]) return std::nullopt;
    for (int y = 0; y < u.size; ++y) {
      if (adj[x][y] != adj[y][x]) return std::nullopt;
      if (!adj[x][y]) continue;
      for (int z = 0; z < u.size; ++z)
        if (adj[y][z] && !adj[x][z]) return std::nullopt;
    }
  }
  Partition p;
  std::vector<bool> done(u.size, false);
  for (int x = 0; x < u.size; ++x) {
    if (done[x]) continue;
    std::vector<int> cls;
    for (int y = 0; y < u.size; ++y)
      if (adj[x][y]) {
        cls.push_back(y);
        done[y] = true;
      }
    p.classes.push_back(std::move(cls));
  }
  return p;
}

// All same-class pairs, as a binary relation.
inline RelationTable pairs_of_partition(const Partition& p) {
  std::set<Tuple> out;
  for (const auto& c : p.classes)
    for (int x : c)
      for (int y : c) out.insert({x, y});
  return RelationTable(2, std::move(out));
}

}  // namespace fmlab
