#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fmlab {

inline int ceil_sqrt(int n) {
  int r = 0;
  while (r * r < n) ++r;
  return r;
}

inline int ceil_log2(int n) {
  int r = 0;
  while ((1LL << r) < n) ++r;
  return r;
}

inline bool is_identifier(const std::string& s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  return true;
}

// Odometer over fixed-radix tuples; calls fn on every tuple of `len` values in
// [0, radix), in lexicographic order. Handles len == 0 (one empty tuple).
template <typename Fn>
void for_each_tuple(int radix, int len, Fn&& fn) {
  std::vector<int> t(len, 0);
  if (radix <= 0 && len > 0) return;
  while (true) {
    fn(const_cast<const std::vector<int>&>(t));
    int i = len - 1;
    while (i >= 0 && t[i] == radix - 1) t[i--] = 0;
    if (i < 0) return;
    ++t[i];
  }
}

// Tuples drawn from an arbitrary (sorted) value pool, with repetition,
// lexicographic in pool order.
template <typename Fn>
void for_each_tuple_from(const std::vector<int>& pool, int len, Fn&& fn) {
  std::vector<int> idx(len, 0), t(len);
  if (pool.empty() && len > 0) return;
  while (true) {
    for (int i = 0; i < len; ++i) t[i] = pool[idx[i]];
    fn(const_cast<const std::vector<int>&>(t));
    int i = len - 1;
    while (i >= 0 && idx[i] + 1 == (int)pool.size()) idx[i--] = 0;
    if (i < 0) return;
    ++idx[i];
  }
}

// All k-element subsets of {0..n-1} as sorted vectors, lexicographic.
template <typename Fn>
bool for_each_subset(int n, int k, Fn&& fn) {  // fn returns false to stop
  if (k > n) return true;
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  while (true) {
    if (!fn(const_cast<const std::vector<int>&>(c))) return false;
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return true;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

// splitmix64; used to derive independent deterministic streams from one seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic stream with an exact rational Bernoulli draw (no floats).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64(state_); }

  // true with probability num/den, exactly.
  bool bernoulli(std::uint64_t num, std::uint64_t den) {
    using u128 = unsigned __int128;
    return (u128)next() * den < (u128)num * ((u128)1 << 64);
  }

  int below(int n) { return (int)(next() % (std::uint64_t)n); }

 private:
  std::uint64_t state_;
};

}  // namespace fmlab
