#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace varfield {

/// Strictly increasing list of 0-based indices into a range of size n.
using MultiIndex = std::vector<int>;

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 0; j < k; ++j) r = r * double(n - j) / double(j + 1);
  return r;
}

inline long binom_l(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int j = 0; j < k; ++j) r = r * (n - j) / (j + 1);
  return r;
}

/// All k-subsets of {0,...,n-1} in lexicographic order.
inline std::vector<MultiIndex> combinations(int n, int k) {
  std::vector<MultiIndex> out;
  if (k < 0 || k > n) return out;
  MultiIndex c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  while (true) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

/// Lexicographic rank of an increasing k-subset of {0,...,n-1}.
inline int combination_rank(const MultiIndex& c, int n) {
  int k = int(c.size());
  long rank = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < c[i]; ++v) rank += binom_l(n - 1 - v, k - 1 - i);
    prev = c[i];
  }
  return int(rank);
}

inline void check_multi_index(const MultiIndex& m, int n) {
  int prev = -1;
  for (int v : m) {
    if (v <= prev || v < 0 || v >= n) throw std::invalid_argument("multi-index must be strictly increasing within range");
    prev = v;
  }
}

/// Parity sign of the permutation that sorts the concatenation of two
/// disjoint increasing index lists. Returns 0 if they intersect.
inline int merge_sign(const MultiIndex& a, const MultiIndex& b) {
  int inversions = 0;
  for (int x : a) {
    for (int y : b) {
      if (x == y) return 0;
      if (x > y) ++inversions;
    }
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

/// Sign (-1)^{r(K)} where r(K) counts the transpositions needed to sort
/// dt^K dt^{I\K} into ascending order; K is 0-based here.
inline int block_sign(const MultiIndex& K) {
  long r = 0;
  for (size_t s = 0; s < K.size(); ++s) r += K[s] + 1;  // 1-based positions
  r -= long(K.size()) * long(K.size() + 1) / 2;
  return (r % 2 == 0) ? 1 : -1;
}

/// Complement of K in {0,...,n-1}, increasing.
inline MultiIndex complement(const MultiIndex& K, int n) {
  MultiIndex out;
  size_t j = 0;
  for (int i = 0; i < n; ++i) {
    if (j < K.size() && K[j] == i) { ++j; continue; }
    out.push_back(i);
  }
  return out;
}

inline bool contains(const MultiIndex& K, int v) {
  for (int x : K) if (x == v) return true;
  return false;
}

inline bool contains_all(const MultiIndex& K, const MultiIndex& J) {
  for (int x : J) if (!contains(K, x)) return false;
  return true;
}

/// FNV-1a hash, used to derive per-check seeds from a base seed and a name.
inline std::uint64_t hash_name(std::uint64_t seed, const char* name) {
  std::uint64_t h = 14695981039346656037ull ^ seed;
  for (const char* p = name; *p; ++p) {
    h ^= std::uint64_t(static_cast<unsigned char>(*p));
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace varfield
