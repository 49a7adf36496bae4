#pragma once

#include <vector>

namespace seriation {

// A bijection vertex -> {1..n}, stored as the rank of each vertex.
// Orderings are always interpreted modulo total reversal downstream.
struct Ordering {
  std::vector<int> rank;

  int n() const { return static_cast<int>(rank.size()); }

  static Ordering identity(int n) {
    Ordering o;
    o.rank.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) o.rank[static_cast<std::size_t>(i)] = i + 1;
    return o;
  }

  Ordering reversed() const {
    Ordering o;
    const int m = n();
    o.rank.resize(rank.size());
    for (int i = 0; i < m; ++i)
      o.rank[static_cast<std::size_t>(i)] = m + 1 - rank[static_cast<std::size_t>(i)];
    return o;
  }

  // vertices listed in rank order (position 0 = rank 1)
  std::vector<int> by_rank() const {
    std::vector<int> pos(rank.size(), -1);
    for (int v = 0; v < n(); ++v) pos[static_cast<std::size_t>(rank[static_cast<std::size_t>(v)] - 1)] = v;
    return pos;
  }

  bool valid() const {
    std::vector<char> seen(rank.size(), 0);
    for (int r : rank) {
      if (r < 1 || r > n() || seen[static_cast<std::size_t>(r - 1)]) return false;
      seen[static_cast<std::size_t>(r - 1)] = 1;
    }
    return true;
  }

  bool operator==(const Ordering&) const = default;
};

}  // namespace seriation
