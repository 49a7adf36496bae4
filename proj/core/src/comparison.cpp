#include "seriation/comparison.hpp"

#include <algorithm>
#include <numeric>

namespace seriation {

Comparison comparison_from_order(const Ordering& sigma) {
  const int n = sigma.n();
  Comparison f(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      f.set(u, v, sigma.rank[static_cast<std::size_t>(u)] < sigma.rank[static_cast<std::size_t>(v)] ? 1 : -1);
  return f;
}

Ordering comparison_to_order(const Comparison& f) {
  const int n = f.n;
  // score = predecessors minus successors; ascending score recovers any
  // total order fed in as F_sigma
  std::vector<int> score(static_cast<std::size_t>(n), 0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const int s = f.get(u, v);
      if (s == 1) {
        --score[static_cast<std::size_t>(u)];
        ++score[static_cast<std::size_t>(v)];
      } else if (s == -1) {
        ++score[static_cast<std::size_t>(u)];
        --score[static_cast<std::size_t>(v)];
      }
    }
  std::vector<int> verts(static_cast<std::size_t>(n));
  std::iota(verts.begin(), verts.end(), 0);
  std::stable_sort(verts.begin(), verts.end(),
                   [&](int a, int b) { return score[static_cast<std::size_t>(a)] < score[static_cast<std::size_t>(b)]; });
  Ordering o;
  o.rank.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) o.rank[static_cast<std::size_t>(verts[static_cast<std::size_t>(i)])] = i + 1;
  return o;
}

}  // namespace seriation
