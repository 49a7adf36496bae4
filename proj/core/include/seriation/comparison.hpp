#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "seriation/ordering.hpp"

namespace seriation {

// Antisymmetric pairwise order function V x V -> {-1, 0, +1}.
// F(u,v) = +1 means u is believed to precede v. Stored on u < v only.
struct Comparison {
  int n = 0;
  std::vector<std::int8_t> vals;  // index over pairs u < v

  Comparison() = default;
  explicit Comparison(int n_)
      : n(n_), vals(static_cast<std::size_t>(n_) * (n_ - 1) / 2, 0) {}

  std::size_t idx(int u, int v) const {
    // requires u < v
    return static_cast<std::size_t>(u) * (2 * n - u - 1) / 2 +
           static_cast<std::size_t>(v - u - 1);
  }

  int get(int u, int v) const {
    if (u == v) return 0;
    return u < v ? vals[idx(u, v)] : -vals[idx(v, u)];
  }
  void set(int u, int v, int s) {
    if (u < v) vals[idx(u, v)] = static_cast<std::int8_t>(s);
    else vals[idx(v, u)] = static_cast<std::int8_t>(-s);
  }

  Comparison negated() const {
    Comparison f = *this;
    for (auto& x : f.vals) x = static_cast<std::int8_t>(-x);
    return f;
  }

  bool operator==(const Comparison&) const = default;
};

// F_sigma: +1 on pairs ordered by sigma.
Comparison comparison_from_order(const Ordering& sigma);

// Rank vertices by predecessor-minus-successor score, ascending, ties by
// vertex index. Satisfies comparison_to_order(comparison_from_order(s)) == s.
Ordering comparison_to_order(const Comparison& f);

}  // namespace seriation
