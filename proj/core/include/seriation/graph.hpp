#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace seriation {

// Simple undirected graph; adjacency rows are fixed-width bit sets so
// neighborhood intersections reduce to word AND + popcount.
struct Graph {
  int n = 0;
  int words = 0;                   // 64-bit words per row
  std::vector<std::uint64_t> bits; // n * words

  Graph() = default;
  explicit Graph(int n_);

  const std::uint64_t* row(int u) const { return bits.data() + static_cast<std::size_t>(u) * words; }
  std::uint64_t* row(int u) { return bits.data() + static_cast<std::size_t>(u) * words; }

  bool has_edge(int u, int v) const {
    return (row(u)[v >> 6] >> (v & 63)) & 1ULL;
  }
  void add_edge(int u, int v);
  void remove_edge(int u, int v);

  int degree(int u) const;
  std::int64_t edge_count() const;
  std::vector<int> neighbors(int u) const;
  std::vector<std::pair<int, int>> edges() const;  // u < v, lexicographic

  bool operator==(const Graph&) const = default;
};

struct CommonNeighborMatrix {
  int n = 0;
  std::vector<std::int32_t> counts;  // row-major n x n; diagonal = degree

  std::int32_t at(int i, int j) const { return counts[static_cast<std::size_t>(i) * n + j]; }
};

// counts[i][j] = |N(i) cap N(j)|; diagonal holds degrees (unused downstream).
CommonNeighborMatrix common_neighbors(const Graph& g, int threads = 1);

// Edge (u,v) iff |N(u) cap N(v)| > alpha * (n - 2), strictly. Requires n >= 3.
Graph threshold_square(const Graph& g, double alpha, int threads = 1);
Graph threshold_square_from_counts(const CommonNeighborMatrix& cn, double alpha);

// Subgraph on s (any order; deduplicated ascending) plus the map from new
// local index to original vertex id.
std::pair<Graph, std::vector<int>> induced_subgraph(const Graph& g, const std::vector<int>& s);

bool is_connected(const Graph& g);

// (N(u) \ N(v) \ {v}, N(v) \ N(u) \ {u})
std::pair<std::vector<int>, std::vector<int>> neighborhood_difference(const Graph& g, int u, int v);

}  // namespace seriation
