#include "seriation/graph.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "seriation/parallel.hpp"

namespace seriation {

Graph::Graph(int n_) : n(n_), words((n_ + 63) / 64) {
  if (n_ < 0) throw std::invalid_argument("graph size must be nonnegative");
  bits.assign(static_cast<std::size_t>(n) * words, 0ULL);
}

void Graph::add_edge(int u, int v) {
  if (u == v) throw std::invalid_argument("self loops not allowed");
  if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("vertex out of range");
  row(u)[v >> 6] |= 1ULL << (v & 63);
  row(v)[u >> 6] |= 1ULL << (u & 63);
}

void Graph::remove_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("vertex out of range");
  row(u)[v >> 6] &= ~(1ULL << (v & 63));
  row(v)[u >> 6] &= ~(1ULL << (u & 63));
}

int Graph::degree(int u) const {
  int deg = 0;
  const std::uint64_t* r = row(u);
  for (int w = 0; w < words; ++w) deg += std::popcount(r[w]);
  return deg;
}

std::int64_t Graph::edge_count() const {
  std::int64_t twice = 0;
  for (int u = 0; u < n; ++u) twice += degree(u);
  return twice / 2;
}

std::vector<int> Graph::neighbors(int u) const {
  std::vector<int> out;
  const std::uint64_t* r = row(u);
  for (int w = 0; w < words; ++w) {
    std::uint64_t x = r[w];
    while (x) {
      int b = std::countr_zero(x);
      out.push_back(w * 64 + b);
      x &= x - 1;
    }
  }
  return out;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < n; ++u)
    for (int v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

namespace {

int intersect_count(const std::uint64_t* a, const std::uint64_t* b, int words) {
  int c = 0;
  for (int w = 0; w < words; ++w) c += std::popcount(a[w] & b[w]);
  return c;
}

}  // namespace

CommonNeighborMatrix common_neighbors(const Graph& g, int threads) {
  CommonNeighborMatrix cn;
  cn.n = g.n;
  cn.counts.assign(static_cast<std::size_t>(g.n) * g.n, 0);
  parallel_chunks(0, g.n, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (int i = static_cast<int>(lo); i < hi; ++i) {
      auto* out = cn.counts.data() + static_cast<std::size_t>(i) * g.n;
      out[i] = g.degree(i);
      for (int j = 0; j < g.n; ++j) {
        if (j == i) continue;
        int c = intersect_count(g.row(i), g.row(j), g.words);
        // an edge between i and j never counts either endpoint: the rows
        // are irreflexive, so the intersection already excludes i and j
        out[j] = c;
      }
    }
  });
  return cn;
}

Graph threshold_square(const Graph& g, double alpha, int threads) {
  if (g.n < 3) throw std::invalid_argument("threshold_square needs n >= 3");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  Graph h(g.n);
  const double bar = alpha * (g.n - 2);
  parallel_chunks(0, g.n, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (int u = static_cast<int>(lo); u < hi; ++u) {
      std::uint64_t* out = h.row(u);
      for (int v = 0; v < g.n; ++v) {
        if (v == u) continue;
        if (static_cast<double>(intersect_count(g.row(u), g.row(v), g.words)) > bar)
          out[v >> 6] |= 1ULL << (v & 63);
      }
    }
  });
  return h;
}

Graph threshold_square_from_counts(const CommonNeighborMatrix& cn, double alpha) {
  if (cn.n < 3) throw std::invalid_argument("threshold_square needs n >= 3");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  Graph h(cn.n);
  const double bar = alpha * (cn.n - 2);
  for (int u = 0; u < cn.n; ++u)
    for (int v = u + 1; v < cn.n; ++v)
      if (static_cast<double>(cn.at(u, v)) > bar) h.add_edge(u, v);
  return h;
}

std::pair<Graph, std::vector<int>> induced_subgraph(const Graph& g, const std::vector<int>& s) {
  std::vector<int> ids(s);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.empty()) throw std::invalid_argument("induced_subgraph on empty set");
  if (ids.front() < 0 || ids.back() >= g.n) throw std::invalid_argument("vertex out of range");
  Graph sub(static_cast<int>(ids.size()));
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = a + 1; b < ids.size(); ++b)
      if (g.has_edge(ids[a], ids[b])) sub.add_edge(static_cast<int>(a), static_cast<int>(b));
  return {std::move(sub), std::move(ids)};
}

bool is_connected(const Graph& g) {
  if (g.n == 0) return false;
  std::vector<int> stack{0};
  std::vector<char> seen(static_cast<std::size_t>(g.n), 0);
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    const std::uint64_t* r = g.row(u);
    for (int w = 0; w < g.words; ++w) {
      std::uint64_t x = r[w];
      while (x) {
        int v = w * 64 + std::countr_zero(x);
        x &= x - 1;
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++reached;
          stack.push_back(v);
        }
      }
    }
  }
  return reached == g.n;
}

std::pair<std::vector<int>, std::vector<int>> neighborhood_difference(const Graph& g, int u, int v) {
  if (u == v) throw std::invalid_argument("neighborhood_difference needs distinct vertices");
  std::vector<int> only_u, only_v;
  const std::uint64_t* ru = g.row(u);
  const std::uint64_t* rv = g.row(v);
  for (int w = 0; w < g.words; ++w) {
    std::uint64_t du = ru[w] & ~rv[w];
    std::uint64_t dv = rv[w] & ~ru[w];
    while (du) {
      int x = w * 64 + std::countr_zero(du);
      du &= du - 1;
      if (x != v) only_u.push_back(x);
    }
    while (dv) {
      int x = w * 64 + std::countr_zero(dv);
      dv &= dv - 1;
      if (x != u) only_v.push_back(x);
    }
  }
  return {std::move(only_u), std::move(only_v)};
}

}  // namespace seriation
