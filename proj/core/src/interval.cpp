#include "seriation/interval.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace seriation {

std::vector<int> lexbfs(const Graph& g, const std::vector<int>& initial_tiebreak) {
  const int n = g.n;
  if (n == 0) throw std::invalid_argument("lexbfs on empty graph");
  if (static_cast<int>(initial_tiebreak.size()) != n)
    throw std::invalid_argument("tiebreak list must cover all vertices");

  // partition refinement: an ordered list of classes, each holding vertices
  // in priority order; the head of the first class has the lexicographically
  // largest label, ties resolved by priority
  std::vector<std::vector<int>> classes{initial_tiebreak};
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<char> visited(static_cast<std::size_t>(n), 0);

  while (!classes.empty()) {
    int v = classes.front().front();
    auto& head = classes.front();
    head.erase(head.begin());
    if (head.empty()) classes.erase(classes.begin());
    visited[static_cast<std::size_t>(v)] = 1;
    order.push_back(v);

    std::vector<std::vector<int>> next;
    next.reserve(classes.size() * 2);
    for (auto& cls : classes) {
      std::vector<int> in, out;
      for (int u : cls) (g.has_edge(v, u) ? in : out).push_back(u);
      if (!in.empty()) next.push_back(std::move(in));
      if (!out.empty()) next.push_back(std::move(out));
    }
    classes = std::move(next);
  }
  return order;
}

bool is_robinsonian_under(const Graph& g, const Ordering& ordering) {
  if (ordering.n() != g.n) throw std::invalid_argument("ordering size mismatch");
  // with unit diagonal, each row's support must be one contiguous block of
  // positions containing the vertex itself
  std::vector<int> pos(static_cast<std::size_t>(g.n));
  for (int v = 0; v < g.n; ++v) pos[static_cast<std::size_t>(v)] = ordering.rank[static_cast<std::size_t>(v)] - 1;
  for (int v = 0; v < g.n; ++v) {
    int lo = pos[static_cast<std::size_t>(v)], hi = lo, cnt = 1;
    for (int u : g.neighbors(v)) {
      lo = std::min(lo, pos[static_cast<std::size_t>(u)]);
      hi = std::max(hi, pos[static_cast<std::size_t>(u)]);
      ++cnt;
    }
    if (hi - lo + 1 != cnt) return false;
  }
  return true;
}

namespace {

bool closed_twins(const Graph& g, int u, int v) {
  // closed neighborhoods equal: (row(u) | {u}) == (row(v) | {v})
  for (int w = 0; w < g.words; ++w) {
    std::uint64_t au = g.row(u)[w], av = g.row(v)[w];
    if (w == (u >> 6)) au |= 1ULL << (u & 63);
    if (w == (v >> 6)) av |= 1ULL << (v & 63);
    if (au != av) return false;
  }
  return true;
}

}  // namespace

IntervalOrderResult recognize_unit_interval(const Graph& g) {
  IntervalOrderResult res;
  if (g.n == 0) {
    res.status = IntervalStatus::Disconnected;
    return res;
  }
  if (g.n == 1) {
    res.status = IntervalStatus::UnitInterval;
    res.ordering = Ordering::identity(1);
    return res;
  }

  std::vector<int> prio(static_cast<std::size_t>(g.n));
  std::iota(prio.begin(), prio.end(), 0);
  std::vector<int> s1 = lexbfs(g, prio);

  // connectivity: after the first pick, every visited vertex must have a
  // neighbor among the earlier ones
  {
    std::vector<std::uint64_t> prefix(static_cast<std::size_t>(g.words), 0);
    prefix[static_cast<std::size_t>(s1[0] >> 6)] |= 1ULL << (s1[0] & 63);
    for (std::size_t i = 1; i < s1.size(); ++i) {
      const std::uint64_t* r = g.row(s1[i]);
      std::uint64_t any = 0;
      for (int w = 0; w < g.words; ++w) any |= r[w] & prefix[static_cast<std::size_t>(w)];
      if (!any) {
        res.status = IntervalStatus::Disconnected;
        return res;
      }
      prefix[static_cast<std::size_t>(s1[i] >> 6)] |= 1ULL << (s1[i] & 63);
    }
  }

  std::vector<int> rev(s1.rbegin(), s1.rend());
  std::vector<int> s2 = lexbfs(g, rev);
  rev.assign(s2.rbegin(), s2.rend());
  std::vector<int> s3 = lexbfs(g, rev);

  Ordering ord;
  ord.rank.resize(static_cast<std::size_t>(g.n));
  for (int i = 0; i < g.n; ++i) ord.rank[static_cast<std::size_t>(s3[static_cast<std::size_t>(i)])] = i + 1;

  if (!is_robinsonian_under(g, ord)) {
    res.status = IntervalStatus::NotUnitInterval;
    return res;
  }

  // canonicalize twin blocks: runs of equal closed neighborhoods sorted by id
  std::vector<int>& seq = s3;
  std::size_t i = 0;
  while (i < seq.size()) {
    std::size_t j = i + 1;
    while (j < seq.size() && closed_twins(g, seq[j - 1], seq[j])) ++j;
    if (j - i > 1) std::sort(seq.begin() + static_cast<std::ptrdiff_t>(i), seq.begin() + static_cast<std::ptrdiff_t>(j));
    i = j;
  }
  for (int k = 0; k < g.n; ++k) ord.rank[static_cast<std::size_t>(seq[static_cast<std::size_t>(k)])] = k + 1;

  res.status = IntervalStatus::UnitInterval;
  res.ordering = std::move(ord);
  return res;
}

namespace {

// backtracking over placements with incremental contiguity pruning: when a
// vertex is appended, any earlier neighbor of it must see only neighbors
// between them
bool extend(const Graph& g, std::vector<int>& seq, std::vector<char>& used) {
  const int n = g.n;
  const std::size_t t = seq.size();
  if (t == static_cast<std::size_t>(n)) return true;
  for (int v = 0; v < n; ++v) {
    if (used[static_cast<std::size_t>(v)]) continue;
    bool ok = true;
    // appending v at position t: for earlier i < j < t the structure is
    // already checked; verify triples (i, j, v)
    for (std::size_t i = 0; i < t && ok; ++i) {
      if (!g.has_edge(seq[i], v)) continue;
      for (std::size_t j = i + 1; j < t && ok; ++j)
        ok = g.has_edge(seq[i], seq[j]) && g.has_edge(seq[j], v);
    }
    if (!ok) continue;
    used[static_cast<std::size_t>(v)] = 1;
    seq.push_back(v);
    if (extend(g, seq, used)) return true;
    seq.pop_back();
    used[static_cast<std::size_t>(v)] = 0;
  }
  return false;
}

}  // namespace

std::optional<Ordering> brute_force_interval_order(const Graph& g) {
  if (g.n > 9) throw std::invalid_argument("brute force capped at n = 9");
  if (g.n == 0) return std::nullopt;
  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(g.n));
  std::vector<char> used(static_cast<std::size_t>(g.n), 0);
  if (!extend(g, seq, used)) return std::nullopt;
  Ordering ord;
  ord.rank.resize(static_cast<std::size_t>(g.n));
  for (int i = 0; i < g.n; ++i) ord.rank[static_cast<std::size_t>(seq[static_cast<std::size_t>(i)])] = i + 1;
  return ord;
}

}  // namespace seriation
