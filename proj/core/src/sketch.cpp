#include "seriation/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "seriation/errors.hpp"
#include "seriation/interval.hpp"
#include "seriation/parallel.hpp"

namespace seriation {

void SketchParams::validate(int n) const {
  if (m < 3 || m > n) throw std::invalid_argument("subsample size must satisfy 3 <= m <= n");
  if (t < 1) throw std::invalid_argument("need at least one successful subsample");
  if (zeta < 1 || 2 * zeta >= m) throw std::invalid_argument("window must satisfy 1 <= zeta < m/2");
  if (max_attempts < t) throw std::invalid_argument("attempt cap below required successes");
}

SketchParams paper_default_params(int n) {
  if (n < 3) throw std::invalid_argument("need n >= 3");
  const double ln = std::log(static_cast<double>(n));
  SketchParams p;
  p.m = static_cast<int>(std::clamp<long long>(std::llround(std::pow(ln, 5.0)), 3, n));
  const double traw = std::pow(static_cast<double>(n) * ln, 2.0);
  p.t = traw >= 9.0e18 ? static_cast<std::int64_t>(9.0e18) : std::llround(traw);
  p.zeta = static_cast<int>(std::llround(4.0 * std::pow(ln, 4.0)));
  p.zeta = std::max(1, std::min(p.zeta, (p.m - 1) / 2));
  p.max_attempts = p.t >= static_cast<std::int64_t>(4.5e17) ? static_cast<std::int64_t>(9.0e18) : 20 * p.t;
  p.asymptotic = true;
  return p;
}

SketchParams desk_default_params(int n) {
  if (n < 3) throw std::invalid_argument("need n >= 3");
  const double ln = std::log(static_cast<double>(n));
  SketchParams p;
  // Subsample size grows ~ (n/ln n)^(1/4): sampling noise flips square-graph
  // edges near the threshold, and the chance an m-subsample dodges every
  // flipped pair decays fast in m. Larger m at n=300 already rejects
  // essentially every draw.
  p.m = static_cast<int>(std::min<long long>(
      n, std::max<long long>(8, std::llround(6.0 * std::pow(n / ln, 0.25)))));
  const double ratio = static_cast<double>(n) / p.m;
  p.t = static_cast<std::int64_t>(std::ceil(ratio * ratio * ln));
  p.zeta = std::max(2, static_cast<int>(std::llround(p.m / 8.0)));
  p.zeta = std::max(1, std::min(p.zeta, (p.m - 1) / 2));
  p.max_attempts = 20 * p.t;
  p.asymptotic = false;
  return p;
}

std::optional<SketchSample> ordered_subsample(const Graph& h, int m, RngStream stream) {
  const int n = h.n;
  if (m > n || m < 1) throw std::invalid_argument("subsample size out of range");
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < m; ++i) {
    const int j = i + static_cast<int>(stream.below(static_cast<std::uint64_t>(i),
                                                    static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<int> chosen(pool.begin(), pool.begin() + m);
  auto [sub, ids] = induced_subgraph(h, chosen);
  auto rec = recognize_unit_interval(sub);
  if (rec.status != IntervalStatus::UnitInterval) return std::nullopt;
  SketchSample s;
  s.vertices = std::move(ids);
  s.order = std::move(*rec.ordering);
  return s;
}

namespace {

struct WindowBits {
  std::vector<std::uint64_t> low, high;  // per sample, n-vertex bitsets
  int words = 0;
  const std::uint64_t* lo(std::size_t j) const { return low.data() + j * static_cast<std::size_t>(words); }
  const std::uint64_t* hi(std::size_t j) const { return high.data() + j * static_cast<std::size_t>(words); }
};

WindowBits build_windows(const std::vector<SketchSample>& samples, int zeta, int n) {
  WindowBits wb;
  wb.words = (n + 63) / 64;
  wb.low.assign(samples.size() * static_cast<std::size_t>(wb.words), 0);
  wb.high.assign(samples.size() * static_cast<std::size_t>(wb.words), 0);
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const auto& s = samples[j];
    const int m = static_cast<int>(s.vertices.size());
    for (std::size_t loc = 0; loc < s.vertices.size(); ++loc) {
      const int r = s.order.rank[loc];
      const int v = s.vertices[loc];
      if (r < zeta)
        wb.low[j * static_cast<std::size_t>(wb.words) + static_cast<std::size_t>(v >> 6)] |= 1ULL << (v & 63);
      if (r > m - zeta)
        wb.high[j * static_cast<std::size_t>(wb.words) + static_cast<std::size_t>(v >> 6)] |= 1ULL << (v & 63);
    }
  }
  return wb;
}

bool intersects(const std::uint64_t* a, const std::uint64_t* b, int words) {
  for (int w = 0; w < words; ++w)
    if (a[w] & b[w]) return true;
  return false;
}

// +1 when low/low or high/high windows overlap, else -1 on a crossed
// overlap, else 0; the positive rule wins when both hold
int pair_constraint(const WindowBits& wb, std::size_t j, std::size_t k) {
  if (intersects(wb.lo(j), wb.lo(k), wb.words) || intersects(wb.hi(j), wb.hi(k), wb.words))
    return 1;
  if (intersects(wb.lo(j), wb.hi(k), wb.words) || intersects(wb.hi(j), wb.lo(k), wb.words))
    return -1;
  return 0;
}

}  // namespace

Alignment global_order(const std::vector<SketchSample>& samples, int zeta, int n_vertices,
                       int threads) {
  const std::size_t t = samples.size();
  Alignment a;
  a.signs.assign(t, 0);
  a.consistent = true;
  if (t == 0) return a;
  for (const auto& s : samples)
    if (2 * zeta >= static_cast<int>(s.vertices.size()) || zeta < 1)
      throw std::invalid_argument("window must satisfy 1 <= zeta < m/2");

  const WindowBits wb = build_windows(samples, zeta, n_vertices);

  // BFS 2-coloring, roots +1, deterministic scan order
  std::vector<std::size_t> queue;
  for (std::size_t root = 0; root < t; ++root) {
    if (a.signs[root] != 0) continue;
    a.signs[root] = 1;
    queue.assign(1, root);
    std::size_t head = 0;
    while (head < queue.size()) {
      const std::size_t x = queue[head++];
      for (std::size_t k = 0; k < t; ++k) {
        if (a.signs[k] != 0) continue;
        const int h = pair_constraint(wb, x, k);
        if (h == 0) continue;
        a.signs[k] = static_cast<std::int8_t>(h * a.signs[x]);
        queue.push_back(k);
      }
    }
  }

  // verify every constraint against the assignment
  std::vector<char> bad(t, 0);
  parallel_chunks(0, static_cast<std::int64_t>(t), threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::size_t j = static_cast<std::size_t>(lo); j < static_cast<std::size_t>(hi); ++j)
      for (std::size_t k = j + 1; k < t; ++k) {
        const int h = pair_constraint(wb, j, k);
        if (h != 0 && h != a.signs[j] * a.signs[k]) { bad[j] = 1; break; }
      }
  });
  for (char b : bad)
    if (b) { a.consistent = false; break; }
  return a;
}

Comparison sparse_sketch(const Graph& h, const SketchParams& params, int threads,
                         SketchDiagnostics* diag) {
  params.validate(h.n);
  const int n = h.n;
  const RngStream base{params.seed, rng_tag::subsample};

  std::vector<SketchSample> kept;
  kept.reserve(static_cast<std::size_t>(std::min<std::int64_t>(params.t, 1 << 20)));
  std::int64_t scanned = 0;          // attempts whose results were consumed
  std::int64_t effective_attempts = 0;

  const std::int64_t block_size = 256;
  while (static_cast<std::int64_t>(kept.size()) < params.t && scanned < params.max_attempts) {
    const std::int64_t block = std::min(block_size, params.max_attempts - scanned);
    std::vector<std::optional<SketchSample>> results(static_cast<std::size_t>(block));
    parallel_chunks(0, block, threads, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t i = lo; i < hi; ++i)
        results[static_cast<std::size_t>(i)] =
            ordered_subsample(h, params.m, base.sub(static_cast<std::uint64_t>(scanned + i)));
    });
    for (std::int64_t i = 0; i < block && static_cast<std::int64_t>(kept.size()) < params.t; ++i) {
      auto& r = results[static_cast<std::size_t>(i)];
      effective_attempts = scanned + i + 1;
      if (r) kept.push_back(std::move(*r));
    }
    scanned += block;
  }
  if (diag) {
    diag->attempts = effective_attempts;
    diag->successes = static_cast<std::int64_t>(kept.size());
  }
  if (static_cast<std::int64_t>(kept.size()) < params.t)
    throw BudgetExhausted(effective_attempts, static_cast<std::int64_t>(kept.size()), params.t);

  const Alignment align = global_order(kept, params.zeta, n, threads);
  if (diag) diag->alignment_consistent = align.consistent;

  const std::size_t npairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  std::vector<std::int32_t> votes(npairs, 0);
  std::vector<std::int32_t> cooc;
  if (diag) cooc.assign(npairs, 0);
  Comparison f(n);  // reuse its pair indexing

  std::mutex merge_mu;
  parallel_chunks(0, static_cast<std::int64_t>(kept.size()), threads,
                  [&](std::int64_t lo, std::int64_t hi) {
    std::vector<std::int32_t> local(npairs, 0);
    std::vector<std::int32_t> local_cooc(diag ? npairs : 0, 0);
    for (std::int64_t j = lo; j < hi; ++j) {
      const auto& s = kept[static_cast<std::size_t>(j)];
      const int m = static_cast<int>(s.vertices.size());
      const bool flip = align.signs[static_cast<std::size_t>(j)] == -1;
      for (std::size_t a = 0; a < s.vertices.size(); ++a) {
        int ra = s.order.rank[a];
        if (flip) ra = m + 1 - ra;
        for (std::size_t b = a + 1; b < s.vertices.size(); ++b) {
          int rb = s.order.rank[b];
          if (flip) rb = m + 1 - rb;
          const std::size_t id = f.idx(s.vertices[a], s.vertices[b]);
          local[id] += (ra < rb) ? 1 : -1;
          if (diag) ++local_cooc[id];
        }
      }
    }
    std::lock_guard<std::mutex> lock(merge_mu);
    for (std::size_t i = 0; i < npairs; ++i) votes[i] += local[i];
    if (diag)
      for (std::size_t i = 0; i < npairs; ++i) cooc[i] += local_cooc[i];
  });

  for (std::size_t i = 0; i < npairs; ++i)
    f.vals[i] = static_cast<std::int8_t>(votes[i] > 0 ? 1 : (votes[i] < 0 ? -1 : 0));
  if (diag) {
    diag->votes = std::move(votes);
    diag->cooccurrence = std::move(cooc);
  }
  return f;
}

Comparison local_refinement(const Graph& h, const Comparison& f, int threads) {
  if (f.n != h.n) throw std::invalid_argument("comparison size mismatch");
  const int n = h.n;
  Comparison out(n);
  parallel_chunks(0, n, threads, [&](std::int64_t ulo, std::int64_t uhi) {
    for (int u = static_cast<int>(ulo); u < uhi; ++u) {
      const std::uint64_t* ru = h.row(u);
      for (int v = u + 1; v < n; ++v) {
        const std::uint64_t* rv = h.row(v);
        std::int64_t duv = 0, dvu = 0;
        for (int w = 0; w < h.words; ++w) {
          std::uint64_t du = ru[w] & ~rv[w];
          std::uint64_t dv = rv[w] & ~ru[w];
          if (w == (v >> 6)) du &= ~(1ULL << (v & 63));
          if (w == (u >> 6)) dv &= ~(1ULL << (u & 63));
          while (du) {
            const int x = w * 64 + std::countr_zero(du);
            du &= du - 1;
            duv += f.get(x, v);
          }
          while (dv) {
            const int x = w * 64 + std::countr_zero(dv);
            dv &= dv - 1;
            dvu += f.get(x, u);
          }
        }
        // the +-1 sums equal (count of +1) - (count of -1) exactly
        int val;
        if (std::llabs(duv) > std::llabs(dvu)) val = duv > 0 ? 1 : -1;
        else val = dvu < 0 ? 1 : -1;
        out.vals[out.idx(u, v)] = static_cast<std::int8_t>(val);
      }
    }
  });
  return out;
}

Ordering main_estimate(const Graph& g, double alpha, const SketchParams& params, int threads,
                       SketchDiagnostics* diag) {
  if (g.n < 3) throw std::invalid_argument("need n >= 3");
  const Graph h = threshold_square(g, alpha, threads);
  SketchParams p = params;
  p.alpha = alpha;
  const Comparison f = sparse_sketch(h, p, threads, diag);
  const Comparison fr = local_refinement(h, f, threads);
  return comparison_to_order(fr);
}

}  // namespace seriation
