#include "seriation/alpha_scan.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "seriation/parallel.hpp"
#include "seriation/rng.hpp"
#include "seriation/sketch.hpp"

namespace seriation {

namespace {

double pig_rate(const Graph& h, int trials, int m, RngStream stream, int threads) {
  std::vector<char> ok(static_cast<std::size_t>(trials), 0);
  parallel_chunks(0, trials, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t t = lo; t < hi; ++t)
      if (ordered_subsample(h, m, stream.sub(static_cast<std::uint64_t>(t))))
        ok[static_cast<std::size_t>(t)] = 1;
  });
  std::int64_t succ = 0;
  for (char c : ok) succ += c;
  return static_cast<double>(succ) / trials;
}

std::vector<GoodnessPoint> goodness_points(const CommonNeighborMatrix& cn, double alpha,
                                           int threads) {
  const int n = cn.n;
  const double scale = 1.0 / (n - 2);
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      dist.push_back(std::abs(cn.at(u, v) * scale - alpha));
  std::sort(dist.begin(), dist.end());

  std::vector<GoodnessPoint> pts;
  for (double q : {0.01, 0.02, 0.05}) {
    const std::size_t at = static_cast<std::size_t>(q * (dist.size() - 1));
    const double dp = std::max(dist[at], 1e-12);
    std::vector<int> per_v(static_cast<std::size_t>(n), 0);
    parallel_chunks(0, n, threads, [&](std::int64_t lo, std::int64_t hi) {
      for (int v = static_cast<int>(lo); v < hi; ++v) {
        int cnt = 0;
        for (int w = 0; w < n; ++w)
          if (w != v && std::abs(cn.at(w, v) * scale - alpha) <= dp) ++cnt;
        per_v[static_cast<std::size_t>(v)] = cnt;
      }
    });
    const int worst = *std::max_element(per_v.begin(), per_v.end());
    pts.push_back({dp, worst / (dp * n)});
  }
  return pts;
}

double separation_ratio(const Graph& h, const CommonNeighborMatrix& cn, double bar,
                        int sep_sample, int threads) {
  const int n = h.n;
  const int words = h.words;
  // strictly-below rows; strictly-above rows are exactly h's rows
  std::vector<std::uint64_t> below(static_cast<std::size_t>(n) * words, 0);
  parallel_chunks(0, n, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (int v = static_cast<int>(lo); v < hi; ++v)
      for (int w = 0; w < n; ++w)
        if (w != v && static_cast<double>(cn.at(v, w)) < bar)
          below[static_cast<std::size_t>(v) * words + (w >> 6)] |= 1ULL << (w & 63);
  });

  const int samples = std::max(1, std::min(sep_sample, n));
  const int window = std::max(1, n / 4);
  if (window >= n) return 0.0;
  std::vector<double> per_sample(static_cast<std::size_t>(samples), 0.0);
  parallel_chunks(0, samples, threads, [&](std::int64_t lo, std::int64_t hi) {
    std::vector<int> s(static_cast<std::size_t>(n));
    for (int t = static_cast<int>(lo); t < hi; ++t) {
      const int v = static_cast<int>((static_cast<std::int64_t>(t) * n) / samples);
      const std::uint64_t* pv = h.row(v);
      const std::uint64_t* qv = below.data() + static_cast<std::size_t>(v) * words;
      for (int u = 0; u < n; ++u) {
        const std::uint64_t* pu = h.row(u);
        const std::uint64_t* qu = below.data() + static_cast<std::size_t>(u) * words;
        int cnt = 0;
        for (int w = 0; w < words; ++w)
          cnt += std::popcount(pv[w] & qu[w]) + std::popcount(qv[w] & pu[w]);
        s[static_cast<std::size_t>(u)] = cnt;
      }
      std::sort(s.begin(), s.end());
      double worst = std::numeric_limits<double>::infinity();
      for (int i = 0; i + window < n; ++i)
        worst = std::min(worst, static_cast<double>(s[static_cast<std::size_t>(i + window)] -
                                                    s[static_cast<std::size_t>(i)]) / window);
      per_sample[static_cast<std::size_t>(t)] = worst;
    }
  });
  return *std::min_element(per_sample.begin(), per_sample.end());
}

std::int64_t disjoint_pairs(const Graph& h, int threads) {
  const int n = h.n;
  std::vector<std::int64_t> per_u(static_cast<std::size_t>(n), 0);
  parallel_chunks(0, n, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (int u = static_cast<int>(lo); u < hi; ++u) {
      const std::uint64_t* ru = h.row(u);
      std::int64_t cnt = 0;
      for (int v = u + 1; v < n; ++v) {
        const std::uint64_t* rv = h.row(v);
        bool hit = false;
        for (int w = 0; w < h.words; ++w)
          if (ru[w] & rv[w]) { hit = true; break; }
        if (!hit) ++cnt;
      }
      per_u[static_cast<std::size_t>(u)] = cnt;
    }
  });
  std::int64_t total = 0;
  for (std::int64_t c : per_u) total += c;
  return total;
}

}  // namespace

std::vector<AlphaDiagnostics> scan_alpha(const Graph& g, const std::vector<double>& candidates,
                                         int trials, int m, std::uint64_t seed,
                                         const ScanOptions& opts) {
  if (candidates.empty()) throw std::invalid_argument("need at least one candidate");
  if (g.n < 3) throw std::invalid_argument("need n >= 3");
  if (m < 1 || m > g.n) throw std::invalid_argument("subsample size out of range");
  if (trials < 1) throw std::invalid_argument("need at least one trial");

  const CommonNeighborMatrix cn = common_neighbors(g, opts.threads);
  const int n = g.n;
  const RngStream base{seed, rng_tag::alpha_scan};

  std::vector<AlphaDiagnostics> out;
  out.reserve(candidates.size());
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const double alpha = candidates[ci];
    const double bar = alpha * (n - 2);
    const Graph h = threshold_square_from_counts(cn, alpha);

    AlphaDiagnostics d;
    d.alpha = alpha;

    d.pig_success_rate = pig_rate(h, trials, m, base.sub(ci), opts.threads);
    d.pig_pass = d.pig_success_rate >= opts.pig_pass_rate;

    d.goodness_points = goodness_points(cn, alpha, opts.threads);
    d.goodness_pass = std::all_of(d.goodness_points.begin(), d.goodness_points.end(),
                                  [&](const GoodnessPoint& p) { return p.measured_A <= opts.a_cap; });

    int min_deg = n;
    for (int v = 0; v < n; ++v) {
      int deg = 0;
      for (int w = 0; w < n; ++w)
        if (w != v && static_cast<double>(cn.at(w, v)) >= bar) ++deg;
      min_deg = std::min(min_deg, deg);
    }
    d.connect_eps_measured = static_cast<double>(min_deg) / n;
    d.connectivity_pass = static_cast<double>(min_deg) > opts.eps * n;

    d.sep_worst_ratio = separation_ratio(h, cn, bar, opts.sep_sample, opts.threads);
    d.separation_pass = d.sep_worst_ratio >= opts.b_min;

    d.split_pairs = disjoint_pairs(h, opts.threads);
    d.split_required = opts.eps * opts.eps * static_cast<double>(n) * n / 2.0;
    d.split_pass = static_cast<double>(d.split_pairs) >= d.split_required;

    out.push_back(std::move(d));
  }
  return out;
}

std::optional<double> pick_alpha(const std::vector<AlphaDiagnostics>& diags) {
  std::optional<double> best;
  double best_rate = -1.0;
  for (const auto& d : diags) {
    if (!d.connectivity_pass || !d.split_pass) continue;
    if (d.pig_success_rate > best_rate ||
        (d.pig_success_rate == best_rate && best && d.alpha < *best)) {
      best = d.alpha;
      best_rate = d.pig_success_rate;
    }
  }
  return best;
}

std::vector<std::int64_t> sharp_disagreement_counts(const Comparison& f2, int threads) {
  const int n = f2.n;
  const int words = (n + 63) / 64;
  std::vector<std::uint64_t> plus(static_cast<std::size_t>(n) * words, 0);
  std::vector<std::uint64_t> minus(static_cast<std::size_t>(n) * words, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int v = f2.get(i, j);
      if (v == 1) plus[static_cast<std::size_t>(i) * words + (j >> 6)] |= 1ULL << (j & 63);
      else if (v == -1) minus[static_cast<std::size_t>(i) * words + (j >> 6)] |= 1ULL << (j & 63);
    }

  std::vector<std::vector<std::int64_t>> per_i(static_cast<std::size_t>(n));
  parallel_chunks(0, n, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (int i = static_cast<int>(lo); i < hi; ++i) {
      const std::uint64_t* after_i = plus.data() + static_cast<std::size_t>(i) * words;
      const std::uint64_t* row_m = minus.data() + static_cast<std::size_t>(i) * words;
      for (int w = 0; w < words; ++w) {
        std::uint64_t bits = row_m[w];
        while (bits) {
          const int j = w * 64 + std::countr_zero(bits);
          bits &= bits - 1;
          // k ordered after i and before j while f2 claims j before i
          const std::uint64_t* before_j = minus.data() + static_cast<std::size_t>(j) * words;
          std::int64_t cnt = 0;
          for (int x = 0; x < words; ++x) cnt += std::popcount(after_i[x] & before_j[x]);
          per_i[static_cast<std::size_t>(i)].push_back(cnt);
        }
      }
    }
  });
  std::vector<std::int64_t> out;
  for (auto& v : per_i) out.insert(out.end(), v.begin(), v.end());
  return out;
}

bool diagnose_sharp_boundary(const std::vector<std::int64_t>& f2_disagreements, double d2,
                             std::int64_t n, double slack) {
  if (f2_disagreements.empty()) return true;
  const std::int64_t worst = *std::max_element(f2_disagreements.begin(), f2_disagreements.end());
  return static_cast<double>(worst) <= slack * d2 * static_cast<double>(n);
}

}  // namespace seriation
