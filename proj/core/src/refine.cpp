#include "seriation/refine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "seriation/parallel.hpp"
#include "seriation/rng.hpp"
#include "seriation/sketch.hpp"

namespace seriation {

namespace {

std::int64_t clamp_threshold(double raw, double upper, bool* clamped) {
  if (!(raw >= 1.0)) { *clamped = true; return 1; }
  if (raw >= upper) { *clamped = true; return static_cast<std::int64_t>(upper); }
  return static_cast<std::int64_t>(raw);
}

}  // namespace

RefineSchedule build_schedule(double epsilon, std::uint64_t n) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::domain_error("epsilon must lie strictly inside (0, 0.5)");
  if (n < 3) throw std::invalid_argument("need n >= 3");

  RefineSchedule s;
  s.epsilon = epsilon;
  s.n = n;
  s.k = static_cast<int>(std::floor(-std::log2(epsilon))) + 1;
  s.beta = (epsilon - std::ldexp(1.0, -s.k)) / s.k;

  const double ln = std::log(static_cast<double>(n));
  s.p.resize(static_cast<std::size_t>(s.k));
  s.d.resize(static_cast<std::size_t>(s.k));
  for (int i = 1; i <= s.k; ++i)
    s.p[static_cast<std::size_t>(i - 1)] = std::exp(-(s.k - i) * s.beta * ln);
  s.p[static_cast<std::size_t>(s.k - 1)] = 1.0;
  s.d[0] = std::exp(-0.5 * (1.0 - s.k * s.beta) * ln);
  for (int i = 1; i < s.k; ++i)
    s.d[static_cast<std::size_t>(i)] =
        std::sqrt(s.d[static_cast<std::size_t>(i - 1)] /
                  (s.p[static_cast<std::size_t>(i - 1)] * static_cast<double>(n))) * ln;

  const double upper = std::min(static_cast<double>(n), 9.0e18);
  s.paper.resize(static_cast<std::size_t>(s.k - 1));
  s.desk.resize(static_cast<std::size_t>(s.k - 1));
  for (int i = 1; i < s.k; ++i) {
    const double pdn = s.p[static_cast<std::size_t>(i - 1)] *
                       s.d[static_cast<std::size_t>(i - 1)] * static_cast<double>(n);
    const double root = std::sqrt(std::max(pdn, 0.0));
    StageThresholds& pap = s.paper[static_cast<std::size_t>(i - 1)];
    pap.C1 = clamp_threshold(std::ceil(pdn * std::pow(ln, 4.0)), upper, &pap.clamped);
    pap.C2 = clamp_threshold(std::floor(root * std::pow(ln, 6.0)), upper, &pap.clamped);
    pap.C3 = clamp_threshold(std::floor(root * ln * ln), upper, &pap.clamped);
    // Desk scale drops the polylog slack entirely. The window C1 covers half
    // the stage precision band; the vote margins sit ~3.8 sigma above the
    // binomial noise of a C1-sized window, which swept best end to end.
    StageThresholds& dsk = s.desk[static_cast<std::size_t>(i - 1)];
    dsk.C1 = clamp_threshold(std::ceil(pdn / 2.0), upper, &dsk.clamped);
    dsk.C2 = clamp_threshold(std::round(1.5 * root), upper, &dsk.clamped);
    dsk.C3 = dsk.C2;
    s.any_clamped = s.any_clamped || pap.clamped || dsk.clamped;
  }
  return s;
}

std::pair<std::vector<int>, std::vector<int>> rank_extremes(const std::vector<int>& s,
                                                            const Ordering& sigma, int c) {
  if (c < 1 || c > static_cast<int>(s.size()))
    throw std::invalid_argument("extreme count must satisfy 1 <= c <= |s|");
  for (int e : s)
    if (e < 0 || e >= static_cast<int>(sigma.rank.size()))
      throw std::invalid_argument("element outside the ordering's domain");
  std::vector<int> by_rank = s;
  std::sort(by_rank.begin(), by_rank.end(),
            [&](int a, int b) { return sigma.rank[static_cast<std::size_t>(a)] <
                                       sigma.rank[static_cast<std::size_t>(b)]; });
  std::vector<int> low(by_rank.begin(), by_rank.begin() + c);
  std::vector<int> high(by_rank.end() - c, by_rank.end());
  std::reverse(high.begin(), high.end());
  return {std::move(high), std::move(low)};
}

namespace {

struct VertexSets {
  std::vector<int> newbies;        // v2 \ v1, ascending
  std::vector<int> pos_v1;         // id -> local index in v1, else -1
  std::vector<int> pos_v2;         // id -> local index in v2, else -1
  std::vector<int> pos_new;        // id -> local index in newbies, else -1
  std::vector<std::uint64_t> v1_mask, new_mask;
};

VertexSets split_sets(const Graph& g, const std::vector<int>& v1, const std::vector<int>& v2) {
  VertexSets vs;
  vs.pos_v1.assign(static_cast<std::size_t>(g.n), -1);
  vs.pos_v2.assign(static_cast<std::size_t>(g.n), -1);
  vs.pos_new.assign(static_cast<std::size_t>(g.n), -1);
  vs.v1_mask.assign(static_cast<std::size_t>(g.words), 0);
  vs.new_mask.assign(static_cast<std::size_t>(g.words), 0);
  auto check = [&](const std::vector<int>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 0 || v[i] >= g.n) throw std::invalid_argument("vertex id out of range");
      if (i > 0 && v[i] <= v[i - 1]) throw std::invalid_argument(name);
    }
  };
  check(v1, "v1 must be strictly ascending");
  check(v2, "v2 must be strictly ascending");
  for (std::size_t i = 0; i < v1.size(); ++i) {
    vs.pos_v1[static_cast<std::size_t>(v1[i])] = static_cast<int>(i);
    vs.v1_mask[static_cast<std::size_t>(v1[i] >> 6)] |= 1ULL << (v1[i] & 63);
  }
  for (std::size_t i = 0; i < v2.size(); ++i) {
    const int id = v2[i];
    vs.pos_v2[static_cast<std::size_t>(id)] = static_cast<int>(i);
    if (vs.pos_v1[static_cast<std::size_t>(id)] < 0) {
      vs.pos_new[static_cast<std::size_t>(id)] = static_cast<int>(vs.newbies.size());
      vs.newbies.push_back(id);
      vs.new_mask[static_cast<std::size_t>(id >> 6)] |= 1ULL << (id & 63);
    }
  }
  for (int id : v1)
    if (vs.pos_v2[static_cast<std::size_t>(id)] < 0)
      throw std::invalid_argument("v1 must be a subset of v2");
  return vs;
}

}  // namespace

Ordering refine(const Graph& g, const std::vector<int>& v1, const std::vector<int>& v2,
                const Ordering& sigma1, std::int64_t C1, std::int64_t C2, std::int64_t C3,
                const RefineOptions& opts, RefineDiagnostics* diag) {
  if (C1 < 1 || C2 < 1 || C3 < 1) throw std::invalid_argument("thresholds must be >= 1");
  if (sigma1.rank.size() != v1.size() || !sigma1.valid())
    throw std::invalid_argument("sigma1 must be a valid ordering of v1");
  const VertexSets vs = split_sets(g, v1, v2);
  const std::vector<int>& nw = vs.newbies;
  const int nn = static_cast<int>(nw.size());
  const int n2 = static_cast<int>(v2.size());

  if (diag) {
    *diag = RefineDiagnostics{};
    diag->new_vertices = nw;
  }
  if (nn == 0) return sigma1;

  // Phase 1: pairwise margin votes among the incoming vertices, anchored
  // on the extreme-ranked members of v1 adjacent to either endpoint.
  Comparison f2_new(nn);
  std::int64_t contradictions = 0;
  std::mutex mu;
  parallel_chunks(0, nn, opts.threads, [&](std::int64_t lo, std::int64_t hi) {
    std::vector<int> cand;
    std::int64_t local_contra = 0;
    for (int a = static_cast<int>(lo); a < hi; ++a) {
      const int i = nw[static_cast<std::size_t>(a)];
      const std::uint64_t* ri = g.row(i);
      for (int b = a + 1; b < nn; ++b) {
        const int j = nw[static_cast<std::size_t>(b)];
        const std::uint64_t* rj = g.row(j);
        cand.clear();
        for (int w = 0; w < g.words; ++w) {
          std::uint64_t bits = (ri[w] | rj[w]) & vs.v1_mask[static_cast<std::size_t>(w)];
          while (bits) {
            const int id = w * 64 + std::countr_zero(bits);
            bits &= bits - 1;
            cand.push_back(vs.pos_v1[static_cast<std::size_t>(id)]);
          }
        }
        if (cand.empty()) continue;
        const int c = static_cast<int>(std::min<std::int64_t>(C1, cand.size()));
        auto [top, bot] = rank_extremes(cand, sigma1, c);
        std::int64_t ni_top = 0, nj_top = 0, ni_bot = 0, nj_bot = 0;
        for (int loc : top) {
          const int id = v1[static_cast<std::size_t>(loc)];
          ni_top += g.has_edge(i, id);
          nj_top += g.has_edge(j, id);
        }
        for (int loc : bot) {
          const int id = v1[static_cast<std::size_t>(loc)];
          ni_bot += g.has_edge(i, id);
          nj_bot += g.has_edge(j, id);
        }
        const bool before = nj_top > ni_top + C2 || ni_bot > nj_bot + C2;
        const bool after = ni_top > nj_top + C2 || nj_bot > ni_bot + C2;
        int val = 0;
        if (before && after) {
          ++local_contra;
          val = opts.plus_priority ? 1 : 0;
        } else if (before) {
          val = 1;
        } else if (after) {
          val = -1;
        }
        if (val != 0) f2_new.set(a, b, static_cast<std::int8_t>(val));
      }
    }
    if (local_contra) {
      std::lock_guard<std::mutex> lock(mu);
      contradictions += local_contra;
    }
  });
  const Ordering sigma_new = comparison_to_order(f2_new);
  if (diag) {
    diag->f2_new = f2_new;
    diag->contradictory_pairs = contradictions;
  }

  // Phase 2: place every v2 vertex by the extreme new-vertex ranks it touches
  std::vector<int> tval(static_cast<std::size_t>(n2), 0);
  std::vector<int> bval(static_cast<std::size_t>(n2), nn + 1);
  std::vector<char> degen(static_cast<std::size_t>(n2), 0);
  parallel_chunks(0, n2, opts.threads, [&](std::int64_t lo, std::int64_t hi) {
    for (int u = static_cast<int>(lo); u < hi; ++u) {
      const int id = v2[static_cast<std::size_t>(u)];
      const std::uint64_t* r = g.row(id);
      int tmax = 0, bmin = nn + 1;
      for (int w = 0; w < g.words; ++w) {
        std::uint64_t bits = r[w] & vs.new_mask[static_cast<std::size_t>(w)];
        while (bits) {
          const int nb = w * 64 + std::countr_zero(bits);
          bits &= bits - 1;
          const int rk = sigma_new.rank[static_cast<std::size_t>(
              vs.pos_new[static_cast<std::size_t>(nb)])];
          tmax = std::max(tmax, rk);
          bmin = std::min(bmin, rk);
        }
      }
      tval[static_cast<std::size_t>(u)] = tmax;
      bval[static_cast<std::size_t>(u)] = bmin;
      if (tmax == 0) degen[static_cast<std::size_t>(u)] = 1;
    }
  });
  if (diag) {
    diag->t_sentinel = tval;
    diag->b_sentinel = bval;
    for (int u = 0; u < n2; ++u)
      if (degen[static_cast<std::size_t>(u)]) diag->degenerate.push_back(v2[static_cast<std::size_t>(u)]);
  }

  Comparison f2(n2);
  parallel_chunks(0, n2, opts.threads, [&](std::int64_t lo, std::int64_t hi) {
    for (int u = static_cast<int>(lo); u < hi; ++u) {
      const int iu = vs.pos_new[static_cast<std::size_t>(v2[static_cast<std::size_t>(u)])];
      for (int v = u + 1; v < n2; ++v) {
        const int iv = vs.pos_new[static_cast<std::size_t>(v2[static_cast<std::size_t>(v)])];
        if (iu >= 0 && iv >= 0) {
          f2.set(u, v, f2_new.get(iu, iv));
          continue;
        }
        if (degen[static_cast<std::size_t>(u)] || degen[static_cast<std::size_t>(v)]) continue;
        const int dt = tval[static_cast<std::size_t>(v)] - tval[static_cast<std::size_t>(u)];
        const int db = bval[static_cast<std::size_t>(v)] - bval[static_cast<std::size_t>(u)];
        const bool before = dt > C3 || db > C3;
        const bool after = -dt > C3 || -db > C3;
        int val = 0;
        if (before && after) val = opts.plus_priority ? 1 : 0;
        else if (before) val = 1;
        else if (after) val = -1;
        if (val != 0) f2.set(u, v, static_cast<std::int8_t>(val));
      }
    }
  });
  return comparison_to_order(f2);
}

Ordering iterative_estimate(const Graph& g, const IterativeParams& params,
                            InitialOrderer initial, IterativeDiagnostics* diag) {
  if (g.n < 3) throw std::invalid_argument("need n >= 3");
  const RefineSchedule sched = build_schedule(params.epsilon, static_cast<std::uint64_t>(g.n));

  // one shared uniform per vertex makes the stage sets nested
  const RngStream marks{params.seed, rng_tag::stage_marks};
  std::vector<double> mark(static_cast<std::size_t>(g.n));
  for (int j = 0; j < g.n; ++j) mark[static_cast<std::size_t>(j)] = marks.u01(static_cast<std::uint64_t>(j));

  std::vector<std::vector<int>> stage_sets(static_cast<std::size_t>(sched.k));
  for (int i = 0; i < sched.k; ++i) {
    const double pi = sched.p[static_cast<std::size_t>(i)];
    for (int j = 0; j < g.n; ++j)
      if (mark[static_cast<std::size_t>(j)] < pi || pi >= 1.0)
        stage_sets[static_cast<std::size_t>(i)].push_back(j);
    if (static_cast<int>(stage_sets[static_cast<std::size_t>(i)].size()) < 3)
      throw std::runtime_error("stage set too small to order");
  }
  if (diag) {
    diag->schedule = sched;
    diag->stage_sizes.clear();
    for (const auto& s : stage_sets) diag->stage_sizes.push_back(static_cast<std::int64_t>(s.size()));
    diag->first_stage.reset();
  }

  InitialOrderer hook = std::move(initial);
  if (!hook) {
    hook = [&params](const Graph& sub, std::uint64_t seed) {
      SketchParams sp = params.paper_sketch ? paper_default_params(sub.n)
                                            : desk_default_params(sub.n);
      sp.seed = seed;
      return main_estimate(sub, params.alpha, sp, params.threads);
    };
  }
  auto [sub, ids] = induced_subgraph(g, stage_sets[0]);
  Ordering sigma = hook(sub, RngStream{params.seed, rng_tag::initial_hook}.bits(0));
  if (sigma.rank.size() != ids.size() || !sigma.valid())
    throw std::runtime_error("initial orderer returned an invalid ordering");

  RefineOptions ropts;
  ropts.threads = params.threads;
  for (int i = 0; i + 1 < sched.k; ++i) {
    const StageThresholds& th = (params.paper_thresholds ? sched.paper : sched.desk)
        [static_cast<std::size_t>(i)];
    RefineDiagnostics stage_diag;
    RefineDiagnostics* dp = (diag && i == 0) ? &stage_diag : nullptr;
    sigma = refine(g, stage_sets[static_cast<std::size_t>(i)],
                   stage_sets[static_cast<std::size_t>(i + 1)], sigma,
                   th.C1, th.C2, th.C3, ropts, dp);
    if (dp) diag->first_stage = std::move(stage_diag);
  }
  return sigma;
}

}  // namespace seriation
