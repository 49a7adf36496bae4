#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "seriation/comparison.hpp"
#include "seriation/graph.hpp"
#include "seriation/ordering.hpp"

namespace seriation {

struct StageThresholds {
  std::int64_t C1 = 1;
  std::int64_t C2 = 1;
  std::int64_t C3 = 1;
  bool clamped = false;  // true if any published-formula value hit [1, n]
};

struct RefineSchedule {
  double epsilon = 0.0;
  std::uint64_t n = 0;
  int k = 0;
  double beta = 0.0;
  std::vector<double> p;  // stage sampling rates, p[k-1] == 1 exactly
  std::vector<double> d;  // stage precision levels, strictly decreasing
  // Per transition i -> i+1 (length k-1): published formulas clamped to
  // [1, n], and desk-scale counterparts with the polylog slack stripped.
  std::vector<StageThresholds> paper;
  std::vector<StageThresholds> desk;
  bool any_clamped = false;
};

// Parameter ladder: k = floor(-log2 eps) + 1, beta = (eps - 2^-k)/k,
// p_i = n^{-(k-i) beta}, d_1 = n^{-(1 - k beta)/2},
// d_{i+1} = sqrt(d_i / (p_i n)) ln n. Throws std::domain_error unless
// 0 < eps < 0.5.
RefineSchedule build_schedule(double epsilon, std::uint64_t n);

// R = the c elements of s with highest sigma-rank, L = the c lowest;
// sigma.rank must be valid at every element of s. Throws if c > |s|.
std::pair<std::vector<int>, std::vector<int>> rank_extremes(const std::vector<int>& s,
                                                            const Ordering& sigma, int c);

struct RefineOptions {
  // Published tie rule gives +1 when both margin directions fire; default
  // abstains (F2 = 0) and counts the pair.
  bool plus_priority = false;
  int threads = 1;
};

struct RefineDiagnostics {
  std::vector<int> new_vertices;       // v2 \ v1, ascending ids
  Comparison f2_new;                   // phase-1 table over new_vertices
  std::vector<int> degenerate;         // ids with no neighbor in v2 \ v1
  std::int64_t contradictory_pairs = 0;
  std::vector<int> t_sentinel;         // recorded t(i) per v2 local index (0 = none)
  std::vector<int> b_sentinel;         // recorded b(i), |M|+1 = none
};

// Two-phase ordering upgrade: rank-window margin votes order v2 \ v1
// against sigma1, then extreme-neighbor ranks place everything else.
// v1 and v2 are ascending id lists with v1 a subset of v2; sigma1 ranks
// v1 by local index; the result ranks v2 by local index. Neighborhoods
// come from g itself, never from a thresholded square.
Ordering refine(const Graph& g, const std::vector<int>& v1, const std::vector<int>& v2,
                const Ordering& sigma1, std::int64_t C1, std::int64_t C2, std::int64_t C3,
                const RefineOptions& opts = {}, RefineDiagnostics* diag = nullptr);

// Hook producing the stage-1 ordering from the stage-1 induced subgraph.
using InitialOrderer = std::function<Ordering(const Graph& subgraph, std::uint64_t seed)>;

struct IterativeParams {
  double alpha = 0.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  bool paper_thresholds = false;   // use published C formulas (clamped)
  bool paper_sketch = false;       // published sketch params in the default hook
  int threads = 1;
};

struct IterativeDiagnostics {
  RefineSchedule schedule;
  std::vector<std::int64_t> stage_sizes;  // |V_i|
  // Phase-1 table of the first refine call, for the sharp-boundary check.
  std::optional<RefineDiagnostics> first_stage;
};

// Shared uniform marks nest the stage sets V_1 through V_k = V; the hook
// orders G[V_1]; each stage applies refine with its thresholds. Default
// hook is main_estimate with desk parameters.
Ordering iterative_estimate(const Graph& g, const IterativeParams& params,
                            InitialOrderer initial = {},
                            IterativeDiagnostics* diag = nullptr);

}  // namespace seriation
