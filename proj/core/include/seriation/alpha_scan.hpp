#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "seriation/comparison.hpp"
#include "seriation/graph.hpp"

namespace seriation {

struct ScanOptions {
  double eps = 0.05;        // connectivity / split epsilon
  double a_cap = 8.0;       // goodness level-set density bound
  double b_min = 0.1;       // separation slope bound over long gaps
  double pig_pass_rate = 0.8;
  int sep_sample = 32;      // vertices probed by the separation test
  int threads = 1;
};

struct GoodnessPoint {
  double delta_prime = 0.0;
  double measured_A = 0.0;  // max_v count / (delta' n)
};

struct AlphaDiagnostics {
  double alpha = 0.0;
  double pig_success_rate = 0.0;
  bool pig_pass = false;
  bool goodness_pass = false;
  std::vector<GoodnessPoint> goodness_points;
  bool connectivity_pass = false;
  double connect_eps_measured = 0.0;  // min thresholded degree / n
  bool separation_pass = false;
  double sep_worst_ratio = 0.0;
  bool split_pass = false;
  std::int64_t split_pairs = 0;       // pairs with disjoint square-graph neighborhoods
  double split_required = 0.0;        // eps^2 n^2 / 2
  bool sharp_boundary_flag = true;    // filled by the refine-based diagnostic when available
};

// Runs the necessary-condition tests for each candidate threshold against
// the observed graph: subsample recognizability, level-set goodness,
// threshold connectivity, separation slope, and the far-pair split count.
std::vector<AlphaDiagnostics> scan_alpha(const Graph& g, const std::vector<double>& candidates,
                                         int trials, int m, std::uint64_t seed,
                                         const ScanOptions& opts = {});

// Highest subsample success rate among candidates passing connectivity and
// split; ties toward smaller alpha; empty when none pass.
std::optional<double> pick_alpha(const std::vector<AlphaDiagnostics>& diags);

// For every oriented pair with f2(i,j) = -1, the number of k with
// f2(i,k) = f2(k,j) = +1 (order-contradiction witnesses).
std::vector<std::int64_t> sharp_disagreement_counts(const Comparison& f2, int threads = 1);

// True iff the largest witness count stays within slack * d2 * n.
bool diagnose_sharp_boundary(const std::vector<std::int64_t>& f2_disagreements, double d2,
                             std::int64_t n, double slack = 4.0);

}  // namespace seriation
