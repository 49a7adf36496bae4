#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "seriation/comparison.hpp"
#include "seriation/graph.hpp"
#include "seriation/ordering.hpp"
#include "seriation/rng.hpp"

namespace seriation {

struct SketchParams {
  int m = 0;                       // subsample size
  std::int64_t t = 0;              // successful subsamples required
  int zeta = 0;                    // alignment window
  double alpha = 0.0;              // threshold used to build the square graph
  std::int64_t max_attempts = 0;   // attempt cap for the retry loop
  std::uint64_t seed = 0;
  bool asymptotic = false;         // true for the published formulas

  void validate(int n) const;  // throws std::invalid_argument
};

// Published parameter formulas (natural log); impractical at desk scale.
SketchParams paper_default_params(int n);
// Desk-scale defaults: m ~ 2 ln^2 n, t so each pair co-occurs ~ ln n times.
SketchParams desk_default_params(int n);

struct SketchSample {
  std::vector<int> vertices;  // ascending global ids, size m
  Ordering order;             // ranks over local indices of `vertices`
};

// One attempt: uniform m-subset of V(h); success iff the induced subgraph
// is a connected unit interval graph, in which case its interval order is
// returned.
std::optional<SketchSample> ordered_subsample(const Graph& h, int m, RngStream stream);

struct Alignment {
  std::vector<std::int8_t> signs;  // one per sample, +1 or -1
  bool consistent = true;
};

// Pairwise low/high window overlaps between samples give +-1 constraints
// H(j,k) = a(j) a(k); solved by BFS 2-coloring, roots +1, first assignment
// wins; `consistent` reports whether every constraint is satisfied.
Alignment global_order(const std::vector<SketchSample>& samples, int zeta, int n_vertices,
                       int threads = 1);

struct SketchDiagnostics {
  std::int64_t attempts = 0;
  std::int64_t successes = 0;
  bool alignment_consistent = true;
  std::vector<std::int32_t> votes;         // pairwise vote tally, u < v layout
  std::vector<std::int32_t> cooccurrence;  // times each pair was sampled together
};

// Collect t recognizable subsamples, align them, tally pairwise votes,
// return sign(votes). Throws BudgetExhausted if the attempt cap is hit.
// Bit-identical for any thread count.
Comparison sparse_sketch(const Graph& h, const SketchParams& params, int threads = 1,
                         SketchDiagnostics* diag = nullptr);

// One-sided neighborhood-difference vote per pair; output has no zeros.
Comparison local_refinement(const Graph& h, const Comparison& f, int threads = 1);

// threshold_square -> sparse_sketch -> local_refinement -> order.
Ordering main_estimate(const Graph& g, double alpha, const SketchParams& params,
                       int threads = 1, SketchDiagnostics* diag = nullptr);

}  // namespace seriation
