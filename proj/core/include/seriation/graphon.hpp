#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "seriation/graph.hpp"

namespace seriation {

// Symmetric link-probability model on [0,1]^2. Step/Profile/Constant are
// distance profiles w(x,y) = f(|x-y|); Warped composes a base spec with a
// monotone relabeling of [0,1] (w(x,y) = base(F(x), F(y))).
struct GraphonSpec {
  enum class Kind { Constant, Step, Profile, Warped };
  Kind kind = Kind::Constant;

  double c = 0.0;                      // Constant
  double p = 0.0, q = 0.0, d = 0.0;    // Step: f = p on [0,d), q on [d,1]
  // Profile: piecewise-linear f over (z, f(z)) breakpoints, z: 0 -> 1,
  // nonincreasing; a repeated z encodes a jump.
  std::vector<std::pair<double, double>> profile;
  std::shared_ptr<const GraphonSpec> base;          // Warped
  std::vector<std::pair<double, double>> cdf;       // Warped: (x, F(x)) breakpoints

  static GraphonSpec constant(double c);
  static GraphonSpec step(double p, double q, double d);
  static GraphonSpec profile_table(std::vector<std::pair<double, double>> pts);
  static GraphonSpec warped(GraphonSpec base_spec,
                            std::vector<std::pair<double, double>> cdf_pts);

  void validate() const;  // throws std::invalid_argument
};

struct SampledGraph {
  Graph g;
  std::vector<double> latents;  // ground truth, for evaluation only; may be empty
  std::uint64_t seed = 0;
};

struct AssumptionReport {
  double alpha_lower = 0.0;   // infimum side of the alpha window
  double alpha_upper = 0.0;   // far-pair side of the alpha window
  bool alpha_feasible = false;  // alpha_lower > alpha_upper
  std::optional<double> sharp_delta;
  std::optional<double> sharp_B;
  std::optional<double> connect_eps;
  std::optional<double> goodness_A;
  std::optional<double> goodness_delta;
  std::optional<double> split_eps;
  std::optional<double> sep_eps;
};

// w(x,y); symmetric, deterministic. Throws std::domain_error outside [0,1].
double eval(const GraphonSpec& spec, double x, double y);

// Composite midpoint quadrature of (w*w)(x,y) = int_0^1 w(x,u) w(u,y) du,
// subdivided at every breakpoint of the integrand. quad_points >= 64.
double square_eval(const GraphonSpec& spec, double x, double y, int quad_points = 2048);

// Exact piecewise closed form of the squared step graphon.
double square_closed_form_step(double p, double q, double d, double x, double y);

// n iid uniform latents; edge (i,j) iff an independent uniform coin is
// below w(U_i, U_j). Identical seed gives identical output for any thread
// count.
SampledGraph sample_graph(const GraphonSpec& spec, int n, std::uint64_t seed, int threads = 1);

// Deterministic test oracle: edge (i,j) iff (w*w)(U_i, U_j) >= alpha.
SampledGraph oracle_threshold_graph(const GraphonSpec& spec,
                                    const std::vector<double>& latents, double alpha);

// Numeric feasibility window for alpha plus witness constants for the
// sharp-boundary / connectivity / goodness / split / separation diagnostics
// where the variant supports them.
AssumptionReport check_assumptions(const GraphonSpec& spec, double alpha,
                                   int quad_points = 2048);

}  // namespace seriation
