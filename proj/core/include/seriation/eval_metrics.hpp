#pragma once

#include <cstdint>
#include <vector>

#include "seriation/comparison.hpp"
#include "seriation/ordering.hpp"

namespace seriation {

enum class OrientationChoice { Forward, Reverse };

struct ErrorReport {
  int error_D = 0;                 // largest rank gap among misordered pairs, best orientation
  std::int64_t misordered_pairs = 0;  // under the chosen orientation
  OrientationChoice chosen_correct = OrientationChoice::Forward;
};

struct PrecisionReport {
  bool agrees = false;
  double worst_gap = 0.0;  // largest latent gap among misordered pairs, best orientation
};

// Rank by latent value ascending, ties by vertex index.
Ordering induced_order(const std::vector<double>& latents);

// Minimal D such that every pair with true-rank gap above D is ordered
// correctly, minimized over the true order and its reversal.
ErrorReport ordering_error(const Ordering& sigma, const std::vector<double>& latents);

// agrees iff all pairs with |U_i - U_j| >= d are ordered consistently with
// the latents under at least one orientation.
PrecisionReport precision_agreement(const Ordering& sigma,
                                    const std::vector<double>& latents, double d);

// Fraction of pairs with |U_i - U_j| > gap whose comparison matches the
// latent one, under the better global sign; zeros count as mismatches.
double comparison_accuracy(const Comparison& f, const std::vector<double>& latents,
                           double gap);

}  // namespace seriation
