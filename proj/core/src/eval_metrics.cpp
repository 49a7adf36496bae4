#include "seriation/eval_metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace seriation {

Ordering induced_order(const std::vector<double>& latents) {
  const int n = static_cast<int>(latents.size());
  std::vector<int> verts(static_cast<std::size_t>(n));
  std::iota(verts.begin(), verts.end(), 0);
  std::stable_sort(verts.begin(), verts.end(), [&](int a, int b) {
    return latents[static_cast<std::size_t>(a)] < latents[static_cast<std::size_t>(b)];
  });
  Ordering o;
  o.rank.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) o.rank[static_cast<std::size_t>(verts[static_cast<std::size_t>(i)])] = i + 1;
  return o;
}

namespace {

// max true-rank gap among misordered pairs plus the pair count
std::pair<int, std::int64_t> scan_violations(const Ordering& sigma, const std::vector<int>& truth) {
  const int n = sigma.n();
  int worst = 0;
  std::int64_t count = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int ti = truth[static_cast<std::size_t>(i)], tj = truth[static_cast<std::size_t>(j)];
      const int si = sigma.rank[static_cast<std::size_t>(i)], sj = sigma.rank[static_cast<std::size_t>(j)];
      if ((ti < tj && si > sj) || (ti > tj && si < sj)) {
        ++count;
        worst = std::max(worst, std::abs(ti - tj));
      }
    }
  }
  return {worst, count};
}

}  // namespace

ErrorReport ordering_error(const Ordering& sigma, const std::vector<double>& latents) {
  if (sigma.n() != static_cast<int>(latents.size()))
    throw std::invalid_argument("ordering_error: size mismatch");
  const Ordering truth = induced_order(latents);
  const int n = truth.n();
  std::vector<int> fwd(truth.rank.begin(), truth.rank.end());
  std::vector<int> rev(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) rev[static_cast<std::size_t>(v)] = n + 1 - fwd[static_cast<std::size_t>(v)];

  const auto [ef, cf] = scan_violations(sigma, fwd);
  const auto [er, cr] = scan_violations(sigma, rev);
  ErrorReport rep;
  if (ef <= er) {
    rep.error_D = ef;
    rep.misordered_pairs = cf;
    rep.chosen_correct = OrientationChoice::Forward;
  } else {
    rep.error_D = er;
    rep.misordered_pairs = cr;
    rep.chosen_correct = OrientationChoice::Reverse;
  }
  return rep;
}

PrecisionReport precision_agreement(const Ordering& sigma,
                                    const std::vector<double>& latents, double d) {
  if (sigma.n() != static_cast<int>(latents.size()))
    throw std::invalid_argument("precision_agreement: size mismatch");
  if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("precision level must be in [0,1]");
  const int n = sigma.n();
  double worst_fwd = 0.0, worst_rev = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double gap = std::abs(latents[static_cast<std::size_t>(i)] - latents[static_cast<std::size_t>(j)]);
      if (gap == 0.0) continue;  // latent ties are quotiented out
      const bool lat_ij = latents[static_cast<std::size_t>(i)] < latents[static_cast<std::size_t>(j)];
      const bool sig_ij = sigma.rank[static_cast<std::size_t>(i)] < sigma.rank[static_cast<std::size_t>(j)];
      if (lat_ij != sig_ij) worst_fwd = std::max(worst_fwd, gap);
      else worst_rev = std::max(worst_rev, gap);
    }
  }
  PrecisionReport rep;
  rep.worst_gap = std::min(worst_fwd, worst_rev);
  rep.agrees = rep.worst_gap < d || (rep.worst_gap == 0.0 && d == 0.0);
  return rep;
}

double comparison_accuracy(const Comparison& f, const std::vector<double>& latents, double gap) {
  if (f.n != static_cast<int>(latents.size()))
    throw std::invalid_argument("comparison_accuracy: size mismatch");
  std::int64_t eligible = 0, match_fwd = 0, match_rev = 0;
  for (int i = 0; i < f.n; ++i) {
    for (int j = i + 1; j < f.n; ++j) {
      const double g = std::abs(latents[static_cast<std::size_t>(i)] - latents[static_cast<std::size_t>(j)]);
      if (!(g > gap)) continue;
      ++eligible;
      const int truth = latents[static_cast<std::size_t>(i)] < latents[static_cast<std::size_t>(j)] ? 1 : -1;
      const int got = f.get(i, j);
      if (got == truth) ++match_fwd;
      else if (got == -truth) ++match_rev;
      // zeros match neither sign
    }
  }
  if (eligible == 0) return 1.0;
  return static_cast<double>(std::max(match_fwd, match_rev)) / static_cast<double>(eligible);
}

}  // namespace seriation
