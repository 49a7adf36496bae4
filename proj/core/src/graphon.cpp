#include "seriation/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "seriation/parallel.hpp"
#include "seriation/rng.hpp"

namespace seriation {

namespace {

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error(std::string(what) + " outside [0,1]");
}

// piecewise-linear table lookup; duplicate abscissae encode jumps, and the
// value AT a jump point is the right-hand one (matches the step graphon's
// strict-left convention).
double table_eval(const std::vector<std::pair<double, double>>& pts, double z) {
  std::size_t lo = 0, hi = pts.size();
  while (lo + 1 < hi) {  // last index with pts[i].first <= z
    std::size_t mid = (lo + hi) / 2;
    if (pts[mid].first <= z) lo = mid; else hi = mid;
  }
  if (lo + 1 == pts.size() || pts[lo].first == z) return pts[lo].second;
  const auto [z0, f0] = pts[lo];
  const auto [z1, f1] = pts[lo + 1];
  return f0 + (f1 - f0) * (z - z0) / (z1 - z0);
}

// inverse of a strictly increasing piecewise-linear bijection
double table_inverse(const std::vector<std::pair<double, double>>& pts, double y) {
  std::size_t lo = 0, hi = pts.size();
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (pts[mid].second <= y) lo = mid; else hi = mid;
  }
  if (lo + 1 == pts.size()) return pts[lo].first;
  const auto [x0, y0] = pts[lo];
  const auto [x1, y1] = pts[lo + 1];
  if (y1 == y0) return x0;
  return x0 + (x1 - x0) * (y - y0) / (y1 - y0);
}

// distance-profile breakpoints of the variant (empty for constant)
std::vector<double> profile_breaks(const GraphonSpec& spec) {
  switch (spec.kind) {
    case GraphonSpec::Kind::Step: return {spec.d};
    case GraphonSpec::Kind::Profile: {
      std::vector<double> zs;
      for (auto& [z, f] : spec.profile) zs.push_back(z);
      return zs;
    }
    default: return {};
  }
}

}  // namespace

GraphonSpec GraphonSpec::constant(double c) {
  GraphonSpec s;
  s.kind = Kind::Constant;
  s.c = c;
  s.validate();
  return s;
}

GraphonSpec GraphonSpec::step(double p, double q, double d) {
  GraphonSpec s;
  s.kind = Kind::Step;
  s.p = p; s.q = q; s.d = d;
  s.validate();
  return s;
}

GraphonSpec GraphonSpec::profile_table(std::vector<std::pair<double, double>> pts) {
  GraphonSpec s;
  s.kind = Kind::Profile;
  s.profile = std::move(pts);
  s.validate();
  return s;
}

GraphonSpec GraphonSpec::warped(GraphonSpec base_spec,
                                std::vector<std::pair<double, double>> cdf_pts) {
  GraphonSpec s;
  s.kind = Kind::Warped;
  s.base = std::make_shared<GraphonSpec>(std::move(base_spec));
  s.cdf = std::move(cdf_pts);
  s.validate();
  return s;
}

void GraphonSpec::validate() const {
  switch (kind) {
    case Kind::Constant:
      if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("constant graphon needs c in [0,1]");
      break;
    case Kind::Step:
      if (!(0.0 <= q && q <= p && p <= 1.0))
        throw std::invalid_argument("step graphon needs 0 <= q <= p <= 1");
      if (!(0.0 < d && d < 1.0)) throw std::invalid_argument("step graphon needs 0 < d < 1");
      break;
    case Kind::Profile: {
      if (profile.size() < 2) throw std::invalid_argument("profile needs at least 2 points");
      if (profile.front().first != 0.0 || profile.back().first != 1.0)
        throw std::invalid_argument("profile must span z = 0 to z = 1");
      for (std::size_t i = 0; i < profile.size(); ++i) {
        auto [z, f] = profile[i];
        if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("profile value outside [0,1]");
        if (i > 0) {
          if (z < profile[i - 1].first) throw std::invalid_argument("profile abscissae must be nondecreasing");
          if (f > profile[i - 1].second) throw std::invalid_argument("profile must be nonincreasing in distance");
        }
      }
      break;
    }
    case Kind::Warped: {
      if (!base) throw std::invalid_argument("warped graphon needs a base");
      if (base->kind == Kind::Warped)
        throw std::invalid_argument("warped base must be a distance-profile variant");
      base->validate();
      if (cdf.size() < 2 || cdf.front() != std::pair<double, double>{0.0, 0.0} ||
          cdf.back() != std::pair<double, double>{1.0, 1.0})
        throw std::invalid_argument("cdf must map 0 to 0 and 1 to 1");
      for (std::size_t i = 1; i < cdf.size(); ++i)
        if (!(cdf[i].first > cdf[i - 1].first && cdf[i].second > cdf[i - 1].second))
          throw std::invalid_argument("cdf must be strictly increasing");
      break;
    }
  }
}

double eval(const GraphonSpec& spec, double x, double y) {
  check_unit(x, "x");
  check_unit(y, "y");
  switch (spec.kind) {
    case GraphonSpec::Kind::Constant: return spec.c;
    case GraphonSpec::Kind::Step: return std::abs(x - y) < spec.d ? spec.p : spec.q;
    case GraphonSpec::Kind::Profile: return table_eval(spec.profile, std::abs(x - y));
    case GraphonSpec::Kind::Warped:
      return eval(*spec.base, table_eval(spec.cdf, x), table_eval(spec.cdf, y));
  }
  return 0.0;
}

double square_eval(const GraphonSpec& spec, double x, double y, int quad_points) {
  check_unit(x, "x");
  check_unit(y, "y");
  if (quad_points < 64) throw std::invalid_argument("quad_points must be >= 64");

  // breakpoints of u -> w(x,u) w(u,y)
  std::vector<double> cuts{0.0, 1.0};
  auto push = [&cuts](double u) {
    if (u > 0.0 && u < 1.0) cuts.push_back(u);
  };
  if (spec.kind == GraphonSpec::Kind::Warped) {
    const auto zs = profile_breaks(*spec.base);
    const double fx = table_eval(spec.cdf, x), fy = table_eval(spec.cdf, y);
    for (double z : zs) {
      for (double t : {fx - z, fx + z, fy - z, fy + z})
        if (t >= 0.0 && t <= 1.0) push(table_inverse(spec.cdf, t));
    }
    for (auto& [u, f] : spec.cdf) push(u);
  } else {
    for (double z : profile_breaks(spec)) {
      push(x - z); push(x + z);
      push(y - z); push(y + z);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1], len = b - a;
    if (len <= 0.0) continue;
    const int pts = std::max(1, static_cast<int>(std::lround(quad_points * len)));
    const double h = len / pts;
    double acc = 0.0;
    for (int j = 0; j < pts; ++j) {
      const double u = a + (j + 0.5) * h;
      acc += eval(spec, x, u) * eval(spec, u, y);
    }
    total += acc * h;
  }
  return total;
}

double square_closed_form_step(double p, double q, double d, double x, double y) {
  if (!(0.0 <= q && q <= p && p <= 1.0) || !(0.0 < d && d < 1.0))
    throw std::invalid_argument("invalid step parameters");
  check_unit(x, "x");
  check_unit(y, "y");
  // I_x = (x-d, x+d) clipped to [0,1]; integrate p/q plateaus over the
  // partition induced by I_x and I_y
  const double lenx = std::min(x + d, 1.0) - std::max(x - d, 0.0);
  const double leny = std::min(y + d, 1.0) - std::max(y - d, 0.0);
  const double inter =
      std::max(0.0, std::min({x + d, y + d, 1.0}) - std::max({x - d, y - d, 0.0}));
  return p * p * inter + p * q * (lenx + leny - 2.0 * inter) +
         q * q * (1.0 - lenx - leny + inter);
}

SampledGraph sample_graph(const GraphonSpec& spec, int n, std::uint64_t seed, int threads) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("sample_graph needs n >= 1");
  SampledGraph out;
  out.seed = seed;
  out.g = Graph(n);
  out.latents.resize(static_cast<std::size_t>(n));
  const RngStream lat{seed, rng_tag::latents};
  for (int i = 0; i < n; ++i) out.latents[static_cast<std::size_t>(i)] = lat.u01(static_cast<std::uint64_t>(i));
  const RngStream coins{seed, rng_tag::edge_coins};
  auto& g = out.g;
  const auto& u = out.latents;
  parallel_chunks(0, n, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (int i = static_cast<int>(lo); i < hi; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double w = eval(spec, u[static_cast<std::size_t>(i)], u[static_cast<std::size_t>(j)]);
        if (coins.u01(pair_index(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j))) < w) {
          // rows i and j are touched only by the chunk owning i < j? no:
          // row j belongs to another chunk, so set bits without add_edge
          g.row(i)[j >> 6] |= 1ULL << (j & 63);
        }
      }
    }
  });
  // mirror the upper triangle; cheap and keeps the parallel part write-disjoint
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g.has_edge(i, j) || ((g.row(i)[j >> 6] >> (j & 63)) & 1ULL))
        g.row(j)[i >> 6] |= 1ULL << (i & 63);
  return out;
}

namespace {

double square_value(const GraphonSpec& spec, double x, double y, int quad_points) {
  switch (spec.kind) {
    case GraphonSpec::Kind::Constant: return spec.c * spec.c;
    case GraphonSpec::Kind::Step: return square_closed_form_step(spec.p, spec.q, spec.d, x, y);
    default: return square_eval(spec, x, y, quad_points);
  }
}

}  // namespace

SampledGraph oracle_threshold_graph(const GraphonSpec& spec,
                                    const std::vector<double>& latents, double alpha) {
  spec.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  for (double u : latents) check_unit(u, "latent");
  const int n = static_cast<int>(latents.size());
  SampledGraph out;
  out.g = Graph(n);
  out.latents = latents;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (square_value(spec, latents[static_cast<std::size_t>(i)], latents[static_cast<std::size_t>(j)], 2048) >= alpha)
        out.g.add_edge(i, j);
  return out;
}

namespace {

// smallest z0 such that the profile is constant on [z0, 1]
double profile_flat_start(const std::vector<std::pair<double, double>>& pts) {
  const double tail = pts.back().second;
  double z0 = pts.back().first;
  for (std::size_t i = pts.size(); i-- > 0;) {
    if (pts[i].second != tail) break;
    z0 = pts[i].first;
  }
  return z0;
}

struct SquareGrid {
  // w^2 sampled on xs x zs, xs coarse (anchors), zs fine (integration axis)
  std::vector<double> xs, zs;
  std::vector<double> vals;  // xs.size() * zs.size()
  double at(std::size_t i, std::size_t j) const { return vals[i * zs.size() + j]; }
};

SquareGrid make_square_grid(const GraphonSpec& spec, int quad_points, std::size_t nx, std::size_t nz) {
  SquareGrid grid;
  grid.xs.resize(nx);
  grid.zs.resize(nz);
  for (std::size_t i = 0; i < nx; ++i) grid.xs[i] = static_cast<double>(i) / (nx - 1);
  for (std::size_t j = 0; j < nz; ++j) grid.zs[j] = static_cast<double>(j) / (nz - 1);
  grid.vals.resize(nx * nz);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nz; ++j)
      grid.vals[i * nz + j] = square_value(spec, grid.xs[i], grid.zs[j], quad_points);
  return grid;
}

}  // namespace

AssumptionReport check_assumptions(const GraphonSpec& spec, double alpha, int quad_points) {
  spec.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  AssumptionReport rep;

  if (spec.kind == GraphonSpec::Kind::Warped) {
    // no distance profile exists; evaluate both window sides by quadrature
    // along the warped images of the uniform loci
    const GraphonSpec& b = *spec.base;
    double db = 0.0;
    if (b.kind == GraphonSpec::Kind::Step) db = b.d;
    else if (b.kind == GraphonSpec::Kind::Profile) db = profile_flat_start(b.profile);
    const double dprime = std::min(0.5, 2.0 * db);
    double lhs = square_eval(spec, 0.0, 0.0, quad_points);
    const double ymax = table_inverse(spec.cdf, db);
    const int grid = 257;
    for (int i = 0; i <= grid; ++i) {
      const double y = ymax * i / grid;
      lhs = std::min(lhs, square_eval(spec, 0.0, y, quad_points));
    }
    const double xlo = table_inverse(spec.cdf, (1.0 - dprime) / 2.0);
    const double xhi = table_inverse(spec.cdf, (1.0 + dprime) / 2.0);
    rep.alpha_lower = lhs;
    rep.alpha_upper = square_eval(spec, xlo, xhi, quad_points);
    rep.alpha_feasible = rep.alpha_lower > rep.alpha_upper;
    return rep;
  }

  double d = 0.0;
  if (spec.kind == GraphonSpec::Kind::Step) d = spec.d;
  else if (spec.kind == GraphonSpec::Kind::Profile) d = profile_flat_start(spec.profile);

  auto sq = [&](double x, double y) { return square_value(spec, x, y, quad_points); };

  // window sides: infimum of the corner slice over the band vs the split pair
  double lhs = sq(0.0, 0.0);
  if (d > 0.0) {
    const int grid = 512;
    for (int i = 0; i <= grid; ++i) lhs = std::min(lhs, sq(0.0, d * i / grid));
  }
  const double dprime = std::min(0.5, 2.0 * d);
  rep.alpha_lower = lhs;
  rep.alpha_upper = sq((1.0 - dprime) / 2.0, (1.0 + dprime) / 2.0);
  rep.alpha_feasible = rep.alpha_lower > rep.alpha_upper;

  // sharp-boundary witnesses exist only when the graphon actually vanishes
  if (spec.kind == GraphonSpec::Kind::Step && spec.q == 0.0 && spec.p > 0.0) {
    rep.sharp_delta = spec.p / 2.0;
    const int grid = 200;
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
      for (int j = i + 1; j <= grid; ++j) {
        const double x = static_cast<double>(i) / grid, y = static_cast<double>(j) / grid;
        const double lenx = std::min(x + spec.d, 1.0) - std::max(x - spec.d, 0.0);
        const double leny = std::min(y + spec.d, 1.0) - std::max(y - spec.d, 0.0);
        const double inter = std::max(
            0.0, std::min(x + spec.d, 1.0) - std::max(y - spec.d, 0.0));  // x < y here
        const double symdiff = lenx + leny - 2.0 * std::max(0.0, inter);
        worst = std::min(worst, symdiff / (y - x));
      }
    }
    rep.sharp_B = worst;
  }

  // grid witnesses for the square-level diagnostics
  const SquareGrid grid = make_square_grid(spec, std::min(quad_points, 512), 65, 513);
  const std::size_t nx = grid.xs.size(), nz = grid.zs.size();

  // connectivity: largest eps with min over |u-v| <= eps of w2 > alpha
  {
    const int ns = 128;
    std::vector<double> mins(static_cast<std::size_t>(ns) + 1,
                             std::numeric_limits<double>::infinity());
    for (int si = 0; si <= ns; ++si) {
      const double s = static_cast<double>(si) / ns;
      for (std::size_t i = 0; i < nx; ++i) {
        const double u = grid.xs[i];
        if (u + s > 1.0) break;
        mins[static_cast<std::size_t>(si)] =
            std::min(mins[static_cast<std::size_t>(si)], sq(u, u + s));
      }
    }
    double eps = 0.0, running = std::numeric_limits<double>::infinity();
    for (int si = 0; si <= ns; ++si) {
      running = std::min(running, mins[static_cast<std::size_t>(si)]);
      if (running > alpha) eps = static_cast<double>(si) / ns;
      else break;
    }
    rep.connect_eps = eps;
  }

  // goodness: level-set density near alpha
  {
    const double delta = 0.05;
    double worstA = 0.0;
    for (double dp : {delta / 4.0, delta / 2.0, delta}) {
      for (std::size_t i = 0; i < nx; ++i) {
        std::size_t hits = 0;
        for (std::size_t j = 0; j < nz; ++j)
          if (std::abs(alpha - grid.at(i, j)) <= dp) ++hits;
        const double vol = static_cast<double>(hits) / static_cast<double>(nz);
        worstA = std::max(worstA, vol / dp);
      }
    }
    rep.goodness_A = worstA;
    rep.goodness_delta = delta;
  }

  // split: largest eps such that all pairs further than 1 - eps apart sit
  // strictly below alpha
  {
    const int ns = 128;
    std::vector<double> maxs(static_cast<std::size_t>(ns) + 1, 0.0);
    for (int si = 0; si <= ns; ++si) {
      const double s = static_cast<double>(si) / ns;
      for (std::size_t i = 0; i < nx; ++i) {
        const double u = grid.xs[i];
        if (u + s > 1.0) break;
        maxs[static_cast<std::size_t>(si)] = std::max(maxs[static_cast<std::size_t>(si)], sq(u, u + s));
      }
    }
    double suffix = 0.0, eps = 0.0;
    for (int si = ns; si >= 0; --si) {
      suffix = std::max(suffix, maxs[static_cast<std::size_t>(si)]);
      if (suffix <= alpha) eps = 1.0 - static_cast<double>(si) / ns;
      // keep scanning: eps grows while the suffix stays below alpha
      else break;
    }
    rep.split_eps = eps;
  }

  // separation of the thresholded square: min over pairs of the disagreeing
  // volume per unit distance
  {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = i + 1; j < nx; ++j) {
        std::size_t diff = 0;
        for (std::size_t z = 0; z < nz; ++z) {
          const bool a = grid.at(i, z) > alpha;
          const bool b = grid.at(j, z) > alpha;
          if (a != b) ++diff;
        }
        const double vol = static_cast<double>(diff) / static_cast<double>(nz);
        worst = std::min(worst, vol / (grid.xs[j] - grid.xs[i]));
      }
    }
    rep.sep_eps = worst;
  }

  return rep;
}

}  // namespace seriation
