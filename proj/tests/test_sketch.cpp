#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "seriation/errors.hpp"
#include "seriation/eval_metrics.hpp"
#include "seriation/graph.hpp"
#include "seriation/graphon.hpp"
#include "seriation/interval.hpp"
#include "seriation/rng.hpp"
#include "seriation/sketch.hpp"

using namespace seriation;

namespace {

Graph complete(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph path(int n) {
  Graph g(n);
  for (int u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1);
  return g;
}

SketchSample make_sample(std::vector<int> vertices, std::vector<int> ranks) {
  SketchSample s;
  s.vertices = std::move(vertices);
  s.order.rank = std::move(ranks);
  return s;
}

std::vector<double> seeded_latents(int n, std::uint64_t seed) {
  RngStream r{seed, 0xA1};
  std::vector<double> u(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = r.u01(static_cast<std::uint64_t>(i));
  return u;
}

}  // namespace

TEST_CASE("published parameter formulas") {
  auto p20 = paper_default_params(20);
  CHECK(p20.m == 20);  // ln(20)^5 ~ 241 clamps to n
  CHECK(p20.asymptotic);
  CHECK(paper_default_params(3).m == 3);
  auto p55 = paper_default_params(55);
  CHECK(p55.m == 55);
  CHECK(p55.zeta == 27);  // 4 ln(55)^4 ~ 1032 clamps to (m-1)/2
  CHECK_NOTHROW(p55.validate(55));
}

TEST_CASE("desk parameter formulas") {
  auto d100 = desk_default_params(100);
  CHECK(d100.m == 13);
  CHECK(d100.t == 273);
  CHECK(d100.zeta == 2);
  CHECK(d100.max_attempts == 20 * d100.t);
  CHECK_FALSE(d100.asymptotic);
  CHECK_NOTHROW(d100.validate(100));

  auto d1000 = desk_default_params(1000);
  CHECK(d1000.m == 21);
  CHECK(d1000.zeta == 3);
  CHECK_NOTHROW(d1000.validate(1000));

  for (int n : {3, 10, 47, 500, 5000}) CHECK_NOTHROW(desk_default_params(n).validate(n));
}

TEST_CASE("parameter validation") {
  SketchParams p = desk_default_params(50);
  CHECK_NOTHROW(p.validate(50));
  SketchParams bad = p;
  bad.m = 2;
  CHECK_THROWS_AS(bad.validate(50), std::invalid_argument);
  bad = p;
  bad.m = 51;
  CHECK_THROWS_AS(bad.validate(50), std::invalid_argument);
  bad = p;
  bad.t = 0;
  CHECK_THROWS_AS(bad.validate(50), std::invalid_argument);
  bad = p;
  bad.zeta = bad.m / 2 + 1;
  CHECK_THROWS_AS(bad.validate(50), std::invalid_argument);
  bad = p;
  bad.max_attempts = bad.t - 1;
  CHECK_THROWS_AS(bad.validate(50), std::invalid_argument);
}

TEST_CASE("ordered subsample") {
  RngStream r{10, 0x33};
  auto ok = ordered_subsample(complete(20), 5, r.sub(0));
  REQUIRE(ok.has_value());
  CHECK(ok->vertices.size() == 5);
  CHECK(std::is_sorted(ok->vertices.begin(), ok->vertices.end()));
  CHECK(ok->order.valid());

  // two disjoint cliques: any sample covering both halves is disconnected
  Graph cliques(10);
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) {
      cliques.add_edge(u, v);
      cliques.add_edge(u + 5, v + 5);
    }
  CHECK_FALSE(ordered_subsample(cliques, 10, r.sub(1)).has_value());

  CHECK_THROWS_AS(ordered_subsample(complete(5), 6, r.sub(2)), std::invalid_argument);
}

TEST_CASE("ordered subsample on planted threshold oracle") {
  auto spec = GraphonSpec::step(0.8, 0.1, 0.2);
  auto latents = seeded_latents(60, 4);
  auto og = oracle_threshold_graph(spec, latents, 0.1);
  RngStream r{11, 0x33};
  int success = 0;
  for (int a = 0; a < 40; ++a) {
    auto s = ordered_subsample(og.g, 12, r.sub(static_cast<std::uint64_t>(a)));
    if (!s) continue;
    ++success;
    std::vector<double> sub_lat;
    for (int v : s->vertices) sub_lat.push_back(latents[static_cast<std::size_t>(v)]);
    // the suborder is the latent order up to reversal and twin blocks of the
    // induced subgraph, so its displacement is capped by the largest block
    auto [sub, ids] = induced_subgraph(og.g, s->vertices);
    int max_block = 1;
    for (int u = 0; u < sub.n; ++u) {
      int block = 1;
      for (int v = 0; v < sub.n; ++v) {
        if (u == v || !sub.has_edge(u, v)) continue;
        bool twin = true;
        for (int w = 0; twin && w < sub.n; ++w) {
          if (w == u || w == v) continue;
          if (sub.has_edge(u, w) != sub.has_edge(v, w)) twin = false;
        }
        if (twin) ++block;
      }
      max_block = std::max(max_block, block);
    }
    CHECK(ordering_error(s->order, sub_lat).error_D <= max_block - 1);
  }
  CHECK(success >= 30);
}

TEST_CASE("global order: window constraints") {
  // m = 5, zeta = 2: low window = {rank 1}, high window = {ranks 4, 5}
  auto A = make_sample({0, 1, 2, 3, 4}, {1, 2, 3, 4, 5});

  SUBCASE("shared low vertex aligns positively") {
    auto B = make_sample({0, 5, 6, 7, 8}, {1, 2, 3, 4, 5});
    auto al = global_order({A, B}, 2, 9);
    CHECK(al.consistent);
    CHECK(al.signs == std::vector<std::int8_t>{1, 1});
  }

  SUBCASE("low vertex of one in high window of other aligns negatively") {
    auto C = make_sample({3, 9, 10, 11, 12}, {1, 2, 3, 4, 5});  // 3 is high in A
    auto al = global_order({A, C}, 2, 13);
    CHECK(al.consistent);
    CHECK(al.signs == std::vector<std::int8_t>{1, -1});
  }

  SUBCASE("chained constraints propagate") {
    auto B = make_sample({0, 5, 6, 7, 8}, {1, 2, 3, 4, 5});
    auto D = make_sample({8, 13, 14, 15, 16}, {1, 2, 3, 4, 5});  // 8 is high in B
    auto al = global_order({A, B, D}, 2, 17);
    CHECK(al.consistent);
    CHECK(al.signs == std::vector<std::int8_t>{1, 1, -1});
  }
}

TEST_CASE("global order recovers a planted sign vector") {
  // near-full subsets of a 12-point line, each dropped to m = 10 and
  // reversed at random; window values stay separated so every fired
  // constraint is correct and recovery is exact up to global sign
  const int n = 12, m = 10, zeta = 3, nsamp = 30;
  RngStream r{21, 0x5F};
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    auto tr = r.sub(trial);
    std::vector<SketchSample> samples;
    std::vector<std::int8_t> truth;
    for (std::uint64_t j = 0; j < nsamp; ++j) {
      int d1 = static_cast<int>(tr.below(3 * j, n));
      int d2 = static_cast<int>(tr.below(3 * j + 1, n - 1));
      if (d2 >= d1) ++d2;
      bool flip = tr.u01(3 * j + 2) < 0.5;
      truth.push_back(flip ? -1 : 1);
      std::vector<int> verts, ranks;
      for (int v = 0; v < n; ++v)
        if (v != d1 && v != d2) verts.push_back(v);
      for (int i = 0; i < m; ++i) ranks.push_back(flip ? m - i : i + 1);
      samples.push_back(make_sample(std::move(verts), std::move(ranks)));
    }
    auto al = global_order(samples, zeta, n, 2);
    REQUIRE(al.consistent);
    // global sign is arbitrary; quotient by the first entry
    int flip = al.signs[0] == truth[0] ? 1 : -1;
    for (std::size_t j = 0; j < truth.size(); ++j)
      REQUIRE(static_cast<int>(al.signs[j]) * flip == static_cast<int>(truth[j]));
  }
}

TEST_CASE("global order rejects bad windows") {
  auto A = make_sample({0, 1, 2, 3, 4}, {1, 2, 3, 4, 5});
  CHECK_THROWS_AS(global_order({A}, 3, 5), std::invalid_argument);  // 2*zeta >= m
  CHECK_THROWS_AS(global_order({A}, 0, 5), std::invalid_argument);
}

TEST_CASE("sparse sketch: single full sample reproduces its interval order") {
  Graph p6 = path(6);
  SketchParams sp;
  sp.m = 6;
  sp.t = 1;
  sp.zeta = 2;
  sp.alpha = 0.1;
  sp.max_attempts = 10;
  sp.seed = 5;
  Comparison f = sparse_sketch(p6, sp);
  auto rec = recognize_unit_interval(p6);
  REQUIRE(rec.status == IntervalStatus::UnitInterval);
  CHECK(f == comparison_from_order(*rec.ordering));
}

TEST_CASE("sparse sketch on complete graph degenerates to the id order") {
  SketchParams sp;
  sp.m = 6;
  sp.t = 12;
  sp.zeta = 2;
  sp.alpha = 0.1;
  sp.max_attempts = 240;
  sp.seed = 9;
  SketchDiagnostics diag;
  Comparison f = sparse_sketch(complete(20), sp, 1, &diag);
  CHECK(diag.successes == sp.t);
  CHECK(diag.attempts == sp.t);  // complete graphs never fail recognition
  // every subsample is a single twin block ordered ascending by id, so each
  // co-sampled pair votes the id order and never-seen pairs stay undecided
  for (int u = 0; u < 20; ++u)
    for (int v = u + 1; v < 20; ++v) {
      const bool seen = diag.cooccurrence[f.idx(u, v)] > 0;
      CHECK(f.get(u, v) == (seen ? 1 : 0));
    }
}

TEST_CASE("sparse sketch determinism across thread counts") {
  auto spec = GraphonSpec::step(0.8, 0.1, 0.2);
  auto latents = seeded_latents(80, 6);
  auto og = oracle_threshold_graph(spec, latents, 0.1);
  SketchParams sp;
  sp.m = 12;
  sp.t = 60;
  sp.zeta = 2;
  sp.alpha = 0.1;
  sp.max_attempts = 1200;
  sp.seed = 31;
  SketchDiagnostics d1, d8;
  Comparison f1 = sparse_sketch(og.g, sp, 1, &d1);
  Comparison f8 = sparse_sketch(og.g, sp, 8, &d8);
  CHECK(f1 == f8);
  CHECK(d1.votes == d8.votes);
  CHECK(d1.cooccurrence == d8.cooccurrence);
  CHECK(d1.attempts == d8.attempts);
}

TEST_CASE("sparse sketch budget exhaustion") {
  // claw-riddled sparse graph: subsamples essentially never recognize
  RngStream r{3, 0x9};
  Graph g(40);
  for (int u = 0; u < 40; ++u)
    for (int v = u + 1; v < 40; ++v)
      if (r.u01(static_cast<std::uint64_t>(u) * 40 + v) < 0.5) g.add_edge(u, v);
  SketchParams sp;
  sp.m = 12;
  sp.t = 50;
  sp.zeta = 2;
  sp.alpha = 0.1;
  sp.max_attempts = 100;
  sp.seed = 1;
  CHECK_THROWS_AS(sparse_sketch(g, sp), BudgetExhausted);
  try {
    sparse_sketch(g, sp);
  } catch (const BudgetExhausted& e) {
    CHECK(e.required == 50);
    CHECK(e.successes < e.required);
    CHECK(e.attempts == 100);
  }
}

TEST_CASE("planted sketch comparison accuracy") {
  auto spec = GraphonSpec::step(0.8, 0.1, 0.2);
  int pass = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto latents = seeded_latents(60, 100 + seed);
    auto og = oracle_threshold_graph(spec, latents, 0.1);
    SketchParams sp;
    sp.m = 12;
    sp.t = 150;
    sp.zeta = 2;
    sp.alpha = 0.1;
    sp.max_attempts = 3000;
    sp.seed = seed;
    Comparison f = sparse_sketch(og.g, sp, 4);
    if (comparison_accuracy(f, latents, 0.15) >= 0.95) ++pass;
  }
  CHECK(pass >= 19);
}

TEST_CASE("local refinement branch rules") {
  // identical neighborhoods fall to the else branch: -1
  Graph g(4);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  Comparison f(4);
  Comparison out = local_refinement(g, f);
  CHECK(out.get(0, 1) == -1);

  // u = 0 has extra neighbor 3 with F(3, 1) = +1
  Graph h(4);
  h.add_edge(0, 2);
  h.add_edge(1, 2);
  h.add_edge(0, 3);
  Comparison f2(4);
  f2.set(3, 1, 1);
  Comparison out2 = local_refinement(h, f2);
  CHECK(out2.get(0, 1) == 1);

  // output never contains zeros
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) CHECK(out2.get(u, v) != 0);
}

TEST_CASE("local refinement fills gaps without losing accuracy") {
  auto spec = GraphonSpec::step(0.8, 0.1, 0.2);
  auto latents = seeded_latents(60, 8);
  auto og = oracle_threshold_graph(spec, latents, 0.1);
  SketchParams sp;
  sp.m = 12;
  sp.t = 150;
  sp.zeta = 2;
  sp.alpha = 0.1;
  sp.max_attempts = 3000;
  sp.seed = 77;
  Comparison f = sparse_sketch(og.g, sp, 4);
  Comparison f1 = local_refinement(og.g, f, 4);
  Comparison f2 = local_refinement(og.g, f1, 4);
  for (auto v : f1.vals) CHECK(v != 0);
  double a0 = comparison_accuracy(f, latents, 0.15);
  double a1 = comparison_accuracy(f1, latents, 0.15);
  double a2 = comparison_accuracy(f2, latents, 0.15);
  CHECK(a1 >= a0 - 0.02);
  CHECK(a2 >= a1 - 0.02);
  CHECK(a1 >= 0.95);
}

TEST_CASE("comparison round trips") {
  CHECK(comparison_to_order(comparison_from_order(Ordering::identity(5))) ==
        Ordering::identity(5));
  Ordering sigma{{4, 1, 5, 2, 3, 7, 6, 9, 8}};
  CHECK(comparison_to_order(comparison_from_order(sigma)) == sigma);

  Comparison zero(4);
  CHECK(comparison_to_order(zero) == Ordering::identity(4));

  Comparison cyc(3);
  cyc.set(0, 1, 1);
  cyc.set(1, 2, 1);
  cyc.set(2, 0, 1);
  CHECK(comparison_to_order(cyc) == Ordering::identity(3));
}

TEST_CASE("negating a comparison reverses the order up to error metric") {
  auto spec = GraphonSpec::step(0.8, 0.1, 0.2);
  auto latents = seeded_latents(60, 12);
  auto og = oracle_threshold_graph(spec, latents, 0.1);
  SketchParams sp;
  sp.m = 12;
  sp.t = 100;
  sp.zeta = 2;
  sp.alpha = 0.1;
  sp.max_attempts = 2000;
  sp.seed = 3;
  Comparison f = local_refinement(og.g, sparse_sketch(og.g, sp, 4), 4);
  int e1 = ordering_error(comparison_to_order(f), latents).error_D;
  int e2 = ordering_error(comparison_to_order(f.negated()), latents).error_D;
  CHECK(e1 == e2);
}

TEST_CASE("main estimate runs the full coarse pipeline") {
  // single runs swing with the seed, so gate the median of five
  std::vector<int> errs;
  for (std::uint64_t seed = 17; seed < 22; ++seed) {
    auto sg = sample_graph(GraphonSpec::step(0.8, 0.1, 0.2), 300, seed, 4);
    SketchParams sp = desk_default_params(300);
    sp.seed = seed;
    Ordering o = main_estimate(sg.g, 0.1, sp, 4);
    REQUIRE(o.valid());
    errs.push_back(ordering_error(o, sg.latents).error_D);
  }
  std::sort(errs.begin(), errs.end());
  CHECK(errs[2] <= 60);  // 0.2 n

  SketchParams kp;
  kp.m = 6;
  kp.t = 10;
  kp.zeta = 2;
  kp.alpha = 0.5;
  kp.max_attempts = 200;
  kp.seed = 2;
  CHECK_NOTHROW(main_estimate(complete(20), 0.5, kp));
}
