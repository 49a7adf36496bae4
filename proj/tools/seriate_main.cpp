// seriate: sample graphs from latent-order models, reconstruct vertex
// orderings, pick thresholds, and score results against retained latents.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seriation/alpha_scan.hpp"
#include "seriation/edge_list_io.hpp"
#include "seriation/errors.hpp"
#include "seriation/eval_metrics.hpp"
#include "seriation/graphon.hpp"
#include "seriation/parallel.hpp"
#include "seriation/refine.hpp"
#include "seriation/sketch.hpp"

using json = nlohmann::json;
using namespace seriation;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitParseIo = 3;
constexpr int kExitBudget = 4;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SERIATE_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw std::invalid_argument("SERIATE_SEED is not an unsigned integer");
    return v;
  }
  return 0;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(10);
  ss << v;
  return ss.str();
}

void require_keys(const json& j, const std::vector<std::string>& allowed, const std::string& ctx) {
  if (!j.is_object()) throw std::invalid_argument(ctx + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const auto& a : allowed)
      if (key == a) { ok = true; break; }
    if (!ok) throw std::invalid_argument(ctx + ": unknown key \"" + key + "\"");
  }
}

std::vector<std::pair<double, double>> parse_pairs(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw std::invalid_argument(ctx + " must be an array of [x, y] pairs");
  std::vector<std::pair<double, double>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument(ctx + " entries must be [x, y] pairs");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

GraphonSpec parse_graphon(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("graphon spec needs a \"kind\" key");
  const std::string kind = j.at("kind").get<std::string>();
  GraphonSpec spec;
  if (kind == "constant") {
    require_keys(j, {"kind", "c"}, "constant graphon");
    spec = GraphonSpec::constant(j.at("c").get<double>());
  } else if (kind == "step") {
    require_keys(j, {"kind", "p", "q", "d"}, "step graphon");
    spec = GraphonSpec::step(j.at("p").get<double>(), j.at("q").get<double>(),
                             j.at("d").get<double>());
  } else if (kind == "profile") {
    require_keys(j, {"kind", "points"}, "profile graphon");
    spec = GraphonSpec::profile_table(parse_pairs(j.at("points"), "profile points"));
  } else if (kind == "warped") {
    require_keys(j, {"kind", "base", "cdf"}, "warped graphon");
    spec = GraphonSpec::warped(parse_graphon(j.at("base")),
                               parse_pairs(j.at("cdf"), "warp cdf"));
  } else {
    throw std::invalid_argument("unknown graphon kind \"" + kind + "\"");
  }
  spec.validate();
  return spec;
}

GraphonSpec load_graphon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_graphon(j);
}

std::string graphon_tag(const GraphonSpec& s) {
  std::ostringstream ss;
  ss.precision(6);
  switch (s.kind) {
    case GraphonSpec::Kind::Constant: ss << "constant(" << s.c << ")"; break;
    case GraphonSpec::Kind::Step: ss << "step(" << s.p << "," << s.q << "," << s.d << ")"; break;
    case GraphonSpec::Kind::Profile: ss << "profile[" << s.profile.size() << "]"; break;
    case GraphonSpec::Kind::Warped: ss << "warped(" << graphon_tag(*s.base) << ")"; break;
  }
  return ss.str();
}

struct ParamFlags {
  std::optional<int> m, zeta;
  std::optional<std::int64_t> t, max_attempts;
  bool paper = false;

  SketchParams build(int n, double alpha, std::uint64_t seed) const {
    SketchParams p = paper ? paper_default_params(n) : desk_default_params(n);
    if (m) p.m = *m;
    if (t) p.t = *t;
    if (zeta) p.zeta = *zeta;
    if (max_attempts) p.max_attempts = *max_attempts;
    p.alpha = alpha;
    p.seed = seed;
    return p;
  }
};

std::ostream& open_sink(std::ofstream& file, const std::string& out_path) {
  if (out_path.empty()) return std::cout;
  file.open(out_path);
  if (!file) throw ParseError("cannot open " + out_path + " for writing");
  return file;
}

// --- subcommand bodies ---

int run_sample(const std::string& spec_path, int n, std::optional<std::uint64_t> seed_flag,
               const std::string& out_prefix, int threads) {
  const GraphonSpec spec = load_graphon_file(spec_path);
  const std::uint64_t seed = resolve_seed(seed_flag);
  const SampledGraph sg = sample_graph(spec, n, seed, resolve_threads(threads));
  write_edge_list_file(out_prefix + ".edges", sg.g);
  write_latents_file(out_prefix + ".latents", sg.latents);
  std::cout << out_prefix << ".edges: " << sg.g.n << " vertices, " << sg.g.edge_count()
            << " edges\n" << out_prefix << ".latents: ground-truth sidecar\n";
  return kExitOk;
}

int run_seriate(const std::string& graph_path, double alpha, const ParamFlags& pf,
                std::optional<std::uint64_t> seed_flag, const std::string& out_path,
                int threads) {
  const Graph g = read_edge_list_file(graph_path);
  const SketchParams params = pf.build(g.n, alpha, resolve_seed(seed_flag));
  const Ordering o = main_estimate(g, alpha, params, resolve_threads(threads));
  if (out_path.empty()) write_ordering_file("/dev/stdout", o);
  else write_ordering_file(out_path, o);
  return kExitOk;
}

int run_refine(const std::string& graph_path, double alpha, double epsilon,
               const std::string& initial_path, const ParamFlags& pf,
               std::optional<std::uint64_t> seed_flag, const std::string& out_path,
               int threads) {
  const Graph g = read_edge_list_file(graph_path);
  IterativeParams ip;
  ip.alpha = alpha;
  ip.epsilon = epsilon;
  ip.seed = resolve_seed(seed_flag);
  ip.paper_thresholds = pf.paper;
  ip.paper_sketch = pf.paper;
  ip.threads = resolve_threads(threads);
  InitialOrderer hook;
  if (!initial_path.empty()) {
    Ordering fixed = read_ordering_file(initial_path);
    hook = [fixed](const Graph& sub, std::uint64_t) {
      if (static_cast<int>(fixed.rank.size()) != sub.n)
        throw std::invalid_argument("initial ordering has " +
                                    std::to_string(fixed.rank.size()) + " ranks but stage 1 has " +
                                    std::to_string(sub.n) + " vertices");
      return fixed;
    };
  }
  const Ordering o = iterative_estimate(g, ip, hook);
  if (out_path.empty()) write_ordering_file("/dev/stdout", o);
  else write_ordering_file(out_path, o);
  return kExitOk;
}

int run_eval(const std::string& ordering_path, const std::string& latents_path, double d,
             const std::string& out_path) {
  const Ordering o = read_ordering_file(ordering_path);
  const std::vector<double> latents = read_latents_file(latents_path);
  if (o.rank.size() != latents.size())
    throw std::invalid_argument("ordering has " + std::to_string(o.rank.size()) +
                                " entries but latents file has " + std::to_string(latents.size()));
  const ErrorReport er = ordering_error(o, latents);
  const PrecisionReport pr = precision_agreement(o, latents, d);
  std::ofstream file;
  std::ostream& out = open_sink(file, out_path);
  out << "n,error_D,misordered_pairs,orientation,d,agrees,worst_gap\n"
      << latents.size() << ',' << er.error_D << ',' << er.misordered_pairs << ','
      << (er.chosen_correct == OrientationChoice::Forward ? "forward" : "reverse") << ','
      << fmt(d) << ',' << (pr.agrees ? "true" : "false") << ',' << fmt(pr.worst_gap) << '\n';
  return kExitOk;
}

int run_alpha_scan(const std::string& graph_path, std::vector<double> grid, int m, int trials,
                   double eps, std::optional<std::uint64_t> seed_flag,
                   const std::string& out_path, int threads) {
  if (grid.empty()) throw std::invalid_argument("candidate grid is empty");
  const Graph g = read_edge_list_file(graph_path);
  ScanOptions opts;
  opts.eps = eps;
  opts.threads = resolve_threads(threads);
  if (m == 0) m = desk_default_params(g.n).m;
  const auto diags = scan_alpha(g, grid, trials, m, resolve_seed(seed_flag), opts);
  std::ofstream file;
  std::ostream& out = open_sink(file, out_path);
  out << "alpha,pig_rate,pig_pass,goodness_pass,g_delta1,g_A1,g_delta2,g_A2,g_delta3,g_A3,"
         "connectivity_pass,connect_eps,separation_pass,sep_ratio,split_pass,split_pairs,"
         "split_required\n";
  for (const auto& d : diags) {
    out << fmt(d.alpha) << ',' << fmt(d.pig_success_rate) << ',' << (d.pig_pass ? 1 : 0) << ','
        << (d.goodness_pass ? 1 : 0);
    for (std::size_t i = 0; i < 3; ++i) {
      if (i < d.goodness_points.size())
        out << ',' << fmt(d.goodness_points[i].delta_prime) << ','
            << fmt(d.goodness_points[i].measured_A);
      else
        out << ",,";
    }
    out << ',' << (d.connectivity_pass ? 1 : 0) << ',' << fmt(d.connect_eps_measured) << ','
        << (d.separation_pass ? 1 : 0) << ',' << fmt(d.sep_worst_ratio) << ','
        << (d.split_pass ? 1 : 0) << ',' << d.split_pairs << ',' << fmt(d.split_required)
        << '\n';
  }
  const auto chosen = pick_alpha(diags);
  out << "chosen," << (chosen ? fmt(*chosen) : std::string("NONE")) << '\n';
  return kExitOk;
}

struct ExperimentConfig {
  GraphonSpec graphon;
  std::vector<int> n_list;
  std::vector<std::uint64_t> seeds;
  std::optional<double> alpha;  // empty means scan
  std::vector<std::string> pipelines;
  double epsilon = 0.45;
  ParamFlags params;
  int trials = 50;
  std::vector<double> grid;
  std::string out;
};

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  require_keys(j, {"graphon", "n_list", "seeds", "alpha", "pipeline", "epsilon", "params", "out"},
               "experiment config");
  ExperimentConfig c;
  c.graphon = parse_graphon(j.at("graphon"));
  for (const auto& v : j.at("n_list")) c.n_list.push_back(v.get<int>());
  for (const auto& v : j.at("seeds")) c.seeds.push_back(v.get<std::uint64_t>());
  if (c.n_list.empty()) throw std::invalid_argument("n_list must be nonempty");
  if (c.seeds.empty()) throw std::invalid_argument("seeds must be nonempty");

  const json& a = j.at("alpha");
  if (a.is_number()) c.alpha = a.get<double>();
  else if (a.is_string() && a.get<std::string>() == "scan") c.alpha.reset();
  else throw std::invalid_argument("alpha must be a number or \"scan\"");

  const json& p = j.at("pipeline");
  if (p.is_string()) c.pipelines.push_back(p.get<std::string>());
  else if (p.is_array())
    for (const auto& v : p) c.pipelines.push_back(v.get<std::string>());
  if (c.pipelines.empty()) throw std::invalid_argument("pipeline must be nonempty");
  for (const auto& pl : c.pipelines)
    if (pl != "sketch-only" && pl != "full-iterative")
      throw std::invalid_argument("pipeline must be sketch-only or full-iterative");

  if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
  for (const auto& pl : c.pipelines)
    if (pl == "full-iterative" && !(c.epsilon > 0.0 && c.epsilon < 0.5))
      throw std::invalid_argument("epsilon must lie in (0, 0.5) for full-iterative");

  if (j.contains("params")) {
    const json& o = j.at("params");
    require_keys(o, {"m", "t", "zeta", "max_attempts", "paper_params", "trials", "grid"},
                 "params");
    if (o.contains("m")) c.params.m = o.at("m").get<int>();
    if (o.contains("t")) c.params.t = o.at("t").get<std::int64_t>();
    if (o.contains("zeta")) c.params.zeta = o.at("zeta").get<int>();
    if (o.contains("max_attempts")) c.params.max_attempts = o.at("max_attempts").get<std::int64_t>();
    if (o.contains("paper_params")) c.params.paper = o.at("paper_params").get<bool>();
    if (o.contains("trials")) c.trials = o.at("trials").get<int>();
    if (o.contains("grid"))
      for (const auto& v : o.at("grid")) c.grid.push_back(v.get<double>());
  }
  if (j.contains("out")) c.out = j.at("out").get<std::string>();
  if (c.grid.empty())
    for (int i = 1; i <= 10; ++i) c.grid.push_back(0.02 * i);
  return c;
}

int run_experiment(const std::string& config_path, const std::string& out_flag, int threads_flag) {
  ExperimentConfig cfg = load_experiment(config_path);
  if (!out_flag.empty()) cfg.out = out_flag;
  const int threads = resolve_threads(threads_flag);
  const std::string tag = graphon_tag(cfg.graphon);

  std::ofstream file;
  std::ostream& out = open_sink(file, cfg.out);
  out << "graphon,n,seed,pipeline,alpha,error_D,error_over_sqrt_n,error_over_n_eps,wall_ms,"
         "status\n";
  for (int n : cfg.n_list)
    for (std::uint64_t seed : cfg.seeds) {
      const SampledGraph sg = sample_graph(cfg.graphon, n, seed, threads);
      double alpha = 0.0;
      std::string alpha_status;
      if (cfg.alpha) {
        alpha = *cfg.alpha;
      } else {
        ScanOptions so;
        so.threads = threads;
        const auto diags = scan_alpha(sg.g, cfg.grid, cfg.trials,
                                      desk_default_params(n).m, seed, so);
        if (auto chosen = pick_alpha(diags)) alpha = *chosen;
        else alpha_status = "no-alpha";
      }
      for (const std::string& pipeline : cfg.pipelines) {
        out << csv_field(tag) << ',' << n << ',' << seed << ',' << pipeline << ',';
        if (!alpha_status.empty()) {
          out << ",,,,," << alpha_status << '\n';
          continue;
        }
        out << fmt(alpha) << ',';
        const auto t0 = std::chrono::steady_clock::now();
        std::string status = "ok";
        std::optional<ErrorReport> er;
        try {
          Ordering o;
          if (pipeline == "sketch-only") {
            o = main_estimate(sg.g, alpha, cfg.params.build(n, alpha, seed), threads);
          } else {
            IterativeParams ip;
            ip.alpha = alpha;
            ip.epsilon = cfg.epsilon;
            ip.seed = seed;
            ip.paper_thresholds = cfg.params.paper;
            ip.paper_sketch = cfg.params.paper;
            ip.threads = threads;
            o = iterative_estimate(sg.g, ip);
          }
          er = ordering_error(o, sg.latents);
        } catch (const BudgetExhausted&) {
          status = "budget-exhausted";
        } catch (const std::exception& e) {
          status = std::string("error: ") + e.what();
        }
        const auto t1 = std::chrono::steady_clock::now();
        const double ms =
            std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0;
        if (er)
          out << er->error_D << ',' << fmt(er->error_D / std::sqrt(n)) << ','
              << fmt(er->error_D / std::pow(n, cfg.epsilon)) << ',';
        else
          out << ",,,";
        out << fmt(ms) << ',' << csv_field(status) << '\n';
      }
    }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latent-order reconstruction toolkit"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out_path;

  // sample
  auto* sample = app.add_subcommand("sample", "draw a graph from a graphon spec");
  std::string spec_path;
  int sample_n = 0;
  sample->add_option("--spec", spec_path, "graphon spec JSON file")->required();
  sample->add_option("--n", sample_n, "number of vertices")->required();
  sample->add_option("--seed", seed, "rng seed (SERIATE_SEED as fallback)");
  sample->add_option("--threads", threads, "worker threads, 0 = auto");
  std::string out_prefix;
  sample->add_option("--out", out_prefix, "output prefix (.edges/.latents)")->required();

  // shared sketch knobs
  double alpha = 0.0;
  ParamFlags pf;
  auto add_sketch_flags = [&](CLI::App* cmd) {
    cmd->add_option("--m", pf.m, "subsample size override");
    cmd->add_option("--t", pf.t, "successful subsample count override");
    cmd->add_option("--zeta", pf.zeta, "window width override");
    cmd->add_option("--max-attempts", pf.max_attempts, "subsample attempt cap override");
    cmd->add_flag("--paper-params", pf.paper, "published parameter formulas (can be very slow)");
    cmd->add_option("--seed", seed, "rng seed (SERIATE_SEED as fallback)");
    cmd->add_option("--threads", threads, "worker threads, 0 = auto");
    cmd->add_option("--out", out_path, "output file (default stdout)");
  };

  auto* seriate = app.add_subcommand("seriate", "coarse ordering from one graph");
  std::string graph_path;
  seriate->add_option("--graph", graph_path, "edge list file")->required();
  seriate->add_option("--alpha", alpha, "square-threshold level")->required();
  add_sketch_flags(seriate);

  auto* refine_cmd = app.add_subcommand("refine", "iteratively refined ordering");
  double epsilon = 0.0;
  std::string initial_path;
  refine_cmd->add_option("--graph", graph_path, "edge list file")->required();
  refine_cmd->add_option("--alpha", alpha, "square-threshold level")->required();
  refine_cmd->add_option("--epsilon", epsilon, "target error exponent, in (0, 0.5)")->required();
  refine_cmd->add_option("--initial", initial_path, "stage-1 ordering file (expert hook)");
  add_sketch_flags(refine_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "score an ordering against latents");
  std::string ordering_path, latents_path;
  double eval_d = 0.0;
  eval_cmd->add_option("--ordering", ordering_path, "ordering file")->required();
  eval_cmd->add_option("--latents", latents_path, "latents sidecar file")->required();
  eval_cmd->add_option("--d", eval_d, "precision level to test (default 0 = exact)");
  eval_cmd->add_option("--out", out_path, "output file (default stdout)");

  auto* scan = app.add_subcommand("alpha-scan", "threshold diagnostics over a grid");
  std::vector<double> grid;
  int scan_m = 0, scan_trials = 50;
  double scan_eps = 0.05;
  scan->add_option("--graph", graph_path, "edge list file")->required();
  scan->add_option("--grid", grid, "candidate thresholds")->required()->delimiter(',');
  scan->add_option("--m", scan_m, "subsample size (default: desk formula)");
  scan->add_option("--trials", scan_trials, "subsamples per candidate");
  scan->add_option("--eps", scan_eps, "connectivity/split epsilon");
  scan->add_option("--seed", seed, "rng seed (SERIATE_SEED as fallback)");
  scan->add_option("--threads", threads, "worker threads, 0 = auto");
  scan->add_option("--out", out_path, "output file (default stdout)");

  auto* exp = app.add_subcommand("experiment", "run a sample/seriate/eval grid");
  std::string config_path;
  exp->add_option("--config", config_path, "experiment config JSON")->required();
  exp->add_option("--out", out_path, "output CSV (overrides config)");
  exp->add_option("--threads", threads, "worker threads, 0 = auto");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (sample->parsed()) return run_sample(spec_path, sample_n, seed, out_prefix, threads);
    if (seriate->parsed()) return run_seriate(graph_path, alpha, pf, seed, out_path, threads);
    if (refine_cmd->parsed())
      return run_refine(graph_path, alpha, epsilon, initial_path, pf, seed, out_path, threads);
    if (eval_cmd->parsed()) return run_eval(ordering_path, latents_path, eval_d, out_path);
    if (scan->parsed())
      return run_alpha_scan(graph_path, grid, scan_m, scan_trials, scan_eps, seed, out_path,
                            threads);
    if (exp->parsed()) return run_experiment(config_path, out_path, threads);
  } catch (const BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << '\n';
    return kExitBudget;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitParseIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid arguments: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
