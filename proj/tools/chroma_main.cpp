// chroma: sampling equitable and skewed proper colorings, with exact
// verification experiments at desk scale.
//
// Exit codes: 0 success, 1 usage/config error, 2 algorithmic failure
// (rejection budget exhausted, assertion violated, solver miss).

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chroma/exact.hpp"
#include "chroma/glauber.hpp"
#include "chroma/lclt.hpp"
#include "chroma/parallel.hpp"
#include "chroma/rejection.hpp"
#include "chroma/reports.hpp"
#include "chroma/rng.hpp"
#include "chroma/solver.hpp"
#include "chroma/version.hpp"
#include "chroma/zerofree.hpp"

using namespace chroma;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

// Graph source: a file path, "petersen", or a generator spec
// cycle:N | path:N | clique:K | cliqueunion:S1+S2+...:R | random:N,D,SEED.
Graph resolve_graph(const std::string& spec) {
  if (std::filesystem::exists(spec)) return load_graph_file(spec);
  if (spec == "petersen") return petersen_graph();
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("graph source not found: " + spec);
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  if (kind == "cycle") return cycle_graph(std::stoi(args));
  if (kind == "path") return path_graph(std::stoi(args));
  if (kind == "clique") return clique_graph(std::stoi(args));
  if (kind == "random") {
    const auto v = parse_int_list(args);
    if (v.size() != 3) throw std::invalid_argument("random spec needs n,maxdeg,seed");
    return random_regularish_graph(v[0], v[1], static_cast<std::uint64_t>(v[2]));
  }
  if (kind == "cliqueunion") {
    const auto second = args.find(':');
    if (second == std::string::npos)
      throw std::invalid_argument("cliqueunion spec needs sizes:isolated");
    std::vector<int> sizes;
    std::stringstream ss(args.substr(0, second));
    std::string item;
    while (std::getline(ss, item, '+'))
      if (!item.empty()) sizes.push_back(std::stoi(item));
    return clique_union_graph(sizes, std::stoi(args.substr(second + 1)));
  }
  throw std::invalid_argument("unknown graph kind: " + kind);
}

std::vector<double> resolve_lambda(const std::string& text, int q) {
  if (text.empty()) return std::vector<double>(q, 1.0);
  auto lambda = parse_double_list(text);
  if (static_cast<int>(lambda.size()) != q)
    throw std::invalid_argument("lambda must list exactly q values");
  return lambda;
}

void emit(const Json& payload, const std::string& out_path) {
  const std::string text = payload.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write output file: " + out_path);
    out << text;
  }
}

Json base_payload(const char* command, std::uint64_t seed, const Json& config) {
  return Json{{"tool", "chroma"},
              {"version", kVersion},
              {"command", command},
              {"seed", seed},
              {"config", config}};
}

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void log_line(const std::string& what, const Stopwatch& watch) {
  std::fprintf(stderr, "[chroma] %s (%.2fs)\n", what.c_str(), watch.seconds());
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

int cmd_sample(const std::string& graph_spec, int q, const std::string& target_text,
               const std::string& lambda_text, const std::string& mode_text, std::uint64_t seed,
               std::uint64_t t_per_iter, std::uint64_t max_iters, double ball,
               const std::string& out_path, int threads) {
  Stopwatch watch;
  const Graph g = resolve_graph(graph_spec);
  Json config{{"graph", graph_spec},
              {"q", q},
              {"target", target_text},
              {"mode", mode_text},
              {"ball", ball}};

  RejectionOptions ropt;
  ropt.t_per_iter = t_per_iter;
  ropt.max_iters = max_iters;
  ropt.threads = threads;

  Json payload = base_payload("sample", seed, config);
  payload["q_below_proven_mixing"] = q < 2 * g.max_degree + 1;

  RejectionOutcome outcome;
  std::vector<double> used_lambda;
  bool inside_proven = false;
  if (target_text == "equitable") {
    used_lambda = resolve_lambda(lambda_text, q);
    outcome = rejection_sample(g, q, used_lambda, TargetSpec::equitable(), seed, ropt);
    double dev = 0.0;
    for (double l : used_lambda) dev = std::max(dev, std::abs(l - 1.0));
    inside_proven = dev <= zero_free_radius(std::max(1, g.max_degree));
  } else {
    const auto counts = parse_int_list(target_text);
    SkewedOptions sopt;
    sopt.ball_radius = ball;
    sopt.rejection = ropt;
    const SkewedMode mode = mode_text == "grid" ? SkewedMode::Grid : SkewedMode::Newton;
    const SkewedOutcome skewed = skewed_sample(g, q, counts, mode, seed, sopt);
    outcome = skewed.outcome;
    used_lambda = skewed.lambda;
    inside_proven = skewed.inside_proven_radius;
    payload["solve_residual"] = skewed.solve_residual;
    payload["candidates_tried"] = skewed.candidates_tried;
  }

  payload["lambda"] = used_lambda;
  payload["inside_proven_radius"] = inside_proven;
  payload["success"] = outcome.success;
  payload["coloring"] = outcome.coloring;
  payload["counts"] = outcome.counts;
  payload["iterations"] = outcome.iterations;
  payload["t_per_iter"] = outcome.t_per_iter;
  emit(payload, out_path);
  log_line("sample " + graph_spec + " target=" + target_text +
               (outcome.success ? " accepted" : " exhausted"),
           watch);
  return outcome.success ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

struct SuiteResult {
  bool pass = false;
  Json report;
};

SuiteResult suite_moments(const std::string& graph_spec, int q, const std::string& lambda_text,
                          const std::string& out_path) {
  // With an explicit graph: verify that instance and export the documented
  // pmf/moments JSON. Otherwise run the random-graph battery.
  SuiteResult result;
  double worst = 0.0;
  if (!graph_spec.empty()) {
    const Graph g = resolve_graph(graph_spec);
    const auto lambda = resolve_lambda(lambda_text, q);
    const MomentSummary ex = exact_moments(g, q, lambda);
    const MomentSummary fd = finite_diff_moments(g, q, lambda, 1e-4);
    for (int i = 0; i < q - 1; ++i)
      for (int j = 0; j < q - 1; ++j)
        worst = std::max(worst, std::abs(fd.sigma(i, j) - ex.sigma(i, j)) /
                                    std::max(std::abs(ex.sigma(i, j)), 1e-8));
    for (int i = 0; i < q - 1; ++i)
      worst = std::max(worst, std::abs(fd.mu[i] - ex.mu[i]) / std::max(std::abs(ex.mu[i]), 1e-8));
    Json report = pmf_report(g, q, lambda);
    report["finite_diff_max_rel_error"] = worst;
    if (!out_path.empty()) emit(report, out_path);
    result.report = std::move(report);
  } else {
    auto rng = make_rng(101);
    Json instances = Json::array();
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 5 + static_cast<int>(uniform_index(rng, 4));
      const Graph g = random_regularish_graph(n, 3, rng());
      for (const int qq : {4, 6}) {
        std::vector<double> lambda(qq);
        for (auto& l : lambda) l = 0.9 + 0.2 * uniform01(rng);
        const MomentSummary ex = exact_moments(g, qq, lambda);
        const MomentSummary fd = finite_diff_moments(g, qq, lambda, 1e-4);
        double inst_worst = 0.0;
        for (int i = 0; i < qq - 1; ++i) {
          inst_worst = std::max(inst_worst, std::abs(fd.mu[i] - ex.mu[i]) /
                                                std::max(std::abs(ex.mu[i]), 1e-8));
          for (int j = 0; j < qq - 1; ++j)
            inst_worst = std::max(inst_worst, std::abs(fd.sigma(i, j) - ex.sigma(i, j)) /
                                                  std::max(std::abs(ex.sigma(i, j)), 1e-8));
        }
        worst = std::max(worst, inst_worst);
        instances.push_back(Json{{"n", g.n}, {"q", qq}, {"max_rel_error", inst_worst}});
      }
    }
    result.report = Json{{"instances", std::move(instances)}, {"max_rel_error", worst}};
    if (!out_path.empty()) emit(result.report, out_path);
  }
  result.pass = worst <= 1e-5;
  result.report["tolerance"] = 1e-5;
  return result;
}

SuiteResult suite_recurrence() {
  double worst = 0.0;
  std::size_t checked = 0;
  auto rng = make_rng(202);
  const auto run_instance = [&](const Graph& g, int q) {
    std::vector<std::vector<Complex>> lambdas{std::vector<Complex>(q, Complex(1.0, 0.0))};
    for (int p = 0; p < 5; ++p) {
      std::vector<Complex> l(q);
      for (auto& x : l) x = Complex(1.0 + 0.1 * (2.0 * uniform01(rng) - 1.0), 0.0);
      lambdas.push_back(std::move(l));
    }
    const auto tau = empty_pinning(g, q);
    for (const auto& lambda : lambdas)
      for (int v = 0; v < g.n; ++v)
        for (int i = 1; i <= q; ++i)
          for (int j = 1; j <= q; ++j) {
            if (i == j) continue;
            const double residual = verify_recurrence(g, tau, v, i, j, lambda, g.adj[v]);
            const Complex lhs = marginal_ratio(g, tau, v, i, j, lambda);
            worst = std::max(worst, residual / (1.0 + std::abs(lhs)));
            ++checked;
          }
  };
  run_instance(clique_graph(4), 8);
  run_instance(cycle_graph(5), 4);
  SuiteResult result;
  result.pass = worst <= 1e-10;
  result.report = Json{{"combinations", checked}, {"worst_residual", worst}, {"tolerance", 1e-10}};
  return result;
}

SuiteResult suite_zerofree(const std::string& graph_spec, int q, std::size_t samples,
                           std::uint64_t seed, std::optional<double> radius, int threads) {
  const Graph g = resolve_graph(graph_spec.empty() ? "petersen" : graph_spec);
  const ScanReport rep =
      polydisc_scan(g, q, std::max(1, g.max_degree), samples, seed, radius, {}, threads);
  SuiteResult result;
  result.pass = rep.violations.empty();
  result.report = scan_report_json(rep);
  return result;
}

SuiteResult suite_lclt(int q, const std::vector<int>& ns, const std::string& lambda_text,
                       double window, const std::string& family, const std::string& out_path) {
  const Topology topo = family == "path" ? Topology::Path : Topology::Cycle;
  const auto lambda = resolve_lambda(lambda_text, q);
  std::vector<LcltComparison> cmps;
  for (const int n : ns) cmps.push_back(lclt_compare(topo, q, n, window, lambda));

  if (!out_path.empty()) {
    std::ofstream csv(out_path);
    if (!csv) throw std::runtime_error("cannot write output file: " + out_path);
    for (int i = 0; i < q - 1; ++i) csv << "n" << (i + 1) << ",";
    csv << "exact,gaussian,relerr\n";
    for (const auto& cmp : cmps)
      for (const auto& pt : cmp.points) {
        for (const int k : pt.key) csv << k << ",";
        csv << pt.exact << "," << pt.gaussian << "," << pt.rel_error << "\n";
      }
  }

  bool monotone = true;
  Json levels = Json::array();
  for (std::size_t i = 0; i < cmps.size(); ++i) {
    if (i > 0 && cmps[i].max_scaled_error >= cmps[i - 1].max_scaled_error) monotone = false;
    levels.push_back(lclt_comparison_json(cmps[i]));
  }
  SuiteResult result;
  result.pass = monotone && (cmps.empty() || cmps.back().max_scaled_error <= 0.15);
  result.report = Json{{"family", family},
                       {"levels", std::move(levels)},
                       {"monotone_scaled_error", monotone},
                       {"final_tolerance", 0.15}};
  return result;
}

SuiteResult suite_detscaling(const std::string& lambda3, const std::string& lambda4) {
  const std::vector<int> ns{16, 24, 32, 48, 64};
  const auto f3 = det_scaling_fit(Topology::Cycle, 3, ns, resolve_lambda(lambda3, 3));
  const auto f4 = det_scaling_fit(Topology::Cycle, 4, ns, resolve_lambda(lambda4, 4));
  double min_ratio = 1e300;
  for (double v : f3.min_eig_over_n) min_ratio = std::min(min_ratio, v);
  for (double v : f4.min_eig_over_n) min_ratio = std::min(min_ratio, v);
  SuiteResult result;
  result.pass = std::abs(f3.slope - 2.0) <= 0.2 && std::abs(f4.slope - 3.0) <= 0.25 &&
                min_ratio >= 0.01;
  result.report = Json{{"slope_q3", f3.slope},
                       {"slope_q4", f4.slope},
                       {"min_eig_over_n", min_ratio},
                       {"ns", ns}};
  return result;
}

SuiteResult suite_charbound(std::uint64_t seed) {
  const auto f54 =
      char_bound_fit(cycle_graph(5), 4, std::vector<double>(4, 1.0), random_t_grid(3, 1000, seed));
  const auto f63 = char_bound_fit(cycle_graph(6), 3, std::vector<double>(3, 1.0),
                                  random_t_grid(2, 1000, seed + 1));
  const Graph c6 = cycle_graph(6);
  const std::vector<double> ones5(5, 1.0);
  const std::vector<double> t{0.20, -0.12, 0.16, -0.20, 0.08};
  std::vector<double> t_half(5);
  for (int i = 0; i < 5; ++i) t_half[i] = t[i] / 2.0;
  const double r1 = taylor_check(c6, 5, ones5, t).remainder;
  const double r2 = taylor_check(c6, 5, ones5, t_half).remainder;
  SuiteResult result;
  result.pass = f54.c_star > 0.0 && f63.c_star > 0.0 && f54.violations.empty() &&
                f63.violations.empty() && r1 / r2 >= 6.0;
  result.report = Json{{"c_star_c5_q4", f54.c_star},
                       {"c_star_c6_q3", f63.c_star},
                       {"taylor_halving_factor", r1 / r2}};
  return result;
}

SuiteResult suite_contraction(const std::string& graph_spec, int q, std::size_t trials,
                              std::uint64_t seed, int threads) {
  const Graph g = resolve_graph(graph_spec.empty() ? "cycle:8" : graph_spec);
  const std::vector<double> lambda(q, 1.0);
  const ContractionEstimate est = contraction_experiment(g, q, lambda, trials, seed, threads);
  const double bound = -1.0 / (10.0 * g.n);
  SuiteResult result;
  result.pass = est.mean_delta <= bound + 3.0 * est.std_error;
  result.report = contraction_json(est);
  result.report["bound"] = bound;
  result.report["q_below_proven_mixing"] = q < 2 * g.max_degree + 1;
  return result;
}

SuiteResult suite_tv(const std::string& graph_spec, int q, std::uint64_t t_steps,
                     std::size_t samples, std::uint64_t seed, int threads) {
  const Graph g = resolve_graph(graph_spec.empty() ? "cycle:6" : graph_spec);
  const std::vector<double> lambda(q, 1.0);
  const TvEstimate est = tv_distance_experiment(g, q, lambda, t_steps, samples, seed, {}, threads);
  SuiteResult result;
  result.pass = est.tv <= 0.02;
  result.report = tv_json(est);
  result.report["tolerance"] = 0.02;
  return result;
}

SuiteResult suite_solver(std::uint64_t seed) {
  const Graph c12 = cycle_graph(12);
  const ExactInstance inst = ExactInstance::build(c12, 3);
  const double theta_cap = std::log1p(0.2);
  auto rng = make_rng(seed);
  double worst = 0.0;
  bool converged = true;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd theta(2);
    do {
      theta[0] = theta_cap * (2.0 * uniform01(rng) - 1.0);
      theta[1] = theta_cap * (2.0 * uniform01(rng) - 1.0);
    } while (theta.norm() > theta_cap);
    const std::vector<double> lambda{std::exp(theta[0]), std::exp(theta[1]), 1.0};
    const SolveResult r = solve_lambda(c12, 3, inst.moments(lambda).mu, 0.2, 1e-8, 80);
    converged = converged && r.success;
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(r.lambda[i] - lambda[i]));
  }
  SuiteResult result;
  result.pass = converged && worst <= 1e-4;
  result.report = Json{{"round_trips", 20}, {"worst_linf_recovery", worst}, {"tolerance", 1e-4}};
  return result;
}

// ---------------------------------------------------------------------------

int run_cli(int argc, char** argv) {
  CLI::App app{"chroma: equitable and skewed proper-coloring sampler with an exact "
               "verification engine"};
  app.set_version_flag("--version", std::string("chroma ") + kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // accept global flags like --threads after the subcommand

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (default: CHROMA_THREADS env or 1; results do not depend "
                 "on the worker count)");

  // sample
  auto* sample = app.add_subcommand("sample", "rejection-sample a coloring with class-size "
                                              "constraints");
  std::string graph_spec, target_text = "equitable", lambda_text, mode_text = "newton", out_path;
  int q = 0;
  std::uint64_t seed = 0, t_per_iter = 0, max_iters = 0;
  double ball = 0.2;
  sample->add_option("--graph", graph_spec,
                     "graph file or generator (petersen, cycle:N, path:N, clique:K, "
                     "cliqueunion:S+S:R, random:N,D,SEED)")
      ->required();
  sample->add_option("--q", q, "number of colors")->required();
  sample->add_option("--target", target_text, "\"equitable\" or exact counts like \"10,8,6\"");
  sample->add_option("--lambda", lambda_text, "fugacities for the equitable target (default 1s)");
  sample->add_option("--mode", mode_text, "grid|newton for exact targets")
      ->check(CLI::IsMember({"grid", "newton"}));
  sample->add_option("--seed", seed, "RNG seed (echoed in the output)");
  sample->add_option("--T", t_per_iter, "chain steps per rejection iteration (default 20 n ln n)");
  sample->add_option("--max-iters", max_iters, "rejection budget (default 10 n^{(q-1)/2} ln 100)");
  sample->add_option("--ball", ball, "fugacity search ball radius for exact targets");
  sample->add_option("--out", out_path, "output JSON path (default stdout)");

  // scan
  auto* scan = app.add_subcommand("scan", "polydisc zero-freeness scan (exit 2 on violations)");
  std::string scan_graph;
  int scan_q = 0;
  std::size_t scan_samples = 1000;
  std::uint64_t scan_seed = 0;
  double scan_radius = 0.0;
  std::string scan_out;
  scan->add_option("--graph", scan_graph, "graph file or generator")->required();
  scan->add_option("--q", scan_q, "number of colors")->required();
  scan->add_option("--samples", scan_samples, "polydisc samples");
  scan->add_option("--seed", scan_seed, "RNG seed");
  scan->add_option("--radius", scan_radius, "radius override (default: proven R(Delta))");
  scan->add_option("--out", scan_out, "output JSON path (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "invert the expectation map for target class sizes");
  std::string solve_graph, solve_target, solve_out;
  int solve_q = 0;
  double solve_ball = 0.2, solve_tol = 1e-6;
  int solve_iters = 60;
  solve->add_option("--graph", solve_graph, "graph file or generator")->required();
  solve->add_option("--q", solve_q, "number of colors")->required();
  solve->add_option("--target", solve_target, "q-1 expected class sizes, e.g. \"10,8\"")
      ->required();
  solve->add_option("--ball", solve_ball, "fugacity ball radius");
  solve->add_option("--tol", solve_tol, "residual tolerance");
  solve->add_option("--max-iters", solve_iters, "Newton iteration budget");
  solve->add_option("--out", solve_out, "output JSON path (default stdout)");

  // mix
  auto* mix = app.add_subcommand("mix", "one-step path-coupling contraction experiment");
  std::string mix_graph, mix_lambda, mix_out;
  int mix_q = 0;
  std::size_t mix_trials = 100000;
  std::uint64_t mix_seed = 0;
  mix->add_option("--graph", mix_graph, "graph file or generator")->required();
  mix->add_option("--q", mix_q, "number of colors")->required();
  mix->add_option("--lambda", mix_lambda, "fugacities (default 1s)");
  mix->add_option("--trials", mix_trials, "coupling trials");
  mix->add_option("--seed", mix_seed, "RNG seed");
  mix->add_option("--out", mix_out, "output JSON path (default stdout)");

  // lclt-verify
  auto* lclt = app.add_subcommand("lclt-verify",
                                  "exact vs Gaussian pointwise comparison; CSV columns "
                                  "n1..n{q-1},exact,gaussian,relerr");
  std::string lclt_family = "cycle", lclt_lambda, lclt_csv, lclt_json;
  int lclt_q = 3;
  std::string lclt_ns = "30,60,90";
  double lclt_window = 1.0;
  lclt->add_option("--family", lclt_family, "cycle|path")
      ->check(CLI::IsMember({"cycle", "path"}));
  lclt->add_option("--q", lclt_q, "number of colors");
  lclt->add_option("--ns", lclt_ns, "comma-separated instance sizes");
  lclt->add_option("--window", lclt_window, "window factor w (|n - mu| <= w sqrt(n))");
  lclt->add_option("--lambda", lclt_lambda, "fugacities (default 1s)");
  lclt->add_option("--out", lclt_csv, "CSV output path (default stdout JSON summary only)");
  lclt->add_option("--json", lclt_json, "JSON summary path (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "named verification suites (exit 0 iff the "
                                              "suite's assertions hold)");
  std::string suite, v_graph, v_lambda, v_family = "cycle", v_ns = "30,60,90", v_out;
  int v_q = 0;
  std::size_t v_samples = 0;  // 0: per-suite default (10^4 scan, 10^5 tv)
  std::size_t v_trials = 100000;
  std::uint64_t v_seed = 0, v_steps = 200;
  double v_window = 1.0, v_radius = 0.0;
  verify->add_option("--suite", suite,
                     "moments|recurrence|zerofree|lclt|detscaling|charbound|contraction|tv|solver")
      ->required();
  verify->add_option("--graph", v_graph, "graph override for graph-based suites");
  verify->add_option("--q", v_q, "color count override");
  verify->add_option("--lambda", v_lambda, "fugacities (default 1s)");
  verify->add_option("--family", v_family, "cycle|path for the lclt suite");
  verify->add_option("--ns", v_ns, "sizes for the lclt suite");
  verify->add_option("--window", v_window, "lclt window factor");
  verify->add_option("--samples", v_samples, "sample count (zerofree/tv)");
  verify->add_option("--trials", v_trials, "trial count (contraction)");
  verify->add_option("--steps", v_steps, "chain steps per sample (tv)");
  verify->add_option("--radius", v_radius, "scan radius override");
  verify->add_option("--seed", v_seed, "RNG seed");
  verify->add_option("--out", v_out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;  // help/version exit cleanly
  }

  Stopwatch watch;
  if (*sample)
    return cmd_sample(graph_spec, q, target_text, lambda_text, mode_text, seed, t_per_iter,
                      max_iters, ball, out_path, threads);

  if (*scan) {
    const Graph g = resolve_graph(scan_graph);
    const std::optional<double> radius =
        scan_radius > 0.0 ? std::optional<double>(scan_radius) : std::nullopt;
    const ScanReport rep = polydisc_scan(g, scan_q, std::max(1, g.max_degree), scan_samples,
                                         scan_seed, radius, {}, threads);
    Json payload = base_payload("scan", scan_seed,
                                Json{{"graph", scan_graph},
                                     {"q", scan_q},
                                     {"samples", scan_samples},
                                     {"radius_override", scan_radius}});
    payload["report"] = scan_report_json(rep);
    emit(payload, scan_out);
    log_line("scan " + scan_graph, watch);
    return rep.violations.empty() ? kExitOk : kExitFailure;
  }

  if (*solve) {
    const Graph g = resolve_graph(solve_graph);
    const auto target_list = parse_double_list(solve_target);
    if (static_cast<int>(target_list.size()) != solve_q - 1)
      throw std::invalid_argument("solve target needs q-1 values");
    Eigen::VectorXd target(solve_q - 1);
    for (int i = 0; i < solve_q - 1; ++i) target[i] = target_list[i];
    const SolveResult r = solve_lambda(g, solve_q, target, solve_ball, solve_tol, solve_iters);
    Json payload = base_payload("solve", 0,
                                Json{{"graph", solve_graph},
                                     {"q", solve_q},
                                     {"target", target_list},
                                     {"ball", solve_ball},
                                     {"tol", solve_tol}});
    payload["result"] = solve_result_json(r);
    emit(payload, solve_out);
    log_line("solve " + solve_graph, watch);
    return r.success ? kExitOk : kExitFailure;
  }

  if (*mix) {
    const Graph g = resolve_graph(mix_graph);
    const auto lambda = resolve_lambda(mix_lambda, mix_q);
    const ContractionEstimate est =
        contraction_experiment(g, mix_q, lambda, mix_trials, mix_seed, threads);
    const double bound = -1.0 / (10.0 * g.n);
    Json payload = base_payload("mix", mix_seed,
                                Json{{"graph", mix_graph},
                                     {"q", mix_q},
                                     {"lambda", lambda},
                                     {"trials", mix_trials}});
    payload["estimate"] = contraction_json(est);
    payload["bound"] = bound;
    payload["q_below_proven_mixing"] = mix_q < 2 * g.max_degree + 1;
    emit(payload, mix_out);
    log_line("mix " + mix_graph, watch);
    return est.mean_delta <= bound + 3.0 * est.std_error ? kExitOk : kExitFailure;
  }

  if (*lclt) {
    const Topology topo = lclt_family == "path" ? Topology::Path : Topology::Cycle;
    const auto lambda = resolve_lambda(lclt_lambda, lclt_q);
    const auto ns = parse_int_list(lclt_ns);
    Json levels = Json::array();
    std::ofstream csv;
    if (!lclt_csv.empty()) {
      csv.open(lclt_csv);
      if (!csv) throw std::runtime_error("cannot write output file: " + lclt_csv);
      for (int i = 0; i < lclt_q - 1; ++i) csv << "n" << (i + 1) << ",";
      csv << "exact,gaussian,relerr\n";
    }
    for (const int n : ns) {
      const LcltComparison cmp = lclt_compare(topo, lclt_q, n, lclt_window, lambda);
      if (csv.is_open())
        for (const auto& pt : cmp.points) {
          for (const int k : pt.key) csv << k << ",";
          csv << pt.exact << "," << pt.gaussian << "," << pt.rel_error << "\n";
        }
      levels.push_back(lclt_comparison_json(cmp));
    }
    Json payload = base_payload("lclt-verify", 0,
                                Json{{"family", lclt_family},
                                     {"q", lclt_q},
                                     {"ns", ns},
                                     {"window", lclt_window},
                                     {"lambda", lambda}});
    payload["levels"] = std::move(levels);
    emit(payload, lclt_json);
    log_line("lclt-verify", watch);
    return kExitOk;
  }

  if (*verify) {
    SuiteResult result;
    if (suite == "moments") {
      result = suite_moments(v_graph, v_q ? v_q : 3, v_lambda, v_out);
    } else if (suite == "recurrence") {
      result = suite_recurrence();
    } else if (suite == "zerofree") {
      result = suite_zerofree(v_graph, v_q ? v_q : 6, v_samples ? v_samples : 10000, v_seed,
                              v_radius > 0.0 ? std::optional<double>(v_radius) : std::nullopt,
                              threads);
    } else if (suite == "lclt") {
      result = suite_lclt(v_q ? v_q : 3, parse_int_list(v_ns), v_lambda, v_window, v_family,
                          v_out);
    } else if (suite == "detscaling") {
      result = suite_detscaling("", "");
    } else if (suite == "charbound") {
      result = suite_charbound(v_seed + 707);
    } else if (suite == "contraction") {
      result = suite_contraction(v_graph, v_q ? v_q : 5, v_trials, v_seed, threads);
    } else if (suite == "tv") {
      result = suite_tv(v_graph, v_q ? v_q : 5, v_steps, v_samples ? v_samples : 100000, v_seed,
                        threads);
    } else if (suite == "solver") {
      result = suite_solver(v_seed + 909);
    } else {
      std::cerr << "unknown suite: " << suite << "\n";
      return kExitUsage;
    }
    Json payload = base_payload("verify", v_seed, Json{{"suite", suite}});
    payload["pass"] = result.pass;
    payload["report"] = result.report;
    if (suite != "moments" && suite != "lclt")  // those already wrote their own files
      emit(payload, v_out);
    else if (v_out.empty())
      emit(payload, "");
    log_line("verify --suite " + suite + (result.pass ? " PASS" : " FAIL"), watch);
    return result.pass ? kExitOk : kExitFailure;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const CLI::ParseError&) {
    return kExitUsage;  // CLI11_PARSE already reported
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const EnumCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DpOverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
