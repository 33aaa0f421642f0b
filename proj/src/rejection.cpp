#include "chroma/rejection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chroma/parallel.hpp"
#include "chroma/rng.hpp"
#include "chroma/solver.hpp"
#include "chroma/zerofree.hpp"

namespace chroma {

TargetSpec TargetSpec::exact(std::vector<int> counts) {
  TargetSpec t;
  t.mode = Mode::Exact;
  t.counts = std::move(counts);
  return t;
}

TargetSpec TargetSpec::equitable() { return TargetSpec{}; }

std::vector<std::vector<int>> equitable_targets(int n, int q) {
  if (n < 0 || q < 1) throw std::invalid_argument("equitable targets need n >= 0, q >= 1");
  const int lo = n / q;
  const int r = n % q;
  std::vector<std::vector<int>> out;
  std::vector<int> pick(r);
  // All ways to place the r larger classes.
  auto rec = [&](auto&& self, int next, int depth) -> void {
    if (depth == r) {
      std::vector<int> counts(q, lo);
      for (int idx : pick) counts[idx] += 1;
      out.push_back(std::move(counts));
      return;
    }
    for (int i = next; i < q; ++i) {
      pick[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> target_set(const TargetSpec& target, int n, int q) {
  if (target.mode == TargetSpec::Mode::Equitable) return equitable_targets(n, q);
  if (static_cast<int>(target.counts.size()) != q)
    throw std::invalid_argument("exact target must list all q class sizes");
  int sum = 0;
  for (int c : target.counts) {
    if (c < 0) throw std::invalid_argument("class sizes must be nonnegative");
    sum += c;
  }
  if (sum != n) throw std::invalid_argument("class sizes must sum to the vertex count");
  return {target.counts};
}

std::uint64_t default_t_per_iter(int n) {
  const double steps = 20.0 * n * std::log(std::max(n, 2));
  return static_cast<std::uint64_t>(std::ceil(steps));
}

std::uint64_t default_max_iters(int n, int q, double eps) {
  const double iters = 10.0 * std::pow(n, (q - 1) / 2.0) * std::log(1.0 / eps);
  return static_cast<std::uint64_t>(std::ceil(std::max(iters, 1.0)));
}

RejectionOutcome rejection_sample(const Graph& g, int q, std::span<const double> lambda,
                                  const TargetSpec& target, std::uint64_t seed,
                                  const RejectionOptions& opt) {
  for (double l : lambda)
    if (!(l > 0.0)) throw std::invalid_argument("rejection sampling needs positive fugacities");
  const auto accepted = target_set(target, g.n, q);
  const std::uint64_t t_steps = opt.t_per_iter ? opt.t_per_iter : default_t_per_iter(g.n);
  const std::uint64_t budget = opt.max_iters ? opt.max_iters : default_max_iters(g.n, q, opt.eps);

  RejectionOutcome out;
  out.t_per_iter = t_steps;
  const int threads = resolve_threads(opt.threads);
  const std::uint64_t batch = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(threads) * 4);

  std::uint64_t next = 0;
  while (next < budget) {
    const std::uint64_t count = std::min<std::uint64_t>(batch, budget - next);
    std::vector<Coloring> colorings(count);
    parallel_for_index(static_cast<std::size_t>(count), opt.threads, [&](std::size_t k) {
      colorings[k] = glauber_run(g, q, lambda, t_steps, split_stream(seed, next + k));
    });
    for (std::uint64_t k = 0; k < count; ++k) {
      const auto counts = class_counts(colorings[k], q);
      const bool hit = std::binary_search(accepted.begin(), accepted.end(), counts);
      out.hits.push_back(hit ? 1 : 0);
      out.iterations += 1;
      if (hit) {
        out.success = true;
        out.coloring = std::move(colorings[k]);
        out.counts = counts;
        return out;
      }
    }
    next += count;
  }
  return out;
}

namespace {

std::vector<std::vector<int>> spiral_grid(int dim, int k_max) {
  std::vector<std::vector<int>> ks;
  std::vector<int> cur(dim, 0);
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == dim) {
      ks.push_back(cur);
      return;
    }
    for (int k = -k_max; k <= k_max; ++k) {
      cur[pos] = k;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
  std::stable_sort(ks.begin(), ks.end(), [](const auto& a, const auto& b) {
    int na = 0, nb = 0;
    for (int x : a) na += std::abs(x);
    for (int x : b) nb += std::abs(x);
    if (na != nb) return na < nb;
    return a < b;
  });
  return ks;
}

}  // namespace

SkewedOutcome skewed_sample(const Graph& g, int q, const std::vector<int>& target_counts,
                            SkewedMode mode, std::uint64_t seed, const SkewedOptions& opt) {
  const auto spec = TargetSpec::exact(target_counts);
  target_set(spec, g.n, q);  // validates the counts
  const double proven = zero_free_radius(std::max(1, g.max_degree));

  SkewedOutcome out;
  if (mode == SkewedMode::Grid) {
    out.mode = "grid";
    const int k_max = static_cast<int>(std::floor(opt.ball_radius * std::sqrt(g.n)));
    const auto ks = spiral_grid(q - 1, k_max);
    const std::uint64_t total_budget = opt.rejection.max_iters
                                           ? opt.rejection.max_iters
                                           : default_max_iters(g.n, q, opt.rejection.eps);
    const std::uint64_t per_candidate =
        opt.per_candidate_iters
            ? opt.per_candidate_iters
            : std::max<std::uint64_t>(32, total_budget / std::max<std::size_t>(1, ks.size()));
    for (std::size_t c = 0; c < ks.size(); ++c) {
      std::vector<double> lambda(q, 1.0);
      for (int i = 0; i < q - 1; ++i) lambda[i] = 1.0 + ks[c][i] / std::sqrt(g.n);
      bool positive = true;
      for (double l : lambda) positive = positive && l > 0.0;
      if (!positive) continue;
      RejectionOptions ropt = opt.rejection;
      ropt.max_iters = per_candidate;
      const RejectionOutcome attempt =
          rejection_sample(g, q, lambda, spec, split_stream(seed, c), ropt);
      out.candidates_tried = c + 1;
      if (attempt.success) {
        out.outcome = attempt;
        out.lambda = lambda;
        break;
      }
      out.outcome = attempt;
      out.lambda = lambda;
    }
  } else {
    out.mode = "newton";
    Eigen::VectorXd target(q - 1);
    for (int i = 0; i < q - 1; ++i) target[i] = target_counts[i];
    const SolveResult solved = solve_lambda(g, q, target, opt.ball_radius, opt.newton_tol,
                                            opt.newton_max_iters);
    out.solve_residual = solved.residual;
    std::vector<double> lambda = solved.lambda;
    out.lambda = lambda;
    out.outcome = rejection_sample(g, q, lambda, spec, seed, opt.rejection);
  }

  double dev = 0.0;
  for (std::size_t i = 0; i < out.lambda.size(); ++i)
    dev = std::max(dev, std::abs(out.lambda[i] - 1.0));
  out.inside_proven_radius = !out.lambda.empty() && dev <= proven;
  return out;
}

ScalingFit acceptance_scaling_experiment(Topology family, int q, const std::vector<int>& ns,
                                         std::span<const double> lambda, ScalingMode mode,
                                         std::uint64_t seed, std::size_t empirical_iters,
                                         int threads) {
  if (ns.size() < 3) throw std::invalid_argument("scaling fit needs at least 3 sizes");
  ScalingFit fit;
  fit.ns = ns;

  for (const int n : ns) {
    const ClassCensus census = class_census_dp(n, q, family);
    const ClassDistribution dist = distribution_of(census, lambda);
    const MomentSummary m = moments_of(dist);
    Eigen::VectorXd mu_full;
    Eigen::MatrixXd sigma_full;
    extend_moments(m, n, mu_full, sigma_full);

    // Single equitable vector nearest mu (ties lexicographically smallest).
    const auto equitable = equitable_targets(n, q);
    const std::vector<int>* best = nullptr;
    double best_dist = 0.0;
    for (const auto& e : equitable) {
      double d2 = 0.0;
      for (int i = 0; i < q; ++i) d2 += (e[i] - mu_full[i]) * (e[i] - mu_full[i]);
      if (best == nullptr || d2 < best_dist - 1e-12) {
        best = &e;
        best_dist = d2;
      }
    }
    const std::vector<int> key(best->begin(), best->end() - 1);
    fit.targets.push_back(key);

    double p = 0.0;
    if (mode == ScalingMode::Exact) {
      p = dist.prob_of(key);
    } else {
      const std::uint64_t t_steps = default_t_per_iter(n);
      std::vector<char> hits(empirical_iters, 0);
      const Graph g = family == Topology::Cycle ? cycle_graph(n) : path_graph(n);
      parallel_for_index(empirical_iters, threads, [&](std::size_t i) {
        const Coloring sigma =
            glauber_run(g, q, lambda, t_steps, split_stream(seed ^ n, i));
        hits[i] = truncate_counts(class_counts(sigma, q)) == key ? 1 : 0;
      });
      const double hit_count = std::accumulate(hits.begin(), hits.end(), 0.0);
      p = hit_count / static_cast<double>(empirical_iters);
    }
    if (!(p > 0.0)) throw std::runtime_error("target probability vanished in scaling experiment");
    fit.log_prob.push_back(std::log(p));
  }

  // Least squares for log p = slope * log n + intercept.
  const std::size_t m = ns.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(ns[i]));
    const double y = fit.log_prob[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(ns[i]));
    fit.residuals.push_back(fit.log_prob[i] - (fit.slope * x + fit.intercept));
  }
  return fit;
}

}  // namespace chroma
