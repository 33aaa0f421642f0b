#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>

#include "chroma/rejection.hpp"
#include "chroma/rng.hpp"
#include "chroma/solver.hpp"

using namespace chroma;
using doctest::Approx;

namespace {

std::vector<double> ones(int q) { return std::vector<double>(q, 1.0); }

double chi_square_p_value(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

}  // namespace

TEST_CASE("equitable target sets") {
  CHECK(equitable_targets(6, 3) == std::vector<std::vector<int>>{{2, 2, 2}});
  const auto t7 = equitable_targets(7, 3);
  CHECK(t7 == std::vector<std::vector<int>>{{2, 2, 3}, {2, 3, 2}, {3, 2, 2}});
  CHECK(equitable_targets(4, 5).size() == 5);
  for (const auto& v : equitable_targets(4, 5)) {
    int sum = 0, zeros = 0;
    for (int c : v) {
      sum += c;
      zeros += c == 0;
    }
    CHECK(sum == 4);
    CHECK(zeros == 1);
  }
}

TEST_CASE("target validation") {
  CHECK_THROWS_AS(target_set(TargetSpec::exact({1, 2}), 6, 3), std::invalid_argument);
  CHECK_THROWS_AS(target_set(TargetSpec::exact({5, 2, 0}), 6, 3), std::invalid_argument);
  CHECK_THROWS_AS(target_set(TargetSpec::exact({7, -1, 0}), 6, 3), std::invalid_argument);
  CHECK(target_set(TargetSpec::exact({4, 2, 0}), 6, 3) ==
        std::vector<std::vector<int>>{{4, 2, 0}});
}

TEST_CASE("every proper K3 coloring is equitable: accepts immediately") {
  const Graph k3 = clique_graph(3);
  const auto out = rejection_sample(k3, 3, ones(3), TargetSpec::equitable(), 1);
  CHECK(out.success);
  CHECK(out.iterations == 1);
  CHECK(out.counts == std::vector<int>{1, 1, 1});
  CHECK(out.hits == std::vector<char>{1});
}

TEST_CASE("single-vertex target accepts with the closed-form rate") {
  const Graph one = path_graph(1);
  const TargetSpec spec = TargetSpec::exact({1, 0});
  std::uint64_t accepted = 0, iterations = 0;
  const int runs = 4000;
  RejectionOptions opt;
  opt.t_per_iter = 5;
  opt.max_iters = 200;
  for (int r = 0; r < runs; ++r) {
    const auto out = rejection_sample(one, 2, ones(2), spec, split_stream(3, r), opt);
    REQUIRE(out.success);
    accepted += 1;
    iterations += out.iterations;
  }
  // Geometric(1/2): mean iteration count 2.
  const double mean = static_cast<double>(iterations) / runs;
  CHECK(std::abs(mean - 2.0) <= 4.0 * std::sqrt(2.0 / runs));
}

TEST_CASE("per-iteration acceptance rate matches the exact target mass (mixing regime)") {
  // q = 5 = 2*Delta + 1 keeps the chain inside the proven-mixing regime.
  // (At q = 3 the cycle dynamics is reducible: a winding invariant confines
  // the chain to one component, and rates drift from the Gibbs mass.)
  const Graph c6 = cycle_graph(6);
  const int q = 5;
  const auto exact = exact_pmf(c6, q, ones(q));
  const auto targets = equitable_targets(6, q);
  double mass = 0.0;
  for (const auto& t : targets) mass += exact.prob_of(truncate_counts(t));
  RejectionOptions opt;
  opt.t_per_iter = 500;
  opt.max_iters = 1;  // one Bernoulli trial per call
  std::uint64_t hits = 0;
  const int trials = 4000;
  for (int r = 0; r < trials; ++r)
    hits += rejection_sample(c6, q, ones(q), TargetSpec::equitable(), split_stream(5, r), opt)
                .success;
  const double se = std::sqrt(mass * (1.0 - mass) * trials);
  CHECK(std::abs(static_cast<double>(hits) - mass * trials) <= 3.0 * se);
}

TEST_CASE("infeasible exact target fails after the budget") {
  const Graph c6 = cycle_graph(6);
  RejectionOptions opt;
  opt.t_per_iter = 50;
  opt.max_iters = 40;
  const auto out = rejection_sample(c6, 3, ones(3), TargetSpec::exact({6, 0, 0}), 2, opt);
  CHECK(!out.success);
  CHECK(out.iterations == 40);
  CHECK(out.hits.size() == 40);
}

TEST_CASE("accepted class vectors follow the conditional distribution (C7, q=3)") {
  // n=7 gives a 3-vector equitable set, so the class-vector GOF has real
  // degrees of freedom; by symmetry each vector carries 1/3 conditional mass.
  const Graph c7 = cycle_graph(7);
  const auto exact = exact_pmf(c7, 3, ones(3));
  const auto targets = equitable_targets(7, 3);
  std::map<std::vector<int>, double> conditional;
  double total = 0.0;
  for (const auto& t : targets) {
    const std::vector<int> key(t.begin(), t.end() - 1);
    conditional[key] = exact.prob_of(key);
    total += conditional[key];
  }
  for (auto& [k, p] : conditional) p /= total;

  RejectionOptions opt;
  opt.t_per_iter = 500;
  std::map<std::vector<int>, int> observed;
  const int accepts = 3000;
  for (int r = 0; r < accepts; ++r) {
    const auto out =
        rejection_sample(c7, 3, ones(3), TargetSpec::equitable(), split_stream(11, r), opt);
    REQUIRE(out.success);
    observed[truncate_counts(out.counts)] += 1;
  }
  double stat = 0.0;
  for (const auto& [key, p] : conditional) {
    const double expect = p * accepts;
    const double diff = observed[key] - expect;
    stat += diff * diff / expect;
  }
  CHECK(chi_square_p_value(stat, static_cast<int>(conditional.size()) - 1) > 1e-3);
}

TEST_CASE("rejection sampling is deterministic and thread-count independent") {
  const Graph c6 = cycle_graph(6);
  RejectionOptions a;
  a.threads = 1;
  RejectionOptions b;
  b.threads = 4;
  const auto ra = rejection_sample(c6, 3, ones(3), TargetSpec::equitable(), 7, a);
  const auto rb = rejection_sample(c6, 3, ones(3), TargetSpec::equitable(), 7, b);
  CHECK(ra.success);
  CHECK(ra.iterations == rb.iterations);
  CHECK(ra.coloring == rb.coloring);
}

TEST_CASE("grid skewed sampling at an equitable target succeeds on the first candidate") {
  const Graph c6 = cycle_graph(6);
  const auto out = skewed_sample(c6, 3, {2, 2, 2}, SkewedMode::Grid, 3);
  CHECK(out.outcome.success);
  CHECK(out.candidates_tried == 1);
  CHECK(out.lambda == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(out.mode == "grid");
}

TEST_CASE("newton skewed sampling hits an exact skewed target on C24") {
  const Graph c24 = cycle_graph(24);
  SkewedOptions opt;
  opt.ball_radius = 0.2;
  const auto out = skewed_sample(c24, 3, {10, 8, 6}, SkewedMode::Newton, 9, opt);
  CHECK(out.outcome.success);
  CHECK(out.outcome.counts == std::vector<int>{10, 8, 6});
  CHECK(proper(c24, out.outcome.coloring));
  CHECK(!out.inside_proven_radius);
  CHECK(out.mode == "newton");
  CHECK(out.lambda.size() == 3);
  CHECK(out.lambda[2] == Approx(1.0));
}

TEST_CASE("infeasible skewed target reports failure after exhaustion") {
  const Graph c6 = cycle_graph(6);
  SkewedOptions opt;
  opt.rejection.t_per_iter = 50;
  opt.rejection.max_iters = 30;
  opt.per_candidate_iters = 8;
  const auto grid = skewed_sample(c6, 3, {6, 0, 0}, SkewedMode::Grid, 4, opt);
  CHECK(!grid.outcome.success);
  const auto newton = skewed_sample(c6, 3, {6, 0, 0}, SkewedMode::Newton, 4, opt);
  CHECK(!newton.outcome.success);
}

TEST_CASE("acceptance-rate exponent fits") {
  const auto cyc = acceptance_scaling_experiment(Topology::Cycle, 3, {12, 18, 24, 30, 36, 42, 48},
                                                 ones(3), ScalingMode::Exact);
  CHECK(cyc.slope == Approx(-1.0).epsilon(0.2));
  CHECK(cyc.targets.front() == std::vector<int>{4, 4});

  // Paths with q=3: same pointwise rate -(q-1)/2 = -1.
  const auto pth = acceptance_scaling_experiment(Topology::Path, 3, {12, 24, 48, 96}, ones(3),
                                                 ScalingMode::Exact);
  CHECK(pth.slope == Approx(-1.0).epsilon(0.2));

  // Empirical mode agrees with the exact exponent at a coarse tolerance.
  const auto emp = acceptance_scaling_experiment(Topology::Cycle, 3, {12, 24, 48}, ones(3),
                                                 ScalingMode::Empirical, 17, 3000);
  CHECK(emp.slope == Approx(cyc.slope).epsilon(0.35));

  CHECK_THROWS_AS(
      acceptance_scaling_experiment(Topology::Cycle, 3, {12, 18}, ones(3), ScalingMode::Exact),
      std::invalid_argument);
}

TEST_CASE("grid candidates cover the reachable expectation ball within C sqrt(n)") {
  // Any target hit by some fugacity in the grid's span is within the measured
  // Lipschitz slack of its nearest candidate: spacing 1/sqrt(n) in each of
  // q-1 coordinates gives |dPsi| <= C_upper n |dlambda| <= C sqrt(q-1)/2
  // sqrt(n).
  const int n = 60, q = 3;
  const Graph c60 = cycle_graph(n);
  const ExactInstance inst = ExactInstance::build(c60, q);
  const double ball = 0.2;
  const int k_max = static_cast<int>(std::floor(ball * std::sqrt(n)));
  REQUIRE(k_max >= 1);
  const auto probe = lipschitz_probe(c60, q, 60, ball, 21);
  const double slack = probe.c_upper * std::sqrt(q - 1.0) / 2.0 * std::sqrt(n) * 1.05;

  auto rng = make_rng(33);
  for (int trial = 0; trial < 25; ++trial) {
    // Target generated by a fugacity inside the grid's span.
    std::vector<double> star(q, 1.0);
    for (int i = 0; i < q - 1; ++i)
      star[i] = 1.0 + (k_max / std::sqrt(n)) * (2.0 * uniform01(rng) - 1.0);
    const Eigen::VectorXd target = inst.moments(star).mu;

    double best = 1e300;
    std::vector<double> cand(q, 1.0);
    for (int k1 = -k_max; k1 <= k_max; ++k1) {
      for (int k2 = -k_max; k2 <= k_max; ++k2) {
        cand[0] = 1.0 + k1 / std::sqrt(n);
        cand[1] = 1.0 + k2 / std::sqrt(n);
        best = std::min(best, (inst.moments(cand).mu - target).norm());
      }
    }
    CHECK(best <= slack);
  }
}

TEST_CASE("single-point probability far from the mean decays faster than the equitable rate") {
  // At distance ~3 sqrt(n) in the soft direction the pointwise mass must be
  // well below the central one for every n in the sweep.
  for (const int n : {24, 48, 96}) {
    const auto dist = distribution_of(class_census_dp(n, 3, Topology::Cycle), ones(3));
    const int third = n / 3;
    const int shift = static_cast<int>(std::round(1.5 * std::sqrt(n)));
    const double central = dist.prob_of(std::vector<int>{third, third});
    const double far = dist.prob_of(std::vector<int>{third + shift, third - shift});
    CHECK(far < central / 5.0);
  }
}
