#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chroma/rng.hpp"
#include "chroma/solver.hpp"

using namespace chroma;
using doctest::Approx;

namespace {

std::vector<double> ones(int q) { return std::vector<double>(q, 1.0); }

}  // namespace

TEST_CASE("expectation map closed forms") {
  const Graph one = path_graph(1);
  const Eigen::VectorXd p = psi_exact(one, 2, std::vector<double>{2.0, 1.0});
  CHECK(p[0] == Approx(2.0 / 3.0));

  const Graph c6 = cycle_graph(6);
  const Eigen::VectorXd u = psi_exact(c6, 3, ones(3));
  CHECK(u[0] == Approx(2.0));
  CHECK(u[1] == Approx(2.0));
}

TEST_CASE("chain-estimated expectation map agrees with the exact one") {
  const Graph c6 = cycle_graph(6);
  const std::vector<double> lambda{1.2, 1.0, 1.0};
  const Eigen::VectorXd exact = psi_exact(c6, 3, lambda);
  // q = 3 < 2*Delta+1 = 5: outside the proven mixing regime.
  CHECK_THROWS_AS(psi_mcmc(c6, 3, lambda, 100, 100, 1), std::invalid_argument);

  const std::vector<double> lam5{1.2, 1.0, 1.0, 1.0, 1.0};
  const Eigen::VectorXd exact5 = psi_exact(c6, 5, lam5);
  const McmcPsi est = psi_mcmc(c6, 5, lam5, 20000, 400, 9);
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(est.value[i] - exact5[i]) <= 3.0 * est.std_error[i] + 1e-9);
}

TEST_CASE("jacobian equals covariance at uniform fugacities and matches finite differences") {
  const Graph c5 = cycle_graph(5);
  const auto m = exact_moments(c5, 4, ones(4));
  const Eigen::MatrixXd j = jacobian(c5, 4, ones(4));
  CHECK((j - m.sigma).lpNorm<Eigen::Infinity>() == Approx(0.0).epsilon(1e-12));

  // Central differences of Psi with respect to each fugacity coordinate.
  const std::vector<double> lambda{1.1, 0.9, 1.05, 1.0};
  const Eigen::MatrixXd jl = jacobian(c5, 4, lambda);
  const double h = 1e-5;
  for (int col = 0; col < 3; ++col) {
    std::vector<double> up = lambda, dn = lambda;
    up[col] += h;
    dn[col] -= h;
    const Eigen::VectorXd fd = (psi_exact(c5, 4, up) - psi_exact(c5, 4, dn)) / (2.0 * h);
    for (int row = 0; row < 3; ++row)
      CHECK(jl(row, col) == Approx(fd[row]).epsilon(1e-4));
  }

  // J is symmetric exactly when the first q-1 fugacities are all equal.
  CHECK((j - j.transpose()).lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK((jl - jl.transpose()).lpNorm<Eigen::Infinity>() > 1e-4);
}

TEST_CASE("trivial target solves in zero iterations") {
  const Graph c12 = cycle_graph(12);
  Eigen::VectorXd target(2);
  target << 4.0, 4.0;
  const SolveResult r = solve_lambda(c12, 3, target, 0.2, 1e-6, 50);
  CHECK(r.success);
  CHECK(r.iterations == 0);
  CHECK(r.lambda[0] == Approx(1.0));
  CHECK(r.lambda[1] == Approx(1.0));
  CHECK(r.residual <= 1e-6);
  CHECK(r.inside_proven_radius);  // lambda stays exactly at 1
}

TEST_CASE("solver round trip recovers fugacities inside the ball") {
  const Graph c12 = cycle_graph(12);
  const ExactInstance inst = ExactInstance::build(c12, 3);
  const double theta_cap = std::log1p(0.2);
  auto rng = make_rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    // theta* uniform in the solver's l2 ball; lambda* = exp(theta*) then
    // lies in the l-inf 0.2-ball around 1.
    Eigen::VectorXd theta(2);
    do {
      theta[0] = theta_cap * (2.0 * uniform01(rng) - 1.0);
      theta[1] = theta_cap * (2.0 * uniform01(rng) - 1.0);
    } while (theta.norm() > theta_cap);
    std::vector<double> lambda{std::exp(theta[0]), std::exp(theta[1]), 1.0};
    CHECK(std::abs(lambda[0] - 1.0) <= 0.2 + 1e-12);

    const Eigen::VectorXd target = inst.moments(lambda).mu;
    const SolveResult r = solve_lambda(c12, 3, target, 0.2, 1e-8, 80);
    CHECK(r.success);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(r.lambda[i] - lambda[i]) <= 1e-4);
  }
}

TEST_CASE("newton residual decreases monotonically across accepted steps") {
  const Graph c12 = cycle_graph(12);
  // Reachable but non-trivial target.
  const std::vector<double> lam{1.15, 0.9, 1.0};
  const Eigen::VectorXd target = psi_exact(c12, 3, lam);
  const SolveResult r = solve_lambda(c12, 3, target, 0.2, 1e-10, 80);
  CHECK(r.success);
  CHECK(r.iterations >= 1);
  CHECK(r.residual <= 1e-10);
}

TEST_CASE("infeasible target stalls at the ball boundary and reports failure") {
  const Graph c12 = cycle_graph(12);
  Eigen::VectorXd target(2);
  target << 12.0, 0.0;  // monochromatic: impossible on a graph with edges
  const SolveResult r = solve_lambda(c12, 3, target, 0.2, 1e-6, 50);
  CHECK(!r.success);
  CHECK(r.residual > 1.0);
  // Iterate pinned to the theta ball boundary.
  double norm = 0.0;
  for (int i = 0; i < 2; ++i) norm += std::pow(std::log(r.lambda[i]), 2);
  CHECK(std::sqrt(norm) == Approx(std::log1p(0.2)).epsilon(1e-6));

  Eigen::VectorXd too_big(2);
  too_big << 10.0, 10.0;
  CHECK_THROWS_AS(solve_lambda(c12, 3, too_big + Eigen::VectorXd::Constant(2, 10.0), 0.2, 1e-6, 50),
                  std::invalid_argument);
}

TEST_CASE("lipschitz probe brackets the expectation map slopes") {
  const Graph c12 = cycle_graph(12);
  const LipschitzProbe probe = lipschitz_probe(c12, 3, 100, 0.1, 5);
  CHECK(probe.pairs == 100);
  CHECK(probe.c_lower > 0.0);
  CHECK(probe.c_lower <= probe.c_upper * 1.05);

  // C_upper * n is bounded by the largest Jacobian singular value over the
  // ball (sampled sweep), within 10 percent.
  double max_sv = 0.0;
  auto rng = make_rng(6);
  for (int s = 0; s < 200; ++s) {
    std::vector<double> lambda(3, 1.0);
    for (int i = 0; i < 2; ++i) lambda[i] = 1.0 + 0.1 * (2.0 * uniform01(rng) - 1.0);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian(c12, 3, lambda));
    max_sv = std::max(max_sv, svd.singularValues().maxCoeff());
  }
  CHECK(probe.c_upper * 12.0 <= max_sv * 1.1);

  // c_lower * n below the smallest covariance eigenvalue over sampled points.
  double min_eig = 1e300;
  for (int s = 0; s < 50; ++s) {
    std::vector<double> lambda(3, 1.0);
    for (int i = 0; i < 2; ++i) lambda[i] = 1.0 + 0.1 * (2.0 * uniform01(rng) - 1.0);
    const auto m = exact_moments(c12, 3, lambda);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.sigma);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  CHECK(probe.c_lower * 12.0 <= min_eig * 1.1);
}
