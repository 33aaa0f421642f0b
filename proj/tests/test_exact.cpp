#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>

#include "chroma/exact.hpp"
#include "chroma/rng.hpp"

using namespace chroma;
using doctest::Approx;

namespace {

// Independent oracle: walk all q^n total assignments without pruning.
Complex brute_force_partition(const Graph& g, const PartialColoring& tau,
                              const std::vector<Complex>& lambda) {
  const int q = tau.q;
  std::vector<int> sigma(g.n, 1);
  Complex z{0.0, 0.0};
  while (true) {
    bool agrees = true;
    for (int v = 0; v < g.n && agrees; ++v)
      if (tau.pinned(v) && sigma[v] != tau.color[v]) agrees = false;
    if (agrees && proper(g, sigma)) {
      Complex w{1.0, 0.0};
      for (int v = 0; v < g.n; ++v) w *= lambda[sigma[v] - 1];
      z += w;
    }
    int v = 0;
    while (v < g.n && sigma[v] == q) sigma[v++] = 1;
    if (v == g.n) break;
    sigma[v] += 1;
  }
  return z;
}

std::vector<Complex> ones_c(int q) { return std::vector<Complex>(q, Complex(1.0, 0.0)); }
std::vector<double> ones_r(int q) { return std::vector<double>(q, 1.0); }

}  // namespace

TEST_CASE("partition function on the spec instances") {
  const Graph one = path_graph(1);
  CHECK(partition_function(one, empty_pinning(one, 3), std::span<const Complex>(ones_c(3)))
            .real() == Approx(3.0));

  const Graph k3 = clique_graph(3);
  CHECK(partition_function(k3, empty_pinning(k3, 3), std::span<const Complex>(ones_c(3)))
            .real() == Approx(6.0));

  // C4, q=4: brute force and chromatic polynomial (q-1)^4 + (q-1) agree.
  const Graph c4 = cycle_graph(4);
  const Complex bf = brute_force_partition(c4, empty_pinning(c4, 4), ones_c(4));
  CHECK(bf.real() == Approx(84.0));
  CHECK(std::pow(3.0, 4) + 3.0 == Approx(84.0));
  CHECK(partition_function(c4, empty_pinning(c4, 4), std::span<const Complex>(ones_c(4)))
            .real() == Approx(84.0));
}

TEST_CASE("partition function against brute force at random complex fugacities") {
  auto rng = make_rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(uniform_index(rng, 4));
    const int q = 2 + static_cast<int>(uniform_index(rng, 3));
    const Graph g = random_regularish_graph(n, 2, rng());
    std::vector<Complex> lambda(q);
    for (auto& l : lambda)
      l = Complex(0.5 + uniform01(rng), (uniform01(rng) - 0.5) * 0.4);
    auto tau = empty_pinning(g, q);
    if (trial % 2 == 0) tau.color[0] = 1;  // exercise a pinned vertex
    const Complex expect = brute_force_partition(g, tau, lambda);
    const Complex got = partition_function(g, tau, lambda);
    CHECK(std::abs(expect - got) <= 1e-12 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("partition function conventions: empty graph and no extension") {
  const Graph empty = make_graph(0, {});
  CHECK(partition_function(empty, empty_pinning(empty, 3), std::span<const Complex>(ones_c(3)))
            .real() == Approx(1.0));
  // K3 with q=2 has no proper coloring.
  const Graph k3 = clique_graph(3);
  CHECK(partition_function(k3, empty_pinning(k3, 2), std::span<const Complex>(ones_c(2)))
            .real() == Approx(0.0));
}

TEST_CASE("enumeration cap produces the advisory error") {
  const Graph c30 = cycle_graph(30);
  EnumOptions opt;
  opt.cap = 1000;
  CHECK_THROWS_AS(
      partition_function(c30, empty_pinning(c30, 3), std::span<const Complex>(ones_c(3)), opt),
      EnumCapError);
}

TEST_CASE("restricted partition: identity and bad colors") {
  const Graph edge = path_graph(2);
  auto tau = empty_pinning(edge, 3);
  tau.color[0] = 1;
  // Restrict sigma(v)=1 is a bad color next to a pinned 1.
  CHECK(restricted_partition(edge, tau, 1, 1, std::span<const Complex>(ones_c(3))).real() ==
        Approx(0.0));
  // Two good colors remain for v.
  double total = 0.0;
  for (int c = 1; c <= 3; ++c)
    total += restricted_partition(edge, tau, 1, c, std::span<const Complex>(ones_c(3))).real();
  CHECK(total == Approx(2.0));

  // Sum over colors equals the partition function on random instances.
  auto rng = make_rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = random_regularish_graph(6, 3, rng());
    std::vector<Complex> lambda(4);
    for (auto& l : lambda) l = Complex(0.6 + uniform01(rng), 0.3 * (uniform01(rng) - 0.5));
    const auto tau4 = empty_pinning(g, 4);
    const auto parts = restricted_partition_all(g, tau4, 2, lambda);
    Complex sum{0.0, 0.0};
    for (const auto& p : parts) sum += p;
    const Complex z = partition_function(g, tau4, lambda);
    CHECK(std::abs(sum - z) <= 1e-12 * (1.0 + std::abs(z)));
  }

  const Graph k3 = clique_graph(3);
  auto tk = empty_pinning(k3, 3);
  tk.color[0] = 1;
  CHECK(restricted_partition(k3, tk, 1, 1, std::span<const Complex>(ones_c(3))).real() ==
        Approx(0.0));
}

TEST_CASE("marginal ratio") {
  const Graph one = path_graph(1);
  const std::vector<Complex> lambda{{2.0, 0.1}, {1.0, 0.0}, {0.7, -0.2}};
  const auto tau = empty_pinning(one, 3);
  const Complex r = marginal_ratio(one, tau, 0, 1, 3, lambda);
  CHECK(std::abs(r - lambda[0] / lambda[2]) <= 1e-14);

  // C5, q=4, uniform fugacities: color symmetry forces ratio 1.
  const Graph c5 = cycle_graph(5);
  const auto t5 = empty_pinning(c5, 4);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j)
      if (i != j)
        CHECK(std::abs(marginal_ratio(c5, t5, 2, i, j, std::span<const Complex>(ones_c(4))) -
                       Complex(1.0, 0.0)) <= 1e-13);

  // Positive rational at uniform fugacities.
  const Graph p4 = path_graph(4);
  const Complex r2 = marginal_ratio(p4, empty_pinning(p4, 3), 1, 1, 2,
                                    std::span<const Complex>(ones_c(3)));
  CHECK(r2.imag() == Approx(0.0));
  CHECK(r2.real() > 0.0);

  // Numerically vanishing denominator.
  const std::vector<Complex> degenerate{{1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(marginal_ratio(one, tau, 0, 1, 2, degenerate), IllDefinedTermError);
}

TEST_CASE("recurrence identity at uniform and perturbed fugacities") {
  const Graph k4 = clique_graph(4);
  const auto tau8 = empty_pinning(k4, 8);
  const std::vector<int> ordering = k4.adj[0];
  const Complex lhs = marginal_ratio(k4, tau8, 0, 1, 2, std::span<const Complex>(ones_c(8)));
  CHECK(verify_recurrence(k4, tau8, 0, 1, 2, std::span<const Complex>(ones_c(8)), ordering) <=
        1e-10 * (1.0 + std::abs(lhs)));

  const Graph c5 = cycle_graph(5);
  const auto tau4 = empty_pinning(c5, 4);
  const std::vector<Complex> skew{{1.1, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.9, 0.0}};
  for (int v = 0; v < 5; ++v) {
    const double res = verify_recurrence(c5, tau4, v, 1, 4, skew, c5.adj[v]);
    const Complex l = marginal_ratio(c5, tau4, v, 1, 4, skew);
    CHECK(res <= 1e-10 * (1.0 + std::abs(l)));
  }
}

TEST_CASE("recurrence with all neighbors pinned reduces to lambda_i/lambda_j") {
  // Star center with both leaves pinned.
  const Graph star = make_graph(3, {{0, 1}, {0, 2}});
  auto tau = empty_pinning(star, 5);
  tau.color[1] = 1;
  tau.color[2] = 2;
  const std::vector<Complex> lambda{{1.05, 0.0}, {1.0, 0.0}, {0.95, 0.0}, {1.0, 0.0}, {1.0, 0.0}};
  CHECK(verify_recurrence(star, tau, 0, 3, 4, lambda, star.adj[0]) <= 1e-12);
  const Complex r = marginal_ratio(star, tau, 0, 3, 4, lambda);
  CHECK(std::abs(r - lambda[2] / lambda[3]) <= 1e-13);
}

TEST_CASE("exact pmf on tiny instances") {
  const Graph one = path_graph(1);
  const auto pmf = exact_pmf(one, 2, std::span<const double>(ones_r(2)));
  CHECK(pmf.prob_of(std::vector<int>{1}) == Approx(0.5));
  CHECK(pmf.prob_of(std::vector<int>{0}) == Approx(0.5));

  const Graph k3 = clique_graph(3);
  const auto pk = exact_pmf(k3, 3, std::span<const double>(ones_r(3)));
  CHECK(pk.keys.size() == 1);
  CHECK(pk.prob_of(std::vector<int>{1, 1}) == Approx(1.0));

  double total = 0.0;
  const Graph c4 = cycle_graph(4);
  const auto pc = exact_pmf(c4, 3, std::span<const double>(ones_r(3)));
  for (double p : pc.prob) total += p;
  CHECK(total == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("path DP matches the frozen two-vertex example") {
  const auto pmf = cycle_count_dp(2, 2, std::span<const double>(ones_r(2)), Topology::Path);
  CHECK(pmf.prob_of(std::vector<int>{1}) == Approx(1.0));
  CHECK(pmf.prob_of(std::vector<int>{2}) == Approx(0.0));
  CHECK(pmf.prob_of(std::vector<int>{0}) == Approx(0.0));
}

TEST_CASE("enumeration and DP agree on every overlapping instance") {
  auto rng = make_rng(11);
  for (int n = 3; n <= 10; ++n) {
    for (int q = 2; q <= 4; ++q) {
      std::vector<double> lambda(q);
      for (auto& l : lambda) l = 0.8 + 0.4 * uniform01(rng);
      for (const Topology topo : {Topology::Cycle, Topology::Path}) {
        const Graph g = topo == Topology::Cycle ? cycle_graph(n) : path_graph(n);
        ClassDistribution a;
        try {
          a = exact_pmf(g, q, lambda);
        } catch (const std::domain_error&) {
          continue;  // no proper coloring (odd cycle, q=2)
        }
        const auto b = cycle_count_dp(n, q, lambda, topo);
        REQUIRE(a.keys.size() == b.keys.size());
        for (std::size_t e = 0; e < a.keys.size(); ++e) {
          CHECK(a.keys[e] == b.keys[e]);
          CHECK(std::abs(a.prob[e] - b.prob[e]) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("C3 DP equals the K3 distribution") {
  const auto a = cycle_count_dp(3, 3, std::span<const double>(ones_r(3)), Topology::Cycle);
  const auto b = exact_pmf(clique_graph(3), 3, std::span<const double>(ones_r(3)));
  REQUIRE(a.keys.size() == b.keys.size());
  for (std::size_t e = 0; e < a.keys.size(); ++e) CHECK(a.prob[e] == Approx(b.prob[e]));
}

TEST_CASE("moments: symmetry, row sums, reconstitution") {
  const Graph c6 = cycle_graph(6);
  const auto m = exact_moments(c6, 3, std::span<const double>(ones_r(3)));
  CHECK(m.mu[0] == Approx(2.0));
  CHECK(m.mu[1] == Approx(2.0));

  Eigen::VectorXd mu_full;
  Eigen::MatrixXd sigma_full;
  extend_moments(m, 6, mu_full, sigma_full);
  CHECK(mu_full[2] == Approx(2.0));
  for (int i = 0; i < 3; ++i) CHECK(sigma_full.row(i).sum() == Approx(0.0).epsilon(1e-12));

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.sigma);
  CHECK(es.eigenvalues().minCoeff() >= -1e-9 * m.sigma.norm());
}

TEST_CASE("finite differences reproduce closed forms") {
  const Graph one = path_graph(1);
  const std::vector<double> lambda{2.0, 1.0};
  const auto fd = finite_diff_moments(one, 2, lambda, 1e-4);
  CHECK(std::abs(fd.mu[0] - 2.0 / 3.0) <= 1e-8);

  const Graph k3 = clique_graph(3);
  const auto fk = finite_diff_moments(k3, 3, ones_r(3), 1e-4);
  CHECK(std::abs(fk.mu[0] - 1.0) <= 1e-8);
  CHECK(std::abs(fk.mu[1] - 1.0) <= 1e-8);
}

TEST_CASE("finite-difference covariance matches exact on C6, q=3") {
  const Graph c6 = cycle_graph(6);
  const auto exact = exact_moments(c6, 3, std::span<const double>(ones_r(3)));
  const auto fd = finite_diff_moments(c6, 3, ones_r(3), 1e-4);
  CHECK((fd.sigma - exact.sigma).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK((fd.mu - exact.mu).lpNorm<Eigen::Infinity>() <= 1e-6);
}

TEST_CASE("finite differences converge to exact moments at second order") {
  const Graph c5 = cycle_graph(5);
  const std::vector<double> lambda{1.05, 1.0, 0.95, 1.0};
  const auto exact = exact_moments(c5, 4, lambda);
  const auto err = [&](double h) {
    const auto fd = finite_diff_moments(c5, 4, lambda, h);
    return std::max((fd.mu - exact.mu).lpNorm<Eigen::Infinity>(),
                    (fd.sigma - exact.sigma).lpNorm<Eigen::Infinity>());
  };
  CHECK(err(1e-4) <= 1e-5);
  const double e1 = err(8e-3);
  const double e2 = err(4e-3);
  CHECK(e2 <= e1 / 3.0);

  const auto fd = finite_diff_moments(c5, 4, lambda, 1e-4);
  CHECK((fd.sigma - fd.sigma.transpose()).norm() == Approx(0.0));
}

TEST_CASE("finite difference argument checks") {
  const Graph one = path_graph(1);
  CHECK_THROWS_AS(finite_diff_moments(one, 2, ones_r(2), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(finite_diff_moments(one, 2, std::vector<double>{1e-5, 1.0}, 1e-3),
                  std::invalid_argument);
}

TEST_CASE("characteristic function basics") {
  const Graph c5 = cycle_graph(5);
  const ExactInstance inst = ExactInstance::build(c5, 3);
  const std::vector<double> lambda = ones_r(3);
  const std::vector<double> zero(3, 0.0);
  CHECK(std::abs(inst.char_function(lambda, zero) - Complex(1.0, 0.0)) <= 1e-14);

  // Global phase: t = s*(1,...,1) gives e^{ins}.
  const double s = 0.37;
  const std::vector<double> tglob(3, s);
  CHECK(std::abs(inst.char_function(lambda, tglob) - std::polar(1.0, 5.0 * s)) <= 1e-12);

  // Single vertex, q=2, t=(pi, 0): (e^{i pi} + 1)/2 = 0.
  const Graph one = path_graph(1);
  const std::vector<double> tpi{3.14159265358979323846, 0.0};
  CHECK(std::abs(char_function(one, 2, ones_r(2), tpi)) <= 1e-14);

  // |phi| <= 1 on random angles.
  auto rng = make_rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> t(3);
    for (auto& x : t) x = (uniform01(rng) * 2.0 - 1.0) * 3.141592653589793;
    CHECK(std::abs(inst.char_function(lambda, t)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("census evaluation agrees with direct enumeration, including compensated mode") {
  const Graph pet = petersen_graph();
  const ExactInstance inst = ExactInstance::build(pet, 4);
  auto rng = make_rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Complex> lambda(4);
    for (auto& l : lambda) l = Complex(0.9 + 0.2 * uniform01(rng), 0.1 * (uniform01(rng) - 0.5));
    const Complex a = inst.partition(std::span<const Complex>(lambda));
    const Complex b = partition_function(pet, empty_pinning(pet, 4), lambda);
    CHECK(std::abs(a - b) <= 1e-11 * (1.0 + std::abs(b)));
    EnumOptions comp;
    comp.sum = SumMode::Compensated;
    const Complex c = evaluate_partition(inst.census(), std::span<const Complex>(lambda),
                                         SumMode::Compensated);
    CHECK(std::abs(a - c) <= 1e-11 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("DP overflow guard") {
  CHECK_THROWS_AS(class_census_dp(200, 5, Topology::Path), DpOverflowError);
  CHECK_THROWS_AS(class_census_dp(500, 3, Topology::Path), DpOverflowError);
}
