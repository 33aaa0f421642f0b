#include "chroma/solver.hpp"

#include <algorithm>
#include <cmath>

#include "chroma/glauber.hpp"
#include "chroma/parallel.hpp"
#include "chroma/rng.hpp"
#include "chroma/zerofree.hpp"

namespace chroma {

Eigen::VectorXd psi_exact(const ExactInstance& inst, std::span<const double> lambda) {
  return inst.moments(lambda).mu;
}

Eigen::VectorXd psi_exact(const Graph& g, int q, std::span<const double> lambda,
                          const EnumOptions& opt) {
  return exact_moments(g, q, lambda, opt).mu;
}

McmcPsi psi_mcmc(const Graph& g, int q, std::span<const double> lambda, std::size_t samples,
                 std::uint64_t steps, std::uint64_t seed, int threads) {
  if (q < 2 * g.max_degree + 1)
    throw std::invalid_argument("chain-estimated expectation map requires q >= 2*Delta + 1");
  const int d = q - 1;
  std::vector<std::vector<int>> keys(samples);
  parallel_for_index(samples, threads, [&](std::size_t i) {
    const Coloring sigma = glauber_run(g, q, lambda, steps, split_stream(seed, i));
    keys[i] = truncate_counts(class_counts(sigma, q));
  });

  McmcPsi out;
  out.samples = samples;
  out.value = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd second = Eigen::VectorXd::Zero(d);
  for (const auto& key : keys)
    for (int i = 0; i < d; ++i) {
      out.value[i] += key[i];
      second[i] += static_cast<double>(key[i]) * key[i];
    }
  out.value /= static_cast<double>(samples);
  out.std_error.resize(d);
  for (int i = 0; i < d; ++i) {
    const double var =
        std::max(0.0, second[i] / samples - out.value[i] * out.value[i]);
    out.std_error[i] = std::sqrt(var / static_cast<double>(samples));
  }
  return out;
}

Eigen::MatrixXd jacobian(const Graph& g, int q, std::span<const double> lambda,
                         const EnumOptions& opt) {
  const MomentSummary m = exact_moments(g, q, lambda, opt);
  Eigen::MatrixXd j = m.sigma;
  for (int c = 0; c < q - 1; ++c) j.col(c) /= lambda[c];
  return j;
}

namespace {

std::vector<double> lambda_of_theta(const Eigen::VectorXd& theta) {
  std::vector<double> lambda(theta.size() + 1, 1.0);
  for (int i = 0; i < theta.size(); ++i) lambda[i] = std::exp(theta[i]);
  return lambda;
}

}  // namespace

SolveResult solve_lambda(const Graph& g, int q, const Eigen::VectorXd& target, double ball_radius,
                         double tol, int max_iters, const EnumOptions& opt) {
  if (target.size() != q - 1) throw std::invalid_argument("target must have q-1 coordinates");
  if (target.sum() > g.n + 1e-9)
    throw std::invalid_argument("target class sizes exceed the vertex count");
  const ExactInstance inst = ExactInstance::build(g, q, opt);
  const double theta_max = std::log1p(ball_radius);

  auto project = [&](Eigen::VectorXd theta) {
    const double norm = theta.norm();
    if (norm > theta_max) theta *= theta_max / norm;
    return theta;
  };

  SolveResult result;
  result.ball_radius = ball_radius;

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(q - 1);
  std::vector<double> lambda = lambda_of_theta(theta);
  MomentSummary m = inst.moments(lambda);
  double residual = (target - m.mu).norm();

  for (int iter = 0; iter < max_iters && residual > tol; ++iter) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.sigma);
    if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, m.sigma.trace()))
      throw SingularSigmaError("covariance is numerically singular during Newton solve");
    const Eigen::VectorXd step = m.sigma.ldlt().solve(target - m.mu);

    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= 1e-9) {
      const Eigen::VectorXd candidate = project(theta + alpha * step);
      const std::vector<double> lam = lambda_of_theta(candidate);
      const MomentSummary mc = inst.moments(lam);
      const double res = (target - mc.mu).norm();
      if (res < residual) {
        theta = candidate;
        lambda = lam;
        m = mc;
        residual = res;
        accepted = true;
        break;
      }
      alpha /= 2.0;
    }
    if (!accepted) break;  // stalled (typically pinned to the ball boundary)
    result.iterations = iter + 1;
  }

  result.lambda = lambda;
  result.achieved = m.mu;
  result.residual = residual;
  result.success = residual <= tol;
  double dev = 0.0;
  for (double l : lambda) dev = std::max(dev, std::abs(l - 1.0));
  result.inside_proven_radius = dev <= zero_free_radius(std::max(1, g.max_degree));
  return result;
}

LipschitzProbe lipschitz_probe(const Graph& g, int q, std::size_t n_pairs, double ball_radius,
                               std::uint64_t seed, const EnumOptions& opt) {
  const ExactInstance inst = ExactInstance::build(g, q, opt);
  LipschitzProbe probe;
  probe.c_lower = std::numeric_limits<double>::infinity();

  for (std::size_t p = 0; p < n_pairs; ++p) {
    auto rng = make_rng(seed, p);
    std::vector<double> a(q, 1.0), b(q, 1.0);
    for (int i = 0; i < q - 1; ++i) {
      a[i] = 1.0 + ball_radius * (2.0 * uniform01(rng) - 1.0);
      b[i] = 1.0 + ball_radius * (2.0 * uniform01(rng) - 1.0);
    }
    double dl = 0.0, dt = 0.0;
    for (int i = 0; i < q - 1; ++i) {
      dl += (a[i] - b[i]) * (a[i] - b[i]);
      const double t = std::log(a[i]) - std::log(b[i]);
      dt += t * t;
    }
    dl = std::sqrt(dl);
    dt = std::sqrt(dt);
    if (dl < 1e-12) continue;  // identical pair
    const Eigen::VectorXd da = psi_exact(inst, a) - psi_exact(inst, b);
    const double dpsi = da.norm();
    probe.c_upper = std::max(probe.c_upper, dpsi / (g.n * dl));
    probe.c_lower = std::min(probe.c_lower, dpsi / (g.n * dt));
    probe.pairs += 1;
  }
  return probe;
}

}  // namespace chroma
