#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chroma/exact.hpp"
#include "chroma/graph.hpp"

namespace chroma {

struct SingularSigmaError : std::runtime_error {
  explicit SingularSigmaError(const std::string& what) : std::runtime_error(what) {}
};

// Expected class sizes (first q-1 coordinates) at a full fugacity vector.
Eigen::VectorXd psi_exact(const Graph& g, int q, std::span<const double> lambda,
                          const EnumOptions& opt = {});
Eigen::VectorXd psi_exact(const ExactInstance& inst, std::span<const double> lambda);

struct McmcPsi {
  Eigen::VectorXd value;
  Eigen::VectorXd std_error;
  std::size_t samples = 0;
};

// Chain-estimated expectation map; requires q >= 2*Delta + 1 so the proven
// mixing regime applies.
McmcPsi psi_mcmc(const Graph& g, int q, std::span<const double> lambda, std::size_t samples,
                 std::uint64_t steps, std::uint64_t seed, int threads = 0);

// Jacobian of the expectation map in fugacity coordinates:
// covariance times diag(lambda_1..lambda_{q-1})^-1.
Eigen::MatrixXd jacobian(const Graph& g, int q, std::span<const double> lambda,
                         const EnumOptions& opt = {});

struct SolveResult {
  std::vector<double> lambda;  // full q-vector, last coordinate 1
  Eigen::VectorXd achieved;    // expectation map at lambda
  double residual = 0.0;
  int iterations = 0;
  bool success = false;
  bool inside_proven_radius = false;
  double ball_radius = 0.0;
};

// Damped Newton for the expectation map in log-fugacity coordinates, where
// the Jacobian is exactly the (q-1)x(q-1) covariance. Iterates are radially
// projected onto |theta|_2 <= ln(1+ball_radius); on stall or iteration
// exhaustion the best iterate is reported with success = false.
SolveResult solve_lambda(const Graph& g, int q, const Eigen::VectorXd& target,
                         double ball_radius = 0.2, double tol = 1e-6, int max_iters = 60,
                         const EnumOptions& opt = {});

struct LipschitzProbe {
  double c_upper = 0.0;  // max |dPsi| / (n |dlambda|)
  double c_lower = 0.0;  // min |dPsi| / (n |dtheta|)
  std::size_t pairs = 0;
};

LipschitzProbe lipschitz_probe(const Graph& g, int q, std::size_t n_pairs, double ball_radius,
                               std::uint64_t seed, const EnumOptions& opt = {});

}  // namespace chroma
