#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chroma/exact.hpp"
#include "chroma/glauber.hpp"
#include "chroma/graph.hpp"

namespace chroma {

struct TargetSpec {
  enum class Mode { Exact, Equitable };
  Mode mode = Mode::Equitable;
  std::vector<int> counts;  // exact mode: full q-length class-size vector

  static TargetSpec exact(std::vector<int> counts);
  static TargetSpec equitable();
};

// All vectors with entries in {floor(n/q), ceil(n/q)} summing to n.
std::vector<std::vector<int>> equitable_targets(int n, int q);

// Full-length target set for a spec on a given instance (sorted).
std::vector<std::vector<int>> target_set(const TargetSpec& target, int n, int q);

struct RejectionOptions {
  std::uint64_t t_per_iter = 0;   // 0: ceil(20 n ln max(n,2))
  std::uint64_t max_iters = 0;    // 0: ceil(10 n^{(q-1)/2} ln(1/eps))
  double eps = 0.01;
  int threads = 0;
};

std::uint64_t default_t_per_iter(int n);
std::uint64_t default_max_iters(int n, int q, double eps);

struct RejectionOutcome {
  bool success = false;
  Coloring coloring;
  std::vector<int> counts;
  std::uint64_t iterations = 0;
  std::vector<char> hits;  // per-iteration hit indicator
  std::uint64_t t_per_iter = 0;
};

// Repeats (greedy init + T Glauber steps) until the class vector lies in the
// target set; iterations are independent given per-iteration seed streams, so
// batches may run concurrently and the first hit by index wins.
RejectionOutcome rejection_sample(const Graph& g, int q, std::span<const double> lambda,
                                  const TargetSpec& target, std::uint64_t seed,
                                  const RejectionOptions& opt = {});

struct SkewedOptions {
  double ball_radius = 0.2;
  RejectionOptions rejection;
  std::uint64_t per_candidate_iters = 0;  // grid mode; 0: split the default budget
  double newton_tol = 1e-6;
  int newton_max_iters = 60;
};

struct SkewedOutcome {
  RejectionOutcome outcome;
  std::vector<double> lambda;  // fugacity the accepted run used (lambda_q = 1)
  bool inside_proven_radius = false;
  std::string mode;
  double solve_residual = 0.0;       // newton mode
  std::size_t candidates_tried = 0;  // grid mode
};

enum class SkewedMode { Grid, Newton };

// Exact-class-vector sampling. Grid mode walks fugacity candidates
// 1 + k/sqrt(n) (spiral by |k|_1) and runs rejection per candidate; newton
// mode inverts the expectation map first (best iterate is used even when the
// target is outside the reachable ball) and rejects at that fugacity.
SkewedOutcome skewed_sample(const Graph& g, int q, const std::vector<int>& target_counts,
                            SkewedMode mode, std::uint64_t seed, const SkewedOptions& opt = {});

struct ScalingFit {
  std::vector<int> ns;
  std::vector<double> log_prob;
  std::vector<std::vector<int>> targets;  // truncated target vector per n
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;
};

enum class ScalingMode { Exact, Empirical };

// log P(X = nearest-equitable-vector) against log n on a graph family;
// exact mode reads the probability off the transfer DP, empirical mode
// estimates it from independent chain runs.
ScalingFit acceptance_scaling_experiment(Topology family, int q, const std::vector<int>& ns,
                                         std::span<const double> lambda, ScalingMode mode,
                                         std::uint64_t seed = 0,
                                         std::size_t empirical_iters = 2000, int threads = 0);

}  // namespace chroma
