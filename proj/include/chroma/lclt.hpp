#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chroma/exact.hpp"
#include "chroma/graph.hpp"
#include "chroma/solver.hpp"

namespace chroma {

// Gaussian density with the given moments at a truncated count vector.
// Throws SingularSigmaError when min eigenvalue <= 1e-9 * trace.
double gaussian_prediction(const MomentSummary& m, std::span<const int> key);

struct LcltPoint {
  std::vector<int> key;
  double exact = 0.0;
  double gaussian = 0.0;
  double rel_error = 0.0;     // |gaussian - exact| / exact, when exact > 0
  double scaled_error = 0.0;  // n^{(q-1)/2} |gaussian - exact|, the local-CLT scale
};

struct LcltComparison {
  int n = 0;
  int q = 0;
  double window = 0.0;  // full class-size deviation |n - mu|_2 <= window * sqrt(n)
  std::vector<LcltPoint> points;
  double max_rel_error = 0.0;
  double mean_rel_error = 0.0;
  double max_scaled_error = 0.0;
  double mean_scaled_error = 0.0;
  std::size_t compared = 0;  // points with positive exact probability
};

LcltComparison lclt_compare(Topology family, int q, int n, double window,
                            std::span<const double> lambda);

struct DetScalingFit {
  std::vector<int> ns;
  std::vector<double> log_det;
  std::vector<double> min_eig_over_n;
  std::vector<double> max_eig_over_n;
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;
};

// Least-squares slope of log det(Sigma) against log n over a family sweep.
DetScalingFit det_scaling_fit(Topology family, int q, const std::vector<int>& ns,
                              std::span<const double> lambda);

struct CharBoundFit {
  double c_star = 0.0;  // min over the grid of -ln|phi(t)| / (n |t|^2)
  std::size_t grid_points = 0;
  std::vector<std::vector<double>> violations;  // t with |phi(t)| = 1 off zero
};

// Decay-rate fit of the characteristic function over a (q-1)-dimensional
// angle grid (embedded with t_q = 0).
CharBoundFit char_bound_fit(const Graph& g, int q, std::span<const double> lambda,
                            const std::vector<std::vector<double>>& t_grid,
                            const EnumOptions& opt = {});

// Random grid in [-pi, pi]^dim with |t|_2 >= min_norm.
std::vector<std::vector<double>> random_t_grid(int dim, std::size_t count, std::uint64_t seed,
                                               double min_norm = 1e-2);

struct TaylorCheck {
  Complex log_phi;        // branch tracked along the ray s*t
  Complex expansion;      // i<t, E X> - t' Cov t / 2 (full q coordinates)
  double remainder = 0.0;
  double ratio = 0.0;     // remainder / (n |t|_inf^3)
  bool within_hypothesis = false;
  double hypothesis_bound = 0.0;  // R/(4+2R) at the proven radius
};

// Third-order remainder of log of the full characteristic function at t.
TaylorCheck taylor_check(const Graph& g, int q, std::span<const double> lambda,
                         std::span<const double> t, const EnumOptions& opt = {});

}  // namespace chroma
