#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chroma/coloring.hpp"
#include "chroma/graph.hpp"

namespace chroma {

using Complex = std::complex<double>;

struct EnumCapError : std::runtime_error {
  explicit EnumCapError(const std::string& what) : std::runtime_error(what) {}
};
struct DpOverflowError : std::runtime_error {
  explicit DpOverflowError(const std::string& what) : std::runtime_error(what) {}
};
// A term of the marginal-ratio recurrence is not well-defined at this fugacity.
struct IllDefinedTermError : std::runtime_error {
  IllDefinedTermError(std::string cond, const std::string& what)
      : std::runtime_error(what), condition(std::move(cond)) {}
  std::string condition;
};

enum class SumMode { Auto, Plain, Compensated };

struct EnumOptions {
  std::uint64_t cap = 100'000'000;  // admits instances with q^unpinned <= cap
  SumMode sum = SumMode::Auto;      // Auto: compensated when unpinned > 20
};

enum class Topology { Path, Cycle };

// ---------------------------------------------------------------------------
// Class census: number of proper colorings per full color-class count vector.
// Fugacity-independent; every exact quantity below is a weighted sum over it.
// ---------------------------------------------------------------------------
struct ClassCensus {
  int n = 0;
  int q = 0;
  std::vector<std::vector<int>> counts;  // full q-length vectors, lex-sorted
  std::vector<double> colorings;         // colorings with those class sizes
  double total_colorings() const;
};

ClassCensus class_census(const Graph& g, const PartialColoring& tau, const EnumOptions& opt = {});
ClassCensus class_census(const Graph& g, int q, const EnumOptions& opt = {});
// Transfer DP over the count vector for paths and cycles. q <= 5, n <= 200,
// and the dense state table must fit the budget; otherwise DpOverflowError.
ClassCensus class_census_dp(int n, int q, Topology topology);

double evaluate_partition(const ClassCensus& census, std::span<const double> lambda);
Complex evaluate_partition(const ClassCensus& census, std::span<const Complex> lambda,
                           SumMode mode = SumMode::Auto);

// ---------------------------------------------------------------------------
// Direct enumeration (vertices in index order, colors 1..q, propriety pruning,
// partial-weight accumulation).
// ---------------------------------------------------------------------------
Complex partition_function(const Graph& g, const PartialColoring& tau,
                           std::span<const Complex> lambda, const EnumOptions& opt = {});
double partition_function(const Graph& g, const PartialColoring& tau,
                          std::span<const double> lambda, const EnumOptions& opt = {});

// Z restricted to colorings with sigma(v) = i; 0 for a bad color.
Complex restricted_partition(const Graph& g, const PartialColoring& tau, int v, int i,
                             std::span<const Complex> lambda, const EnumOptions& opt = {});
// All q restricted values in one enumeration pass (index c-1 holds color c).
std::vector<Complex> restricted_partition_all(const Graph& g, const PartialColoring& tau, int v,
                                              std::span<const Complex> lambda,
                                              const EnumOptions& opt = {});

// Z^(i) / Z^(j); requires j good for v and |Z^(j)| >= 1e-30 |Z|.
Complex marginal_ratio(const Graph& g, const PartialColoring& tau, int v, int i, int j,
                       std::span<const Complex> lambda, const EnumOptions& opt = {});

// |LHS - RHS| of the marginal-ratio recurrence across the interpolation
// graphs for the given neighbor ordering. Throws IllDefinedTermError when a
// denominator or pseudo-probability degenerates.
double verify_recurrence(const Graph& g, const PartialColoring& tau, int v, int i, int j,
                         std::span<const Complex> lambda, const std::vector<int>& ordering,
                         const EnumOptions& opt = {});

// ---------------------------------------------------------------------------
// Exact distribution and moments of the color-class vector (real fugacities).
// ---------------------------------------------------------------------------
struct ClassDistribution {
  int n = 0;
  int q = 0;
  std::vector<std::vector<int>> keys;  // truncated (q-1)-vectors, lex-sorted
  std::vector<double> prob;
  double prob_of(std::span<const int> key) const;  // 0 when absent
};

struct MomentSummary {
  Eigen::VectorXd mu;     // length q-1
  Eigen::MatrixXd sigma;  // (q-1) x (q-1), symmetric PSD
};

ClassDistribution distribution_of(const ClassCensus& census, std::span<const double> lambda);
MomentSummary moments_of(const ClassDistribution& dist);

// Route: enumeration when q^n is under the cap, else transfer DP for
// paths/cycles, else EnumCapError.
ClassDistribution exact_pmf(const Graph& g, int q, std::span<const double> lambda,
                            const EnumOptions& opt = {});
ClassDistribution cycle_count_dp(int n, int q, std::span<const double> lambda, Topology topology);
MomentSummary exact_moments(const Graph& g, int q, std::span<const double> lambda,
                            const EnumOptions& opt = {});

// Central differences of log Z: mu_i ~ lambda_i d_i log Z and
// sigma_ij ~ lambda_i lambda_j d_ij log Z + delta_ij lambda_i d_i log Z.
// Requires 0 < h <= 1e-2 and lambda_i - h > 0.
MomentSummary finite_diff_moments(const Graph& g, int q, std::span<const double> lambda, double h,
                                  const EnumOptions& opt = {});

// Extension of truncated moments to all q coordinates via sum X_i = n.
void extend_moments(const MomentSummary& m, int n, Eigen::VectorXd& mu_full,
                    Eigen::MatrixXd& sigma_full);

// ---------------------------------------------------------------------------
// Reusable per-instance evaluator: census built once, any-fugacity queries.
// ---------------------------------------------------------------------------
class ExactInstance {
 public:
  static ExactInstance build(const Graph& g, int q, const EnumOptions& opt = {});
  static ExactInstance from_census(ClassCensus census);

  int n() const { return census_.n; }
  int q() const { return census_.q; }
  const ClassCensus& census() const { return census_; }

  double partition(std::span<const double> lambda) const;
  Complex partition(std::span<const Complex> lambda) const;
  double log_partition(std::span<const double> lambda) const;
  ClassDistribution pmf(std::span<const double> lambda) const;
  MomentSummary moments(std::span<const double> lambda) const;
  // Characteristic function of the full class vector at angles t (length q):
  // Z(lambda_1 e^{i t_1}, ..., lambda_q e^{i t_q}) / Z(lambda).
  Complex char_function(std::span<const double> lambda, std::span<const double> t) const;

 private:
  ClassCensus census_;
};

Complex char_function(const Graph& g, int q, std::span<const double> lambda,
                      std::span<const double> t, const EnumOptions& opt = {});

}  // namespace chroma
