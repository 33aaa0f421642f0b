#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chroma/exact.hpp"
#include "chroma/graph.hpp"

namespace chroma {

// Constants of the zero-freeness analysis for a degree bound.
struct ZeroFreeConstants {
  int max_degree = 1;
  double nu = 0.9;
  double eps_i = 0.0;   // 1e-4 / Delta^4
  double eps_r = 0.0;   // 1e-2 / Delta^2
  double radius = 0.0;  // nu * eps_i / 4

  static ZeroFreeConstants for_degree(int max_degree);
};

// nu * eps_I / 4; every fugacity vector within this l-inf distance of 1 is valid.
double zero_free_radius(int max_degree);

struct AssumptionCheck {
  int id = 0;        // 1: off the cut, 2: argument, 3: modulus ratio
  int worst_i = -1;  // offending coordinate (0-based)
  int worst_j = -1;  // second coordinate for the pairwise assumption
  double measured = 0.0;
  double bound = 0.0;
  bool ok = false;
};

struct ValidityReport {
  bool valid = false;
  std::array<AssumptionCheck, 3> checks;
};

// Validity of a complex fugacity vector: (1) no coordinate on (-inf, 0],
// (2) |arg lambda_i| <= nu*eps_I/2, (3) |Re ln(lambda_i/lambda_j)| <= Delta*eps_I.
ValidityReport check_valid(std::span<const Complex> lambda, int max_degree);

// 0.99^n (lambda_min / lambda_max)^(n*Delta) with the min/max clamped by 1.
double partition_lower_bound(std::span<const Complex> lambda, int n, int max_degree);

struct ScanViolation {
  std::size_t sample = 0;
  std::string kind;  // "zero" or "below_lower_bound"
  double abs_z = 0.0;
  double bound = 0.0;
  std::vector<Complex> lambda;
};

struct ScanReport {
  std::size_t samples = 0;
  double radius = 0.0;
  double min_abs_z = 0.0;
  std::vector<Complex> argmin_lambda;
  double lower_bound_at_argmin = 0.0;
  std::vector<ScanViolation> violations;
};

// Samples fugacities in the complex l-inf polydisc around 1 (even samples
// uniform in the disc per coordinate, odd samples at full radius with random
// phase) and checks |Z| against zero and the partition lower bound. The bound
// check applies only in its regime (valid lambda and q >= 2*Delta);
// out-of-regime scans are report-only.
ScanReport polydisc_scan(const Graph& g, int q, int max_degree, std::size_t n_samples,
                         std::uint64_t seed, std::optional<double> radius_override = {},
                         const EnumOptions& opt = {}, int threads = 0);

struct RatioAudit {
  int color_i = 0, color_j = 0;
  double re_measured = 0.0, re_bound = 0.0;
  double im_measured = 0.0, im_bound = 0.0;
};

struct InductionAudit {
  int vertex = 0;
  int unpinned_neighbors = 0;
  std::vector<RatioAudit> pairs;
  double worst_slack = 0.0;  // min over pairs of bound - measured
  bool bounds_ok = false;    // real/imaginary log-ratio bounds
  bool off_cut_ok = false;   // ratios avoid (-inf, 0]
  bool all_pinned_identity_ok = true;  // ratio equals lambda_i/lambda_j when d_u = 0
  bool bad_color_zero_ok = true;       // ratio vanishes for bad i
};

// Checks the log-ratio bounds of the induction hypothesis at vertex u by
// exact evaluation at lambda and at the all-ones vector.
InductionAudit induction_audit(const Graph& g, const PartialColoring& tau, int u,
                               std::span<const Complex> lambda, int max_degree,
                               const EnumOptions& opt = {});

}  // namespace chroma
