#include "chroma/zerofree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chroma/parallel.hpp"
#include "chroma/rng.hpp"

namespace chroma {

ZeroFreeConstants ZeroFreeConstants::for_degree(int max_degree) {
  if (max_degree < 1) throw std::invalid_argument("degree bound must be at least 1");
  ZeroFreeConstants c;
  c.max_degree = max_degree;
  const double d2 = static_cast<double>(max_degree) * max_degree;
  c.eps_r = 1e-2 / d2;
  c.eps_i = 1e-4 / (d2 * d2);
  c.radius = c.nu * c.eps_i / 4.0;
  return c;
}

double zero_free_radius(int max_degree) { return ZeroFreeConstants::for_degree(max_degree).radius; }

namespace {

bool on_cut(Complex z) { return z.imag() == 0.0 && z.real() <= 0.0; }

double distance_to_cut(Complex z) {
  if (z.real() <= 0.0) return std::abs(z.imag());
  return std::abs(z);
}

}  // namespace

ValidityReport check_valid(std::span<const Complex> lambda, int max_degree) {
  const auto c = ZeroFreeConstants::for_degree(max_degree);
  const int q = static_cast<int>(lambda.size());
  ValidityReport report;

  AssumptionCheck& cut = report.checks[0];
  cut.id = 1;
  cut.bound = 0.0;
  cut.measured = std::numeric_limits<double>::infinity();
  for (int i = 0; i < q; ++i) {
    const double d = distance_to_cut(lambda[i]);
    if (d < cut.measured) {
      cut.measured = d;
      cut.worst_i = i;
    }
    if (on_cut(lambda[i])) {
      cut.measured = 0.0;
      cut.worst_i = i;
      break;
    }
  }
  cut.ok = cut.measured > 0.0;

  AssumptionCheck& arg = report.checks[1];
  arg.id = 2;
  arg.bound = c.nu * c.eps_i / 2.0;
  for (int i = 0; i < q; ++i) {
    const double a = std::abs(std::arg(lambda[i]));
    if (a >= arg.measured) {
      arg.measured = a;
      arg.worst_i = i;
    }
  }
  arg.ok = cut.ok && arg.measured <= arg.bound;

  AssumptionCheck& ratio = report.checks[2];
  ratio.id = 3;
  ratio.bound = max_degree * c.eps_i;
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      if (on_cut(lambda[i]) || on_cut(lambda[j])) continue;
      const double m = std::abs(std::log(std::abs(lambda[i])) - std::log(std::abs(lambda[j])));
      if (m >= ratio.measured) {
        ratio.measured = m;
        ratio.worst_i = i;
        ratio.worst_j = j;
      }
    }
  }
  ratio.ok = cut.ok && ratio.measured <= ratio.bound;

  report.valid = cut.ok && arg.ok && ratio.ok;
  return report;
}

double partition_lower_bound(std::span<const Complex> lambda, int n, int max_degree) {
  double lo = 1.0, hi = 1.0;
  for (const Complex& l : lambda) {
    lo = std::min(lo, std::abs(l));
    hi = std::max(hi, std::abs(l));
  }
  return std::pow(0.99, n) * std::pow(lo / hi, static_cast<double>(n) * max_degree);
}

ScanReport polydisc_scan(const Graph& g, int q, int max_degree, std::size_t n_samples,
                         std::uint64_t seed, std::optional<double> radius_override,
                         const EnumOptions& opt, int threads) {
  const double radius = radius_override.value_or(zero_free_radius(max_degree));
  const ExactInstance inst = ExactInstance::build(g, q, opt);
  const double zero_floor = 1e-30 * inst.census().total_colorings();
  const bool regime = q >= 2 * max_degree;

  struct Sample {
    double abs_z = 0.0;
    double bound = 0.0;
    bool valid = false;
    std::vector<Complex> lambda;
  };
  std::vector<Sample> samples(n_samples);

  parallel_for_index(n_samples, threads, [&](std::size_t idx) {
    auto rng = make_rng(seed ^ static_cast<std::uint64_t>(idx));
    std::vector<Complex> lambda(q);
    const bool boundary = idx % 2 == 1;
    for (int c = 0; c < q; ++c) {
      const double r = boundary ? radius : radius * std::sqrt(uniform01(rng));
      const double phase = 2.0 * 3.14159265358979323846 * uniform01(rng);
      lambda[c] = Complex(1.0, 0.0) + std::polar(r, phase);
    }
    Sample& s = samples[idx];
    s.abs_z = std::abs(inst.partition(std::span<const Complex>(lambda)));
    s.bound = partition_lower_bound(lambda, g.n, max_degree);
    s.valid = check_valid(lambda, max_degree).valid;
    s.lambda = std::move(lambda);
  });

  ScanReport report;
  report.samples = n_samples;
  report.radius = radius;
  report.min_abs_z = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < n_samples; ++idx) {
    const Sample& s = samples[idx];
    if (s.abs_z < report.min_abs_z) {
      report.min_abs_z = s.abs_z;
      report.argmin_lambda = s.lambda;
      report.lower_bound_at_argmin = s.bound;
    }
    if (s.abs_z < zero_floor)
      report.violations.push_back({idx, "zero", s.abs_z, zero_floor, s.lambda});
    else if (regime && s.valid && s.abs_z < s.bound)
      report.violations.push_back({idx, "below_lower_bound", s.abs_z, s.bound, s.lambda});
  }
  return report;
}

InductionAudit induction_audit(const Graph& g, const PartialColoring& tau, int u,
                               std::span<const Complex> lambda, int max_degree,
                               const EnumOptions& opt) {
  if (tau.pinned(u)) throw std::invalid_argument("audit vertex must be unpinned");
  if (tau.q < 2 * max_degree) throw std::invalid_argument("audit requires q >= 2*Delta");
  if (!check_valid(lambda, max_degree).valid)
    throw std::invalid_argument("fugacity vector violates the validity assumptions");
  const auto c = ZeroFreeConstants::for_degree(max_degree);

  int d_u = 0;
  for (int w : g.adj[u])
    if (!tau.pinned(w)) ++d_u;

  const auto at_lambda = restricted_partition_all(g, tau, u, lambda, opt);
  const std::vector<Complex> ones(tau.q, Complex(1.0, 0.0));
  const auto at_one = restricted_partition_all(g, tau, u, std::span<const Complex>(ones), opt);

  double mass = 0.0;
  for (const auto& z : at_lambda) mass += std::abs(z);

  InductionAudit audit;
  audit.vertex = u;
  audit.unpinned_neighbors = d_u;
  audit.worst_slack = std::numeric_limits<double>::infinity();
  audit.bounds_ok = true;
  audit.off_cut_ok = true;

  for (int i = 1; i <= tau.q; ++i) {
    const bool i_good = good_color(g, tau, u, i);
    for (int j = 1; j <= tau.q; ++j) {
      if (i == j || !good_color(g, tau, u, j)) continue;
      const Complex zj = at_lambda[j - 1];
      if (std::abs(zj) <= 1e-30 * mass)
        throw std::runtime_error("ill-conditioned ratio: restricted partition nearly vanishes");
      const Complex ratio = at_lambda[i - 1] / zj;
      if (!i_good) {
        if (std::abs(ratio) > 1e-12) audit.bad_color_zero_ok = false;
        continue;
      }
      if (on_cut(ratio)) audit.off_cut_ok = false;

      const Complex lam_ratio = lambda[i - 1] / lambda[j - 1];
      const double ln_r1 = std::log(at_one[i - 1].real() / at_one[j - 1].real());
      RatioAudit pair;
      pair.color_i = i;
      pair.color_j = j;
      pair.re_measured = std::abs(std::log(std::abs(ratio)) - ln_r1);
      pair.re_bound = d_u * c.eps_r + std::abs(std::log(std::abs(lam_ratio)));
      pair.im_measured = std::abs(std::arg(ratio));
      pair.im_bound = d_u * c.eps_i + std::abs(std::arg(lam_ratio));
      audit.worst_slack = std::min({audit.worst_slack, pair.re_bound - pair.re_measured,
                                    pair.im_bound - pair.im_measured});
      if (pair.re_measured > pair.re_bound || pair.im_measured > pair.im_bound)
        audit.bounds_ok = false;

      if (d_u == 0 && std::abs(ratio - lam_ratio) > 1e-10 * (1.0 + std::abs(lam_ratio)))
        audit.all_pinned_identity_ok = false;
      audit.pairs.push_back(pair);
    }
  }
  return audit;
}

}  // namespace chroma
