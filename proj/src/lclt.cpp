#include "chroma/lclt.hpp"

#include <algorithm>
#include <cmath>

#include "chroma/rng.hpp"
#include "chroma/zerofree.hpp"

namespace chroma {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd to_vec(std::span<const int> key) {
  Eigen::VectorXd x(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) x[static_cast<int>(i)] = key[i];
  return x;
}

}  // namespace

double gaussian_prediction(const MomentSummary& m, std::span<const int> key) {
  const int d = static_cast<int>(m.mu.size());
  if (static_cast<int>(key.size()) != d)
    throw std::invalid_argument("count vector has wrong dimension");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.sigma);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig <= 1e-9 * m.sigma.trace())
    throw SingularSigmaError("covariance is singular; no Gaussian density");
  double log_det = 0.0;
  for (int i = 0; i < d; ++i) log_det += std::log(es.eigenvalues()[i]);
  const Eigen::VectorXd diff = to_vec(key) - m.mu;
  const double quad = diff.dot(m.sigma.ldlt().solve(diff));
  return std::exp(-0.5 * quad - 0.5 * log_det - 0.5 * d * std::log(2.0 * kPi));
}

LcltComparison lclt_compare(Topology family, int q, int n, double window,
                            std::span<const double> lambda) {
  const ClassCensus census = class_census_dp(n, q, family);
  const ClassDistribution dist = distribution_of(census, lambda);
  const MomentSummary m = moments_of(dist);

  Eigen::VectorXd mu_full;
  Eigen::MatrixXd sigma_full;
  extend_moments(m, n, mu_full, sigma_full);

  LcltComparison cmp;
  cmp.n = n;
  cmp.q = q;
  cmp.window = window;
  const double radius = window * std::sqrt(static_cast<double>(n));
  const double scale = std::pow(static_cast<double>(n), (q - 1) / 2.0);

  // Lattice points whose full class-size deviation lies in the l2 ball
  // around mu, swept over a bounding box of the first q-1 coordinates.
  const int d = q - 1;
  std::vector<int> lo(d), hi(d), key(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = std::max(0, static_cast<int>(std::ceil(m.mu[i] - radius)));
    hi[i] = std::min(n, static_cast<int>(std::floor(m.mu[i] + radius)));
  }
  double err_sum = 0.0, scaled_sum = 0.0;
  auto visit = [&](auto&& self, int pos) -> void {
    if (pos == d) {
      double dist2 = 0.0;
      int total = 0;
      for (int i = 0; i < d; ++i) {
        dist2 += (key[i] - m.mu[i]) * (key[i] - m.mu[i]);
        total += key[i];
      }
      if (total > n) return;
      const double last = (n - total) - mu_full[d];
      dist2 += last * last;
      if (dist2 > radius * radius) return;
      LcltPoint pt;
      pt.key = key;
      pt.exact = dist.prob_of(key);
      pt.gaussian = gaussian_prediction(m, key);
      pt.scaled_error = scale * std::abs(pt.gaussian - pt.exact);
      cmp.max_scaled_error = std::max(cmp.max_scaled_error, pt.scaled_error);
      scaled_sum += pt.scaled_error;
      if (pt.exact > 0.0) {
        pt.rel_error = std::abs(pt.gaussian - pt.exact) / pt.exact;
        cmp.max_rel_error = std::max(cmp.max_rel_error, pt.rel_error);
        err_sum += pt.rel_error;
        cmp.compared += 1;
      } else {
        pt.rel_error = std::numeric_limits<double>::quiet_NaN();
      }
      cmp.points.push_back(std::move(pt));
      return;
    }
    for (int v = lo[pos]; v <= hi[pos]; ++v) {
      key[pos] = v;
      self(self, pos + 1);
    }
  };
  visit(visit, 0);
  if (cmp.compared > 0) cmp.mean_rel_error = err_sum / static_cast<double>(cmp.compared);
  if (!cmp.points.empty()) cmp.mean_scaled_error = scaled_sum / cmp.points.size();
  return cmp;
}

DetScalingFit det_scaling_fit(Topology family, int q, const std::vector<int>& ns,
                              std::span<const double> lambda) {
  if (ns.size() < 4) throw std::invalid_argument("determinant fit needs at least 4 sizes");
  DetScalingFit fit;
  fit.ns = ns;
  for (const int n : ns) {
    const MomentSummary m = moments_of(distribution_of(class_census_dp(n, q, family), lambda));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.sigma);
    fit.log_det.push_back(std::log(m.sigma.determinant()));
    fit.min_eig_over_n.push_back(es.eigenvalues().minCoeff() / n);
    fit.max_eig_over_n.push_back(es.eigenvalues().maxCoeff() / n);
  }
  const std::size_t m = ns.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(ns[i]));
    sx += x;
    sy += fit.log_det[i];
    sxx += x * x;
    sxy += x * fit.log_det[i];
  }
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / m;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(ns[i]));
    fit.residuals.push_back(fit.log_det[i] - (fit.slope * x + fit.intercept));
  }
  return fit;
}

std::vector<std::vector<double>> random_t_grid(int dim, std::size_t count, std::uint64_t seed,
                                               double min_norm) {
  auto rng = make_rng(seed);
  std::vector<std::vector<double>> grid;
  grid.reserve(count);
  while (grid.size() < count) {
    std::vector<double> t(dim);
    double norm2 = 0.0;
    for (double& x : t) {
      x = (2.0 * uniform01(rng) - 1.0) * kPi;
      norm2 += x * x;
    }
    if (std::sqrt(norm2) < min_norm) continue;
    grid.push_back(std::move(t));
  }
  return grid;
}

CharBoundFit char_bound_fit(const Graph& g, int q, std::span<const double> lambda,
                            const std::vector<std::vector<double>>& t_grid,
                            const EnumOptions& opt) {
  const ExactInstance inst = ExactInstance::build(g, q, opt);
  CharBoundFit fit;
  fit.c_star = std::numeric_limits<double>::infinity();
  std::vector<double> full(q, 0.0);
  for (const auto& t : t_grid) {
    if (static_cast<int>(t.size()) != q - 1)
      throw std::invalid_argument("grid points must have q-1 coordinates");
    double norm2 = 0.0;
    for (int i = 0; i < q - 1; ++i) {
      full[i] = t[i];
      norm2 += t[i] * t[i];
    }
    full[q - 1] = 0.0;
    const double abs_phi = std::abs(inst.char_function(lambda, full));
    fit.grid_points += 1;
    if (abs_phi >= 1.0 - 1e-12) {
      fit.violations.push_back(t);
      continue;
    }
    fit.c_star = std::min(fit.c_star, -std::log(abs_phi) / (g.n * norm2));
  }
  return fit;
}

namespace {

// log of phi along the ray s -> char(s * t), tracked by continuity with
// adaptive bisection; principal-branch jumps above pi/2 force a refinement.
Complex log_char_along_ray(const ExactInstance& inst, std::span<const double> lambda,
                           std::span<const double> t) {
  const int q = static_cast<int>(t.size());
  std::vector<double> scaled(q);
  auto phi_at = [&](double s) {
    for (int i = 0; i < q; ++i) scaled[i] = s * t[i];
    const Complex phi = inst.char_function(lambda, scaled);
    if (std::abs(phi) < 1e-300)
      throw std::runtime_error("characteristic function vanishes along the ray");
    return phi;
  };

  Complex total{0.0, 0.0};
  auto segment = [&](auto&& self, double s0, Complex phi0, double s1, Complex phi1,
                     int depth) -> void {
    const Complex ratio = phi1 / phi0;
    if (std::abs(std::arg(ratio)) <= kPi / 2.0) {
      total += std::log(ratio);
      return;
    }
    if (depth >= 40) throw std::runtime_error("refine ray discretization");
    const double mid = (s0 + s1) / 2.0;
    const Complex phim = phi_at(mid);
    self(self, s0, phi0, mid, phim, depth + 1);
    self(self, mid, phim, s1, phi1, depth + 1);
  };

  const int segments = 8;
  Complex prev = phi_at(0.0);  // equals 1
  for (int k = 1; k <= segments; ++k) {
    const double s = static_cast<double>(k) / segments;
    const Complex cur = phi_at(s);
    segment(segment, (k - 1.0) / segments, prev, s, cur, 0);
    prev = cur;
  }
  return total;
}

}  // namespace

TaylorCheck taylor_check(const Graph& g, int q, std::span<const double> lambda,
                         std::span<const double> t, const EnumOptions& opt) {
  if (static_cast<int>(t.size()) != q)
    throw std::invalid_argument("taylor check takes a full q-dimensional angle vector");
  const ExactInstance inst = ExactInstance::build(g, q, opt);
  const MomentSummary m = inst.moments(lambda);
  Eigen::VectorXd mu_full;
  Eigen::MatrixXd sigma_full;
  extend_moments(m, g.n, mu_full, sigma_full);

  Eigen::VectorXd tv(q);
  for (int i = 0; i < q; ++i) tv[i] = t[i];

  TaylorCheck check;
  const double r = zero_free_radius(std::max(1, g.max_degree));
  check.hypothesis_bound = r / (4.0 + 2.0 * r);
  const double t_inf = tv.lpNorm<Eigen::Infinity>();
  check.within_hypothesis = t_inf <= check.hypothesis_bound;

  check.log_phi = t_inf == 0.0 ? Complex{0.0, 0.0} : log_char_along_ray(inst, lambda, t);
  check.expansion = Complex(-0.5 * tv.dot(sigma_full * tv), tv.dot(mu_full));
  check.remainder = std::abs(check.log_phi - check.expansion);
  check.ratio = t_inf == 0.0 ? 0.0 : check.remainder / (g.n * t_inf * t_inf * t_inf);
  return check;
}

}  // namespace chroma
