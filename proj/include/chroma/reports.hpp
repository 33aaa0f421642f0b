#pragma once

// JSON report shapes for the CLI surface. Payloads are deterministic for a
// fixed config (keys ordered, no timestamps; wall time goes to the stderr
// log).

#include <json.hpp>

#include "chroma/exact.hpp"
#include "chroma/glauber.hpp"
#include "chroma/lclt.hpp"
#include "chroma/rejection.hpp"
#include "chroma/solver.hpp"
#include "chroma/zerofree.hpp"

namespace chroma {

using Json = nlohmann::ordered_json;

inline Json complex_json(const Complex& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json complex_vector_json(const std::vector<Complex>& v) {
  Json arr = Json::array();
  for (const auto& z : v) arr.push_back(complex_json(z));
  return arr;
}

inline Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json vector_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

// The documented pmf/moments export: n, q, lambda, truncated-count pmf, mu,
// sigma.
inline Json pmf_report(const Graph& g, int q, const std::vector<double>& lambda,
                       const EnumOptions& opt = {}) {
  const ClassDistribution dist = exact_pmf(g, q, lambda, opt);
  const MomentSummary m = moments_of(dist);
  Json pmf = Json::array();
  for (std::size_t e = 0; e < dist.keys.size(); ++e)
    pmf.push_back(Json{{"counts", dist.keys[e]}, {"p", dist.prob[e]}});
  return Json{{"n", g.n},           {"q", q},
              {"lambda", lambda},   {"pmf", std::move(pmf)},
              {"mu", vector_json(m.mu)}, {"sigma", matrix_json(m.sigma)}};
}

inline Json scan_report_json(const ScanReport& rep) {
  Json violations = Json::array();
  for (const auto& v : rep.violations)
    violations.push_back(Json{{"sample", v.sample},
                              {"kind", v.kind},
                              {"abs_z", v.abs_z},
                              {"bound", v.bound},
                              {"lambda", complex_vector_json(v.lambda)}});
  return Json{{"samples", rep.samples},
              {"radius", rep.radius},
              {"min_abs_z", rep.min_abs_z},
              {"argmin_lambda", complex_vector_json(rep.argmin_lambda)},
              {"lower_bound_at_argmin", rep.lower_bound_at_argmin},
              {"violations", std::move(violations)}};
}

inline Json solve_result_json(const SolveResult& r) {
  return Json{{"lambda", r.lambda},
              {"achieved", vector_json(r.achieved)},
              {"residual", r.residual},
              {"iterations", r.iterations},
              {"success", r.success},
              {"inside_proven_radius", r.inside_proven_radius},
              {"ball_radius", r.ball_radius}};
}

inline Json rejection_outcome_json(const RejectionOutcome& out) {
  Json hits = Json::array();
  for (char h : out.hits) hits.push_back(h != 0);
  return Json{{"success", out.success},
              {"coloring", out.coloring},
              {"counts", out.counts},
              {"iterations", out.iterations},
              {"t_per_iter", out.t_per_iter},
              {"hits", std::move(hits)}};
}

inline Json contraction_json(const ContractionEstimate& est) {
  return Json{{"mean_distance_after", est.mean_distance_after},
              {"mean_delta", est.mean_delta},
              {"std_error", est.std_error},
              {"trials", est.trials}};
}

inline Json tv_json(const TvEstimate& est) {
  return Json{{"tv", est.tv},
              {"n_samples", est.n_samples},
              {"support", est.support},
              {"note", est.note}};
}

inline Json validity_json(const ValidityReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks)
    checks.push_back(Json{{"assumption", c.id},
                          {"worst_i", c.worst_i},
                          {"worst_j", c.worst_j},
                          {"measured", c.measured},
                          {"bound", c.bound},
                          {"ok", c.ok}});
  return Json{{"valid", rep.valid}, {"checks", std::move(checks)}};
}

inline Json lclt_comparison_json(const LcltComparison& cmp, bool include_points = false) {
  Json j{{"n", cmp.n},
         {"q", cmp.q},
         {"window", cmp.window},
         {"points", cmp.points.size()},
         {"compared", cmp.compared},
         {"max_rel_error", cmp.max_rel_error},
         {"mean_rel_error", cmp.mean_rel_error},
         {"max_scaled_error", cmp.max_scaled_error},
         {"mean_scaled_error", cmp.mean_scaled_error}};
  if (include_points) {
    Json pts = Json::array();
    for (const auto& p : cmp.points)
      pts.push_back(Json{{"counts", p.key},
                         {"exact", p.exact},
                         {"gaussian", p.gaussian},
                         {"rel_error", p.rel_error},
                         {"scaled_error", p.scaled_error}});
    j["values"] = std::move(pts);
  }
  return j;
}

}  // namespace chroma
