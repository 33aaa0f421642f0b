#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "chroma/exact.hpp"

namespace chroma {

namespace {

// Per-color power tables up to the maximum class size in the census.
template <class T>
std::vector<std::vector<T>> power_tables(const ClassCensus& census, std::span<const T> lambda) {
  std::vector<int> max_count(census.q, 0);
  for (const auto& key : census.counts)
    for (int c = 0; c < census.q; ++c) max_count[c] = std::max(max_count[c], key[c]);
  std::vector<std::vector<T>> pow(census.q);
  for (int c = 0; c < census.q; ++c) {
    pow[c].resize(max_count[c] + 1);
    pow[c][0] = T(1);
    for (int k = 1; k <= max_count[c]; ++k) pow[c][k] = pow[c][k - 1] * lambda[c];
  }
  return pow;
}

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

}  // namespace

double evaluate_partition(const ClassCensus& census, std::span<const double> lambda) {
  if (static_cast<int>(lambda.size()) != census.q)
    throw std::invalid_argument("fugacity vector length must equal q");
  const auto pow = power_tables<double>(census, lambda);
  double z = 0.0;
  for (std::size_t e = 0; e < census.counts.size(); ++e) {
    double term = census.colorings[e];
    const auto& key = census.counts[e];
    for (int c = 0; c < census.q; ++c) term *= pow[c][key[c]];
    z += term;
  }
  return z;
}

Complex evaluate_partition(const ClassCensus& census, std::span<const Complex> lambda,
                           SumMode mode) {
  if (static_cast<int>(lambda.size()) != census.q)
    throw std::invalid_argument("fugacity vector length must equal q");
  const auto pow = power_tables<Complex>(census, lambda);
  const bool comp = mode == SumMode::Compensated || (mode == SumMode::Auto && census.n > 20);
  KahanSum re, im;
  Complex plain{0.0, 0.0};
  for (std::size_t e = 0; e < census.counts.size(); ++e) {
    Complex term{census.colorings[e], 0.0};
    const auto& key = census.counts[e];
    for (int c = 0; c < census.q; ++c) term *= pow[c][key[c]];
    if (comp) {
      re.add(term.real());
      im.add(term.imag());
    } else {
      plain += term;
    }
  }
  return comp ? Complex(re.s, im.s) : plain;
}

// ---------------------------------------------------------------------------
// Transfer DP over (last color, truncated count vector) for paths and cycles.
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kDpStateBudget = 16'000'000;  // states * q table cells

struct DpTable {
  int n = 0, q = 0;
  std::size_t states = 0;             // (n+1)^(q-1)
  std::vector<std::size_t> stride;    // stride of color c in the packed index
  std::vector<double> cur, nxt;       // q layers of `states` cells each

  DpTable(int n_, int q_) : n(n_), q(q_) {
    stride.resize(q - 1);
    std::size_t s = 1;
    for (int c = 0; c < q - 1; ++c) {
      stride[c] = s;
      s *= static_cast<std::size_t>(n + 1);
    }
    states = s;
    if (states * static_cast<std::size_t>(q) > kDpStateBudget)
      throw DpOverflowError("count-vector DP state table too large for n=" + std::to_string(n) +
                            ", q=" + std::to_string(q));
    cur.assign(states * q, 0.0);
    nxt.assign(states * q, 0.0);
  }

  double* layer(std::vector<double>& buf, int color) { return buf.data() + (color - 1) * states; }

  // One vertex added: next[c'][s + e_{c'}] += sum_{c != c'} cur[c][s].
  void step() {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    for (std::size_t s = 0; s < states; ++s) {
      double tot = 0.0;
      for (int c = 1; c <= q; ++c) tot += layer(cur, c)[s];
      if (tot == 0.0) continue;
      for (int c = 1; c <= q; ++c) {
        const double w = tot - layer(cur, c)[s];
        if (w == 0.0) continue;
        const std::size_t target = c < q ? s + stride[c - 1] : s;
        layer(nxt, c)[target] += w;
      }
    }
    cur.swap(nxt);
  }

  void decode(std::size_t s, std::vector<int>& key) const {
    for (int c = 0; c < q - 1; ++c) key[c] = static_cast<int>((s / stride[c]) % (n + 1));
  }
};

void accumulate_census(std::map<std::vector<int>, double>& acc, const DpTable& dp,
                       const std::vector<double>& final_layers, int skip_color, int n, int q) {
  std::vector<int> key(q, 0);
  for (std::size_t s = 0; s < dp.states; ++s) {
    double w = 0.0;
    for (int c = 1; c <= q; ++c) {
      if (c == skip_color) continue;
      w += final_layers[(c - 1) * dp.states + s];
    }
    if (w == 0.0) continue;
    dp.decode(s, key);
    int partial = 0;
    for (int c = 0; c < q - 1; ++c) partial += key[c];
    key[q - 1] = n - partial;
    acc[key] += w;
  }
}

}  // namespace

ClassCensus class_census_dp(int n, int q, Topology topology) {
  if (q < 2 || q > 5) throw std::invalid_argument("count-vector DP supports 2 <= q <= 5");
  if (n < 1 || n > 200) throw DpOverflowError("count-vector DP supports n <= 200");
  if (topology == Topology::Cycle && n < 3)
    throw std::invalid_argument("cycle needs n >= 3");

  std::map<std::vector<int>, double> acc;
  if (topology == Topology::Path) {
    DpTable dp(n, q);
    for (int c = 1; c <= q; ++c) {
      const std::size_t s0 = c < q ? dp.stride[c - 1] : 0;
      dp.layer(dp.cur, c)[s0] = 1.0;
    }
    for (int t = 1; t < n; ++t) dp.step();
    accumulate_census(acc, dp, dp.cur, /*skip_color=*/0, n, q);
  } else {
    // First vertex pinned to color 1, last vertex != 1; the remaining start
    // colors are its color relabelings.
    DpTable dp(n, q);
    dp.layer(dp.cur, 1)[dp.stride[0]] = 1.0;
    for (int t = 1; t < n; ++t) dp.step();
    std::map<std::vector<int>, double> base;
    accumulate_census(base, dp, dp.cur, /*skip_color=*/1, n, q);
    std::vector<int> key(q, 0);
    for (int c0 = 1; c0 <= q; ++c0) {
      for (const auto& [k, w] : base) {
        key = k;
        std::swap(key[0], key[c0 - 1]);
        acc[key] += w;
      }
    }
  }

  ClassCensus out;
  out.n = n;
  out.q = q;
  for (const auto& [key, w] : acc) {
    if (w <= 0.0) continue;
    out.counts.push_back(key);
    out.colorings.push_back(w);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distributions and moments.
// ---------------------------------------------------------------------------

ClassDistribution distribution_of(const ClassCensus& census, std::span<const double> lambda) {
  for (double l : lambda)
    if (!(l > 0.0)) throw std::invalid_argument("distribution needs strictly positive fugacities");
  const auto pow = power_tables<double>(census, lambda);
  ClassDistribution dist;
  dist.n = census.n;
  dist.q = census.q;
  dist.keys.reserve(census.counts.size());
  dist.prob.reserve(census.counts.size());
  double z = 0.0;
  for (std::size_t e = 0; e < census.counts.size(); ++e) {
    double term = census.colorings[e];
    const auto& key = census.counts[e];
    for (int c = 0; c < census.q; ++c) term *= pow[c][key[c]];
    dist.keys.emplace_back(key.begin(), key.end() - 1);
    dist.prob.push_back(term);
    z += term;
  }
  if (!(z > 0.0)) throw std::domain_error("no proper coloring: partition function vanishes");
  for (double& p : dist.prob) p /= z;
  return dist;
}

double ClassDistribution::prob_of(std::span<const int> key) const {
  const std::vector<int> k(key.begin(), key.end());
  const auto it = std::lower_bound(keys.begin(), keys.end(), k);
  if (it == keys.end() || *it != k) return 0.0;
  return prob[static_cast<std::size_t>(it - keys.begin())];
}

MomentSummary moments_of(const ClassDistribution& dist) {
  const int d = dist.q - 1;
  MomentSummary m;
  m.mu = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t e = 0; e < dist.keys.size(); ++e) {
    const double p = dist.prob[e];
    Eigen::VectorXd x(d);
    for (int c = 0; c < d; ++c) x[c] = dist.keys[e][c];
    m.mu += p * x;
    second += p * x * x.transpose();
  }
  m.sigma = second - m.mu * m.mu.transpose();
  m.sigma = ((m.sigma + m.sigma.transpose()) / 2.0).eval();
  return m;
}

ClassDistribution exact_pmf(const Graph& g, int q, std::span<const double> lambda,
                            const EnumOptions& opt) {
  return ExactInstance::build(g, q, opt).pmf(lambda);
}

ClassDistribution cycle_count_dp(int n, int q, std::span<const double> lambda, Topology topology) {
  return distribution_of(class_census_dp(n, q, topology), lambda);
}

MomentSummary exact_moments(const Graph& g, int q, std::span<const double> lambda,
                            const EnumOptions& opt) {
  return moments_of(exact_pmf(g, q, lambda, opt));
}

void extend_moments(const MomentSummary& m, int n, Eigen::VectorXd& mu_full,
                    Eigen::MatrixXd& sigma_full) {
  const int d = static_cast<int>(m.mu.size());
  mu_full.resize(d + 1);
  mu_full.head(d) = m.mu;
  mu_full[d] = n - m.mu.sum();
  sigma_full.resize(d + 1, d + 1);
  sigma_full.topLeftCorner(d, d) = m.sigma;
  for (int i = 0; i < d; ++i) {
    const double s = -m.sigma.row(i).sum();
    sigma_full(i, d) = s;
    sigma_full(d, i) = s;
  }
  sigma_full(d, d) = m.sigma.sum();
}

MomentSummary finite_diff_moments(const Graph& g, int q, std::span<const double> lambda, double h,
                                  const EnumOptions& opt) {
  if (!(h > 0.0) || h > 1e-2) throw std::invalid_argument("step h must lie in (0, 1e-2]");
  for (double l : lambda)
    if (!(l - h > 0.0)) throw std::invalid_argument("lambda - h must stay strictly positive");
  const ExactInstance inst = ExactInstance::build(g, q, opt);

  std::vector<double> work(lambda.begin(), lambda.end());
  auto F = [&](int i, double di, int j, double dj) {
    work.assign(lambda.begin(), lambda.end());
    work[i] += di;
    if (j >= 0) work[j] += dj;
    return inst.log_partition(work);
  };

  const int d = q - 1;
  const double f0 = inst.log_partition(lambda);
  MomentSummary m;
  m.mu.resize(d);
  m.sigma.resize(d, d);
  std::vector<double> fp(d), fm(d);
  for (int i = 0; i < d; ++i) {
    fp[i] = F(i, h, -1, 0.0);
    fm[i] = F(i, -h, -1, 0.0);
    m.mu[i] = lambda[i] * (fp[i] - fm[i]) / (2.0 * h);
  }
  for (int i = 0; i < d; ++i) {
    m.sigma(i, i) = lambda[i] * lambda[i] * (fp[i] - 2.0 * f0 + fm[i]) / (h * h) + m.mu[i];
    for (int j = i + 1; j < d; ++j) {
      const double mixed = (F(i, h, j, h) - F(i, h, j, -h) - F(i, -h, j, h) + F(i, -h, j, -h)) /
                           (4.0 * h * h);
      m.sigma(i, j) = lambda[i] * lambda[j] * mixed;
      m.sigma(j, i) = m.sigma(i, j);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// ExactInstance
// ---------------------------------------------------------------------------

ExactInstance ExactInstance::build(const Graph& g, int q, const EnumOptions& opt) {
  std::uint64_t states = 1;
  bool under_cap = true;
  for (int i = 0; i < g.n && under_cap; ++i) {
    if (states > opt.cap / static_cast<std::uint64_t>(q))
      under_cap = false;
    else
      states *= static_cast<std::uint64_t>(q);
  }
  ExactInstance inst;
  if (under_cap) {
    inst.census_ = class_census(g, q, opt);
  } else if (is_cycle_graph(g)) {
    inst.census_ = class_census_dp(g.n, q, Topology::Cycle);
  } else if (is_path_graph(g)) {
    inst.census_ = class_census_dp(g.n, q, Topology::Path);
  } else {
    throw EnumCapError("enumeration cap exceeded and graph is not a path/cycle");
  }
  return inst;
}

ExactInstance ExactInstance::from_census(ClassCensus census) {
  ExactInstance inst;
  inst.census_ = std::move(census);
  return inst;
}

double ExactInstance::partition(std::span<const double> lambda) const {
  return evaluate_partition(census_, lambda);
}

Complex ExactInstance::partition(std::span<const Complex> lambda) const {
  return evaluate_partition(census_, lambda, SumMode::Auto);
}

double ExactInstance::log_partition(std::span<const double> lambda) const {
  const double z = partition(lambda);
  if (!(z > 0.0)) throw std::domain_error("log of non-positive partition function");
  return std::log(z);
}

ClassDistribution ExactInstance::pmf(std::span<const double> lambda) const {
  return distribution_of(census_, lambda);
}

MomentSummary ExactInstance::moments(std::span<const double> lambda) const {
  return moments_of(pmf(lambda));
}

Complex ExactInstance::char_function(std::span<const double> lambda,
                                     std::span<const double> t) const {
  if (static_cast<int>(t.size()) != census_.q)
    throw std::invalid_argument("angle vector length must equal q");
  std::vector<Complex> rotated(census_.q);
  for (int c = 0; c < census_.q; ++c)
    rotated[c] = lambda[c] * std::polar(1.0, t[c]);
  const Complex zt = evaluate_partition(census_, rotated, SumMode::Auto);
  const double z = evaluate_partition(census_, lambda);
  if (!(z > 0.0)) throw std::domain_error("characteristic function of empty model");
  return zt / z;
}

Complex char_function(const Graph& g, int q, std::span<const double> lambda,
                      std::span<const double> t, const EnumOptions& opt) {
  return ExactInstance::build(g, q, opt).char_function(lambda, t);
}

}  // namespace chroma
