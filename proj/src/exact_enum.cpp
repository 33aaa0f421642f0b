#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "chroma/exact.hpp"
#include "chroma/pinning.hpp"

namespace chroma {

namespace {

constexpr int kMaxMaskColors = 30;

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

struct ComplexAccumulator {
  bool compensated = false;
  KahanSum re, im;
  double pre = 0.0, pim = 0.0;
  void add(Complex z) {
    if (compensated) {
      re.add(z.real());
      im.add(z.imag());
    } else {
      pre += z.real();
      pim += z.imag();
    }
  }
  Complex value() const { return compensated ? Complex(re.s, im.s) : Complex(pre, pim); }
};

struct EnumPlan {
  int q = 0;
  std::vector<int> order;                 // unpinned vertices, ascending index
  std::vector<std::vector<int>> earlier;  // per position: earlier unpinned neighbor positions
  std::vector<std::uint32_t> base_mask;   // per position: colors pinned in the neighborhood
  Complex pinned_weight{1.0, 0.0};
  std::vector<int> pinned_counts;  // class sizes contributed by pinned vertices
};

EnumPlan make_plan(const Graph& g, const PartialColoring& tau, std::span<const Complex> lambda,
                   const EnumOptions& opt) {
  const int q = tau.q;
  if (static_cast<int>(lambda.size()) != q)
    throw std::invalid_argument("fugacity vector length must equal q");
  if (q > kMaxMaskColors) throw std::invalid_argument("enumeration supports q <= 30");
  if (tau.size() != g.n) throw std::invalid_argument("pinning size mismatch");
  if (!proper_on_pinned(g, tau)) throw std::invalid_argument("pinning is not proper");

  EnumPlan plan;
  plan.q = q;
  plan.pinned_counts.assign(q, 0);
  std::vector<int> pos(g.n, -1);
  for (int v = 0; v < g.n; ++v) {
    if (tau.pinned(v)) {
      plan.pinned_weight *= lambda[tau.color[v] - 1];
      plan.pinned_counts[tau.color[v] - 1] += 1;
    } else {
      pos[v] = static_cast<int>(plan.order.size());
      plan.order.push_back(v);
    }
  }

  // Cap: q^unpinned states at worst (pruning only shrinks it).
  std::uint64_t states = 1;
  for (std::size_t i = 0; i < plan.order.size(); ++i) {
    if (states > opt.cap / static_cast<std::uint64_t>(q)) {
      throw EnumCapError("enumeration cap exceeded (q^" + std::to_string(plan.order.size()) +
                         " states); use the cycle/path DP or sampling");
    }
    states *= static_cast<std::uint64_t>(q);
  }

  plan.earlier.resize(plan.order.size());
  plan.base_mask.assign(plan.order.size(), 0);
  for (std::size_t p = 0; p < plan.order.size(); ++p) {
    const int v = plan.order[p];
    for (int w : g.adj[v]) {
      if (tau.pinned(w))
        plan.base_mask[p] |= 1u << (tau.color[w] - 1);
      else if (pos[w] >= 0 && pos[w] < static_cast<int>(p))
        plan.earlier[p].push_back(pos[w]);
    }
  }
  return plan;
}

bool use_compensation(const EnumOptions& opt, std::size_t unpinned) {
  switch (opt.sum) {
    case SumMode::Plain:
      return false;
    case SumMode::Compensated:
      return true;
    case SumMode::Auto:
    default:
      return unpinned > 20;
  }
}

// Sum of fugacity products over proper completions, split by the color of the
// tracked vertex (track < 0: only the total).
struct WeightedSums {
  Complex total;
  std::vector<Complex> by_color;
};

WeightedSums weighted_enumeration(const Graph& g, const PartialColoring& tau,
                                  std::span<const Complex> lambda, const EnumOptions& opt,
                                  int track) {
  const EnumPlan plan = make_plan(g, tau, lambda, opt);
  const int q = plan.q;
  const std::size_t depth = plan.order.size();
  const bool comp = use_compensation(opt, depth);

  int track_pos = -1;
  int track_pinned_color = 0;
  if (track >= 0) {
    if (track >= g.n) throw std::invalid_argument("tracked vertex out of range");
    if (tau.pinned(track)) {
      track_pinned_color = tau.color[track];
    } else {
      for (std::size_t p = 0; p < depth; ++p)
        if (plan.order[p] == track) track_pos = static_cast<int>(p);
    }
  }

  std::vector<ComplexAccumulator> buckets(track >= 0 ? q : 1);
  for (auto& b : buckets) b.compensated = comp;
  std::vector<int> assign(depth, 0);

  auto leaf = [&](Complex w) {
    if (track < 0)
      buckets[0].add(w);
    else if (track_pos >= 0)
      buckets[assign[track_pos] - 1].add(w);
    else
      buckets[track_pinned_color - 1].add(w);
  };

  auto dfs = [&](auto&& self, std::size_t p, Complex w) -> void {
    if (p == depth) {
      leaf(w);
      return;
    }
    std::uint32_t forbidden = plan.base_mask[p];
    for (int e : plan.earlier[p]) forbidden |= 1u << (assign[e] - 1);
    for (int c = 1; c <= q; ++c) {
      if (forbidden & (1u << (c - 1))) continue;
      assign[p] = c;
      self(self, p + 1, w * lambda[c - 1]);
    }
  };
  dfs(dfs, 0, plan.pinned_weight);

  WeightedSums out;
  if (track < 0) {
    out.total = buckets[0].value();
  } else {
    out.by_color.resize(q);
    ComplexAccumulator tot;
    tot.compensated = comp;
    for (int c = 0; c < q; ++c) {
      out.by_color[c] = buckets[c].value();
      tot.add(out.by_color[c]);
    }
    out.total = tot.value();
  }
  return out;
}

std::vector<Complex> to_complex(std::span<const double> lambda) {
  return std::vector<Complex>(lambda.begin(), lambda.end());
}

}  // namespace

Complex partition_function(const Graph& g, const PartialColoring& tau,
                           std::span<const Complex> lambda, const EnumOptions& opt) {
  return weighted_enumeration(g, tau, lambda, opt, -1).total;
}

double partition_function(const Graph& g, const PartialColoring& tau,
                          std::span<const double> lambda, const EnumOptions& opt) {
  return partition_function(g, tau, std::span<const Complex>(to_complex(lambda)), opt).real();
}

std::vector<Complex> restricted_partition_all(const Graph& g, const PartialColoring& tau, int v,
                                              std::span<const Complex> lambda,
                                              const EnumOptions& opt) {
  if (v < 0 || v >= g.n) throw std::invalid_argument("vertex out of range");
  return weighted_enumeration(g, tau, lambda, opt, v).by_color;
}

Complex restricted_partition(const Graph& g, const PartialColoring& tau, int v, int i,
                             std::span<const Complex> lambda, const EnumOptions& opt) {
  if (tau.pinned(v)) throw std::invalid_argument("restricted partition needs v unpinned");
  if (i < 1 || i > tau.q) throw std::invalid_argument("color out of range");
  return restricted_partition_all(g, tau, v, lambda, opt)[i - 1];
}

Complex marginal_ratio(const Graph& g, const PartialColoring& tau, int v, int i, int j,
                       std::span<const Complex> lambda, const EnumOptions& opt) {
  if (tau.pinned(v)) throw std::invalid_argument("marginal ratio needs v unpinned");
  if (!good_color(g, tau, v, j)) throw std::invalid_argument("j must be a good color for v");
  const auto by_color = restricted_partition_all(g, tau, v, lambda, opt);
  Complex z{0.0, 0.0};
  for (const auto& b : by_color) z += b;
  const Complex zj = by_color[j - 1];
  if (std::abs(zj) < 1e-30 * std::abs(z))
    throw IllDefinedTermError("denominator", "marginal ratio denominator Z^(j) numerically zero");
  return by_color[i - 1] / zj;
}

double verify_recurrence(const Graph& g, const PartialColoring& tau, int v, int i, int j,
                         std::span<const Complex> lambda, const std::vector<int>& ordering,
                         const EnumOptions& opt) {
  if (tau.pinned(v)) throw std::invalid_argument("recurrence needs v unpinned");
  if (!good_color(g, tau, v, i) || !good_color(g, tau, v, j))
    throw std::invalid_argument("i and j must be good colors for v");

  const Complex lhs = marginal_ratio(g, tau, v, i, j, lambda, opt);

  Complex rhs = lambda[i - 1] / lambda[j - 1];
  const int d = g.degree(v);
  for (int k = 1; k <= d; ++k) {
    const Surgery s = interpolation_graph(g, tau, v, i, j, k, ordering);
    const int wk = s.old_to_new[ordering[k - 1]];
    const auto by_color = restricted_partition_all(s.graph, s.pinning, wk, lambda, opt);
    Complex zk{0.0, 0.0};
    double mass = 0.0;
    for (const auto& b : by_color) {
      zk += b;
      mass += std::abs(b);
    }
    if (std::abs(zk) <= 1e-30 * mass)
      throw IllDefinedTermError(
          "partition", "Z of interpolation graph k=" + std::to_string(k) + " numerically zero");
    const Complex pi = by_color[i - 1] / zk;
    const Complex pj = by_color[j - 1] / zk;
    if (std::abs(Complex(1.0, 0.0) - pj) <= 1e-12)
      throw IllDefinedTermError(
          "pseudo-probability",
          "pseudo-probability of color j equals 1 at interpolation graph k=" + std::to_string(k));
    rhs *= (Complex(1.0, 0.0) - pi) / (Complex(1.0, 0.0) - pj);
  }
  return std::abs(lhs - rhs);
}

// --------------------------------------------------------------------------
// Census by class-count vector.
// --------------------------------------------------------------------------

namespace {

ClassCensus census_from_map(int n, int q, const std::map<std::vector<int>, double>& acc) {
  ClassCensus out;
  out.n = n;
  out.q = q;
  out.counts.reserve(acc.size());
  out.colorings.reserve(acc.size());
  for (const auto& [key, w] : acc) {
    if (w <= 0.0) continue;
    out.counts.push_back(key);
    out.colorings.push_back(w);
  }
  return out;
}

}  // namespace

double ClassCensus::total_colorings() const {
  double t = 0.0;
  for (double w : colorings) t += w;
  return t;
}

ClassCensus class_census(const Graph& g, const PartialColoring& tau, const EnumOptions& opt) {
  const std::vector<Complex> ones(tau.q, Complex(1.0, 0.0));
  const EnumPlan plan = make_plan(g, tau, std::span<const Complex>(ones), opt);
  const int q = plan.q;
  const std::size_t depth = plan.order.size();

  // Packed u64 keys cover every desk instance; the map fallback keeps larger
  // q correct.
  const bool packable = q <= 8 && g.n <= 255;
  std::unordered_map<std::uint64_t, double> packed;
  std::map<std::vector<int>, double> generic;
  std::vector<int> counts = plan.pinned_counts;
  std::vector<int> assign(depth, 0);

  auto leaf = [&]() {
    if (packable) {
      std::uint64_t key = 0;
      for (int c = 0; c < q; ++c) key |= static_cast<std::uint64_t>(counts[c]) << (8 * c);
      packed[key] += 1.0;
    } else {
      generic[counts] += 1.0;
    }
  };

  auto dfs = [&](auto&& self, std::size_t p) -> void {
    if (p == depth) {
      leaf();
      return;
    }
    std::uint32_t forbidden = plan.base_mask[p];
    for (int e : plan.earlier[p]) forbidden |= 1u << (assign[e] - 1);
    for (int c = 1; c <= q; ++c) {
      if (forbidden & (1u << (c - 1))) continue;
      assign[p] = c;
      counts[c - 1] += 1;
      self(self, p + 1);
      counts[c - 1] -= 1;
    }
  };
  dfs(dfs, 0);

  if (packable) {
    std::map<std::vector<int>, double> ordered;
    std::vector<int> key(q, 0);
    for (const auto& [k, w] : packed) {
      for (int c = 0; c < q; ++c) key[c] = static_cast<int>((k >> (8 * c)) & 0xff);
      ordered[key] = w;
    }
    return census_from_map(g.n, q, ordered);
  }
  return census_from_map(g.n, q, generic);
}

ClassCensus class_census(const Graph& g, int q, const EnumOptions& opt) {
  return class_census(g, empty_pinning(g, q), opt);
}

}  // namespace chroma
