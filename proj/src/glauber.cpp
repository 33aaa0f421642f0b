#include "chroma/glauber.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "chroma/parallel.hpp"
#include "chroma/rng.hpp"

namespace chroma {

namespace {

// Neighbor colors are tracked in a 64-bit mask.
void check_color_count(int q) {
  if (q < 1 || q > 63) throw std::invalid_argument("chain dynamics supports 1 <= q <= 63");
}

void check_positive(std::span<const double> lambda) {
  for (double l : lambda)
    if (!(l > 0.0)) throw std::invalid_argument("chain dynamics needs positive fugacities");
}

}  // namespace

Coloring greedy_coloring(const Graph& g, int q) {
  check_color_count(q);
  Coloring sigma(g.n, 0);
  for (int v = 0; v < g.n; ++v) {
    std::vector<bool> used(q + 1, false);
    for (int w : g.adj[v])
      if (w < v) used[sigma[w]] = true;
    int c = 1;
    while (c <= q && used[c]) ++c;
    if (c > q) throw std::runtime_error("insufficient colors for greedy init");
    sigma[v] = c;
  }
  return sigma;
}

ChainState init_chain(const Graph& g, int q, std::uint64_t seed) {
  ChainState s;
  s.q = q;
  s.coloring = greedy_coloring(g, q);
  s.rng = make_rng(seed);
  return s;
}

namespace {

// Available colors at v (neighbor colors excluded) and their fugacities.
void available_colors(const Graph& g, const Coloring& sigma, int q, int v,
                      std::vector<int>& colors, std::vector<double>& weights,
                      std::span<const double> lambda) {
  std::uint64_t used = 0;
  for (int w : g.adj[v]) used |= std::uint64_t{1} << sigma[w];
  colors.clear();
  weights.clear();
  for (int c = 1; c <= q; ++c) {
    if (used & (std::uint64_t{1} << c)) continue;
    colors.push_back(c);
    weights.push_back(lambda[c - 1]);
  }
}

}  // namespace

void glauber_step(const Graph& g, std::span<const double> lambda, ChainState& state) {
  const int v = static_cast<int>(uniform_index(state.rng, static_cast<std::size_t>(g.n)));
  std::vector<int> colors;
  std::vector<double> weights;
  available_colors(g, state.coloring, state.q, v, colors, weights, lambda);
  if (colors.empty()) throw std::logic_error("empty color list under propriety invariant");
  state.coloring[v] = colors[weighted_index(state.rng, weights)];
  state.steps += 1;
}

Coloring glauber_run(const Graph& g, int q, std::span<const double> lambda, std::uint64_t steps,
                     std::uint64_t seed) {
  check_positive(lambda);
  ChainState s = init_chain(g, q, seed);
  for (std::uint64_t t = 0; t < steps; ++t) glauber_step(g, lambda, s);
  return s.coloring;
}

CouplingRecord coupled_step(const Graph& g, std::span<const double> lambda, Coloring& x,
                            Coloring& y, std::mt19937_64& rng) {
  const int q = static_cast<int>(lambda.size());
  check_color_count(q);
  CouplingRecord rec;
  int d_before = 0;
  for (int v = 0; v < g.n; ++v)
    if (x[v] != y[v]) ++d_before;
  rec.distance_before = d_before;

  const int v = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(g.n)));
  rec.vertex = v;

  const bool in_disagreement = x[v] != y[v];
  bool near_disagreement = false;
  for (int w : g.adj[v])
    if (x[w] != y[w]) near_disagreement = true;
  rec.move = in_disagreement ? MoveClass::Good
                             : (near_disagreement ? MoveClass::Bad : MoveClass::Fixing);

  std::vector<int> cx, cy;
  std::vector<double> wx, wy;
  available_colors(g, x, q, v, cx, wx, lambda);
  available_colors(g, y, q, v, cy, wy, lambda);

  if (cx == cy) {
    const int c = cx[weighted_index(rng, wx)];
    x[v] = c;
    y[v] = c;
  } else {
    // Color-by-color shared mass, then quantile-coupled residuals in
    // ascending color order.
    std::vector<double> px(q + 1, 0.0), py(q + 1, 0.0);
    double sx = 0.0, sy = 0.0;
    for (double w : wx) sx += w;
    for (double w : wy) sy += w;
    for (std::size_t k = 0; k < cx.size(); ++k) px[cx[k]] = wx[k] / sx;
    for (std::size_t k = 0; k < cy.size(); ++k) py[cy[k]] = wy[k] / sy;
    double shared = 0.0;
    for (int c = 1; c <= q; ++c) shared += std::min(px[c], py[c]);

    const double u = uniform01(rng);
    if (u < shared) {
      double acc = 0.0;
      for (int c = 1; c <= q; ++c) {
        acc += std::min(px[c], py[c]);
        if (u < acc || c == q) {
          x[v] = c;
          y[v] = c;
          break;
        }
      }
    } else {
      const double residual = u - shared;
      auto pick_residual = [&](const std::vector<double>& p, const std::vector<double>& other) {
        double acc = 0.0;
        int last = 0;
        for (int c = 1; c <= q; ++c) {
          const double r = p[c] - std::min(p[c], other[c]);
          if (r <= 0.0) continue;
          last = c;
          acc += r;
          if (residual < acc) return c;
        }
        return last;
      };
      x[v] = pick_residual(px, py);
      y[v] = pick_residual(py, px);
    }
  }

  int d_after = 0;
  for (int w = 0; w < g.n; ++w)
    if (x[w] != y[w]) ++d_after;
  rec.distance_after = d_after;
  return rec;
}

ContractionEstimate contraction_experiment(const Graph& g, int q, std::span<const double> lambda,
                                           std::size_t trials, std::uint64_t seed, int threads) {
  check_positive(lambda);
  struct Trial {
    double delta = 0.0;
    double after = 0.0;
  };
  std::vector<Trial> results(trials);
  const std::uint64_t burn = 20ULL * static_cast<std::uint64_t>(g.n);

  parallel_for_index(trials, threads, [&](std::size_t t) {
    ChainState chain;
    chain.q = q;
    chain.coloring = greedy_coloring(g, q);
    chain.rng = make_rng(seed, t);
    for (std::uint64_t b = 0; b < burn; ++b) glauber_step(g, lambda, chain);
    Coloring x = chain.coloring;
    Coloring y = x;

    std::vector<int> colors;
    std::vector<double> weights;
    std::vector<int> candidates;
    for (int v = 0; v < g.n; ++v) {
      available_colors(g, x, q, v, colors, weights, lambda);
      if (colors.size() >= 2) candidates.push_back(v);
    }
    if (!candidates.empty()) {
      const int v0 = candidates[uniform_index(chain.rng, candidates.size())];
      available_colors(g, x, q, v0, colors, weights, lambda);
      std::vector<int> alt_colors;
      std::vector<double> alt_weights;
      for (std::size_t k = 0; k < colors.size(); ++k) {
        if (colors[k] == x[v0]) continue;
        alt_colors.push_back(colors[k]);
        alt_weights.push_back(weights[k]);
      }
      y[v0] = alt_colors[weighted_index(chain.rng, alt_weights)];
    }

    const CouplingRecord rec = coupled_step(g, lambda, x, y, chain.rng);
    results[t].after = rec.distance_after;
    results[t].delta = rec.distance_after - rec.distance_before;
  });

  ContractionEstimate est;
  est.trials = trials;
  double sum_after = 0.0, sum_delta = 0.0, sum_sq = 0.0;
  for (const Trial& r : results) {
    sum_after += r.after;
    sum_delta += r.delta;
  }
  est.mean_distance_after = sum_after / static_cast<double>(trials);
  est.mean_delta = sum_delta / static_cast<double>(trials);
  for (const Trial& r : results) {
    const double d = r.delta - est.mean_delta;
    sum_sq += d * d;
  }
  if (trials > 1)
    est.std_error = std::sqrt(sum_sq / (static_cast<double>(trials) - 1.0)) /
                    std::sqrt(static_cast<double>(trials));
  return est;
}

TvEstimate tv_distance_experiment(const Graph& g, int q, std::span<const double> lambda,
                                  std::uint64_t t_steps, std::size_t n_samples,
                                  std::uint64_t seed, const EnumOptions& opt, int threads) {
  const ClassDistribution exact = exact_pmf(g, q, lambda, opt);
  std::vector<std::vector<int>> sampled(n_samples);
  parallel_for_index(n_samples, threads, [&](std::size_t i) {
    const Coloring sigma = glauber_run(g, q, lambda, t_steps, split_stream(seed, i));
    sampled[i] = truncate_counts(class_counts(sigma, q));
  });

  std::map<std::vector<int>, double> empirical;
  for (const auto& key : sampled) empirical[key] += 1.0 / static_cast<double>(n_samples);

  double tv = 0.0;
  std::size_t support = 0;
  for (std::size_t e = 0; e < exact.keys.size(); ++e) {
    const auto it = empirical.find(exact.keys[e]);
    const double emp = it == empirical.end() ? 0.0 : it->second;
    tv += std::abs(emp - exact.prob[e]);
    ++support;
    if (it != empirical.end()) empirical.erase(it);
  }
  for (const auto& [key, p] : empirical) {
    tv += p;  // empirical mass outside the exact support
    ++support;
  }

  TvEstimate est;
  est.tv = tv / 2.0;
  est.n_samples = n_samples;
  est.support = support;
  est.note = "plug-in TV on the class-vector pushforward; lower-bounds coloring-space TV";
  return est;
}

}  // namespace chroma
