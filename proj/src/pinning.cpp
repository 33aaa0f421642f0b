#include "chroma/pinning.hpp"

#include <algorithm>
#include <stdexcept>

namespace chroma {

namespace {

// Core splitting surgery: replace v by one copy per entry of `ordering`;
// copy_color[k] = 0 keeps the copy unpinned, -1 deletes it, otherwise pins it.
Surgery split_vertex(const Graph& g, const PartialColoring& tau, int v,
                     const std::vector<int>& ordering, const std::vector<int>& copy_color) {
  const int n = g.n;
  Surgery out;
  out.old_to_new.assign(n, -1);
  int next = 0;
  for (int u = 0; u < n; ++u)
    if (u != v) out.old_to_new[u] = next++;

  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edges.size());
  for (const auto& [a, b] : g.edges)
    if (a != v && b != v) edges.emplace_back(out.old_to_new[a], out.old_to_new[b]);

  std::vector<int> colors;
  colors.reserve(n - 1 + ordering.size());
  for (int u = 0; u < n; ++u)
    if (u != v) colors.push_back(tau.color[u]);

  out.copy_vertex.assign(ordering.size(), -1);
  for (std::size_t k = 0; k < ordering.size(); ++k) {
    if (copy_color[k] < 0) continue;
    const int copy = next++;
    out.copy_vertex[k] = copy;
    edges.emplace_back(out.old_to_new[ordering[k]], copy);
    colors.push_back(copy_color[k]);
  }
  out.graph = make_graph(next, std::move(edges));
  out.pinning = PartialColoring{tau.q, std::move(colors)};
  return out;
}

void check_surgery_args(const Graph& g, const PartialColoring& tau, int v, int c) {
  if (v < 0 || v >= g.n) throw std::invalid_argument("vertex out of range");
  if (tau.pinned(v)) throw std::invalid_argument("vertex already pinned");
  if (c < 1 || c > tau.q) throw std::invalid_argument("color out of range");
  if (!good_color(g, tau, v, c)) throw std::invalid_argument("bad color for vertex");
}

}  // namespace

Surgery pin_vertex(const Graph& g, const PartialColoring& tau, int v, int c) {
  check_surgery_args(g, tau, v, c);
  const std::vector<int>& ordering = g.adj[v];
  std::vector<int> copy_color(ordering.size(), c);
  return split_vertex(g, tau, v, ordering, copy_color);
}

Surgery interpolation_graph(const Graph& g, const PartialColoring& tau, int v, int color_i,
                            int color_j, int k, const std::vector<int>& ordering) {
  check_surgery_args(g, tau, v, color_i);
  check_surgery_args(g, tau, v, color_j);
  const int d = g.degree(v);
  if (k < 1 || k > d) throw std::invalid_argument("k must be in 1..deg(v)");
  std::vector<int> sorted = ordering;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != g.adj[v]) throw std::invalid_argument("ordering must permute N(v)");

  std::vector<int> copy_color(ordering.size());
  for (int idx = 0; idx < d; ++idx) {
    if (idx < k - 1)
      copy_color[idx] = color_i;
    else if (idx == k - 1)
      copy_color[idx] = -1;  // deleted copy
    else
      copy_color[idx] = color_j;
  }
  return split_vertex(g, tau, v, ordering, copy_color);
}

}  // namespace chroma
