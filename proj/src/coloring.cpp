#include "chroma/coloring.hpp"

#include <algorithm>
#include <stdexcept>

namespace chroma {

int PartialColoring::unpinned_count() const {
  return static_cast<int>(std::count(color.begin(), color.end(), kUnpinned));
}

PartialColoring empty_pinning(const Graph& g, int q) {
  if (q < 1) throw std::invalid_argument("q must be positive");
  return PartialColoring{q, std::vector<int>(g.n, kUnpinned)};
}

bool proper_on_pinned(const Graph& g, const PartialColoring& tau) {
  for (const auto& [u, v] : g.edges)
    if (tau.pinned(u) && tau.color[u] == tau.color[v]) return false;
  return true;
}

bool proper(const Graph& g, const Coloring& sigma) {
  for (const auto& [u, v] : g.edges)
    if (sigma[u] == sigma[v]) return false;
  return true;
}

bool good_color(const Graph& g, const PartialColoring& tau, int v, int c) {
  for (int w : g.adj[v])
    if (tau.color[w] == c) return false;
  return true;
}

std::vector<int> class_counts(const Coloring& sigma, int q) {
  std::vector<int> counts(q, 0);
  for (int c : sigma) counts[c - 1] += 1;
  return counts;
}

std::vector<int> truncate_counts(const std::vector<int>& counts) {
  return std::vector<int>(counts.begin(), counts.end() - 1);
}

}  // namespace chroma
