#pragma once

#include <vector>

#include "chroma/graph.hpp"

namespace chroma {

// Colors are 1..q; 0 marks an unpinned vertex in partial colorings.
inline constexpr int kUnpinned = 0;

using Coloring = std::vector<int>;  // total assignment, values in 1..q

struct PartialColoring {
  int q = 0;
  std::vector<int> color;  // per vertex: 1..q pinned, 0 unpinned

  int size() const { return static_cast<int>(color.size()); }
  bool pinned(int v) const { return color[v] != kUnpinned; }
  int unpinned_count() const;
};

PartialColoring empty_pinning(const Graph& g, int q);

// Proper on pinned pairs (both-pinned edge endpoints differ).
bool proper_on_pinned(const Graph& g, const PartialColoring& tau);
// Proper total coloring check.
bool proper(const Graph& g, const Coloring& sigma);

// True when c does not appear among v's pinned neighbors.
bool good_color(const Graph& g, const PartialColoring& tau, int v, int c);

// Full class-size vector (length q) of a total coloring.
std::vector<int> class_counts(const Coloring& sigma, int q);
// First q-1 coordinates (the last one is n - sum of the rest).
std::vector<int> truncate_counts(const std::vector<int>& counts);

}  // namespace chroma
