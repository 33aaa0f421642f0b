#pragma once

#include <vector>

#include "chroma/coloring.hpp"
#include "chroma/graph.hpp"

namespace chroma {

// Result of a vertex-splitting surgery. The replaced vertex v disappears;
// surviving vertices are renumbered 0..n-2 preserving order, and the degree-1
// copies of v are appended at the end. old_to_new locates surviving vertices
// afterwards (-1 for v itself); copy_vertex[k] is the new index of the copy
// attached to the k-th neighbor in the ordering used, or -1 if that copy was
// deleted.
struct Surgery {
  Graph graph;
  PartialColoring pinning;
  std::vector<int> old_to_new;
  std::vector<int> copy_vertex;
};

// Replace v (unpinned, c good for v) by deg(v) copies, one per neighbor,
// each pinned to c. A degree-0 vertex is simply removed; its fugacity factor
// is the caller's bookkeeping.
Surgery pin_vertex(const Graph& g, const PartialColoring& tau, int v, int c);

// Interpolation graph between "pin v to color_i" and "pin v to color_j":
// copies v_1..v_d are attached to ordering[0..d-1]; copies 1..k-1 pinned to
// color_i, copies k+1..d pinned to color_j, copy k deleted. 1 <= k <= deg(v).
Surgery interpolation_graph(const Graph& g, const PartialColoring& tau, int v, int color_i,
                            int color_j, int k, const std::vector<int>& ordering);

}  // namespace chroma
