#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chroma {

// Immutable simple graph: sorted adjacency lists, cached maximum degree.
// Vertices are 0-indexed.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // each with first < second, sorted
  std::vector<std::vector<int>> adj;       // per-vertex sorted neighbor list
  int max_degree = 0;

  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  bool has_edge(int u, int v) const;
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Builds a Graph from an edge set; rejects self-loops and out-of-range
// endpoints, collapses duplicates.
Graph make_graph(int n, std::vector<std::pair<int, int>> edge_list);

// Edge-list text format: first line "n m", then m lines "u v".
// Errors carry the offending 1-based line number.
Graph load_graph(std::istream& in);
Graph load_graph_text(const std::string& text);
Graph load_graph_file(const std::string& path);
std::string to_edge_list(const Graph& g);

// Generators. All are deterministic given their arguments.
Graph cycle_graph(int n);                 // n >= 3
Graph path_graph(int n);                  // n >= 1
Graph clique_graph(int k);                // k >= 1
Graph clique_union_graph(const std::vector<int>& sizes, int isolated);
Graph petersen_graph();
// Random graph with max degree <= max_deg: repeated edge proposals, rejecting
// any that would exceed max_deg. Requires max_deg < n.
Graph random_regularish_graph(int n, int max_deg, std::uint64_t seed);

// BFS distances from src; unreachable = -1.
std::vector<int> bfs_distances(const Graph& g, int src);

bool is_cycle_graph(const Graph& g);
bool is_path_graph(const Graph& g);

// Greedy vertex set with pairwise distance >= 4 (lowest-index first).
// Size is at least ceil(n / (1 + D + D^2 + D^3)) for max degree D >= 1.
std::vector<int> separation_set(const Graph& g);

}  // namespace chroma
