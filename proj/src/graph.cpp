#include "chroma/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>

#include "chroma/rng.hpp"

namespace chroma {

bool Graph::has_edge(int u, int v) const {
  const auto& a = adj[u];
  return std::binary_search(a.begin(), a.end(), v);
}

Graph make_graph(int n, std::vector<std::pair<int, int>> edge_list) {
  if (n < 0) throw std::invalid_argument("vertex count must be nonnegative");
  for (auto& [u, v] : edge_list) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop");
    if (u > v) std::swap(u, v);
  }
  std::sort(edge_list.begin(), edge_list.end());
  edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());

  Graph g;
  g.n = n;
  g.edges = std::move(edge_list);
  g.adj.assign(n, {});
  for (const auto& [u, v] : g.edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  g.max_degree = 0;
  for (const auto& a : g.adj) g.max_degree = std::max(g.max_degree, static_cast<int>(a.size()));
  return g;
}

Graph load_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next_line = [&](bool required) -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
    }
    if (required) throw ParseError("unexpected end of input after line " + std::to_string(line_no));
    return false;
  };

  next_line(true);
  std::istringstream head(line);
  long long n = -1, m = -1;
  std::string extra;
  if (!(head >> n >> m) || (head >> extra) || n < 0 || m < 0)
    throw ParseError("line " + std::to_string(line_no) + ": expected header \"n m\"");

  std::vector<std::pair<int, int>> edge_list;
  edge_list.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    next_line(true);
    std::istringstream es(line);
    long long u = -1, v = -1;
    if (!(es >> u >> v) || (es >> extra))
      throw ParseError("line " + std::to_string(line_no) + ": expected edge \"u v\"");
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw ParseError("line " + std::to_string(line_no) + ": vertex index out of range");
    if (u == v) throw ParseError("line " + std::to_string(line_no) + ": self-loop");
    edge_list.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  return make_graph(static_cast<int>(n), std::move(edge_list));
}

Graph load_graph_text(const std::string& text) {
  std::istringstream in(text);
  return load_graph(in);
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file: " + path);
  return load_graph(in);
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.n << ' ' << g.edges.size() << '\n';
  for (const auto& [u, v] : g.edges) out << u << ' ' << v << '\n';
  return out.str();
}

Graph cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return make_graph(n, std::move(e));
}

Graph path_graph(int n) {
  if (n < 1) throw std::invalid_argument("path needs n >= 1");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return make_graph(n, std::move(e));
}

Graph clique_graph(int k) {
  if (k < 1) throw std::invalid_argument("clique needs k >= 1");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) e.emplace_back(i, j);
  return make_graph(k, std::move(e));
}

Graph clique_union_graph(const std::vector<int>& sizes, int isolated) {
  if (isolated < 0) throw std::invalid_argument("isolated count must be nonnegative");
  int n = isolated;
  for (int s : sizes) {
    if (s < 1) throw std::invalid_argument("clique size must be positive");
    n += s;
  }
  std::vector<std::pair<int, int>> e;
  int base = 0;
  for (int s : sizes) {
    for (int i = 0; i < s; ++i)
      for (int j = i + 1; j < s; ++j) e.emplace_back(base + i, base + j);
    base += s;
  }
  return make_graph(n, std::move(e));
}

Graph petersen_graph() {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);          // outer cycle
    e.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
    e.emplace_back(i, 5 + i);                // spokes
  }
  return make_graph(10, std::move(e));
}

Graph random_regularish_graph(int n, int max_deg, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (max_deg < 0 || max_deg >= n)
    throw std::invalid_argument("random graph needs 0 <= max_deg < n");
  auto rng = make_rng(seed);
  std::vector<int> deg(n, 0);
  std::vector<std::pair<int, int>> e;
  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  const long long target = static_cast<long long>(n) * max_deg / 2;
  const long long attempts = 40LL * (target + 1);
  for (long long t = 0; t < attempts && static_cast<long long>(e.size()) < target; ++t) {
    int u = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
    int v = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
    if (u == v || present[u][v]) continue;
    if (deg[u] >= max_deg || deg[v] >= max_deg) continue;
    present[u][v] = present[v][u] = true;
    ++deg[u];
    ++deg[v];
    e.emplace_back(u, v);
  }
  return make_graph(n, std::move(e));
}

std::vector<int> bfs_distances(const Graph& g, int src) {
  std::vector<int> dist(g.n, -1);
  std::deque<int> queue;
  dist[src] = 0;
  queue.push_back(src);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int w : g.adj[u]) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

namespace {

bool connected(const Graph& g) {
  if (g.n == 0) return true;
  const auto d = bfs_distances(g, 0);
  return std::all_of(d.begin(), d.end(), [](int x) { return x >= 0; });
}

}  // namespace

bool is_cycle_graph(const Graph& g) {
  if (g.n < 3) return false;
  for (int v = 0; v < g.n; ++v)
    if (g.degree(v) != 2) return false;
  return connected(g);
}

bool is_path_graph(const Graph& g) {
  if (g.n == 1) return g.edges.empty();
  if (g.n < 1) return false;
  int ends = 0;
  for (int v = 0; v < g.n; ++v) {
    const int d = g.degree(v);
    if (d == 1)
      ++ends;
    else if (d != 2)
      return false;
  }
  return ends == 2 && connected(g);
}

std::vector<int> separation_set(const Graph& g) {
  std::vector<int> picked;
  std::vector<bool> removed(g.n, false);
  for (int v = 0; v < g.n; ++v) {
    if (removed[v]) continue;
    picked.push_back(v);
    // Remove everything within distance 3 of v (truncated BFS).
    std::deque<std::pair<int, int>> queue{{v, 0}};
    std::vector<bool> seen(g.n, false);
    seen[v] = true;
    while (!queue.empty()) {
      const auto [u, d] = queue.front();
      queue.pop_front();
      removed[u] = true;
      if (d == 3) continue;
      for (int w : g.adj[u]) {
        if (!seen[w]) {
          seen[w] = true;
          queue.emplace_back(w, d + 1);
        }
      }
    }
  }
  return picked;
}

}  // namespace chroma
