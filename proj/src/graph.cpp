#include "netmark/graph.hpp"

#include <array>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netmark {

namespace {

std::string describe(const Edge& e, std::size_t position) {
  return "edge #" + std::to_string(position + 1) + " (" +
         std::to_string(e.src) + ", " + std::to_string(e.dst) +
         ", w=" + std::to_string(e.weight) + ")";
}

std::vector<std::vector<int>> adjacency(const GraphSpec& spec, bool reversed) {
  std::vector<std::vector<int>> adj(spec.n_nodes);
  for (const Edge& e : spec.edges) {
    if (reversed)
      adj[e.dst - 1].push_back(e.src - 1);
    else
      adj[e.src - 1].push_back(e.dst - 1);
  }
  return adj;
}

bool reaches_all(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == adj.size();
}

}  // namespace

void validate(const GraphSpec& spec) {
  if (spec.n_nodes <= 0)
    throw std::invalid_argument("graph: n_nodes must be positive");
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < spec.edges.size(); ++i) {
    const Edge& e = spec.edges[i];
    if (e.src < 1 || e.src > spec.n_nodes || e.dst < 1 ||
        e.dst > spec.n_nodes)
      throw std::invalid_argument("graph: node index out of range at " +
                                  describe(e, i));
    if (e.src == e.dst)
      throw std::invalid_argument("graph: self-loop at " + describe(e, i));
    if (!(e.weight > 0.0))
      throw std::invalid_argument("graph: non-positive weight at " +
                                  describe(e, i));
    if (!seen.insert({e.src, e.dst}).second)
      throw std::invalid_argument("graph: duplicate pair at " +
                                  describe(e, i));
  }
}

GraphSpec cascading_benchmark(int n_nodes) {
  if (n_nodes < 5 || n_nodes % 5 != 0)
    throw std::invalid_argument(
        "cascading_benchmark: n_nodes must be a positive multiple of 5, got " +
        std::to_string(n_nodes));

  static constexpr std::array<std::pair<int, int>, 8> kBlock = {
      {{1, 5}, {2, 1}, {2, 3}, {3, 1}, {3, 5}, {4, 1}, {5, 1}, {5, 2}}};

  GraphSpec spec;
  spec.n_nodes = n_nodes;
  spec.edges.reserve(8 * (n_nodes / 5) + 2 * (n_nodes - 5));
  for (int block = 0; block < n_nodes / 5; ++block) {
    const int offset = 5 * block;
    for (auto [a, b] : kBlock)
      spec.edges.push_back({a + offset, b + offset, 1.0});
  }
  for (int n = 1; n + 5 <= n_nodes; ++n) {
    spec.edges.push_back({n, n + 5, 1.0});
    spec.edges.push_back({n + 5, n, 4.0});
  }
  return spec;
}

bool is_strongly_connected(const GraphSpec& spec) {
  validate(spec);
  if (spec.n_nodes == 1) return true;
  return reaches_all(adjacency(spec, false), 0) &&
         reaches_all(adjacency(spec, true), 0);
}

bool is_weakly_connected(const GraphSpec& spec) {
  validate(spec);
  if (spec.n_nodes == 1) return true;
  auto adj = adjacency(spec, false);
  const auto rev = adjacency(spec, true);
  for (int u = 0; u < spec.n_nodes; ++u)
    adj[u].insert(adj[u].end(), rev[u].begin(), rev[u].end());
  return reaches_all(adj, 0);
}

}  // namespace netmark
