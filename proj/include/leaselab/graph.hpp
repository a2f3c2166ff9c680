#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "leaselab/error.hpp"
#include "leaselab/lease_model.hpp"

namespace leaselab {

using Edge = std::pair<NodeId, NodeId>;

inline Edge normalized(Edge e) {
  if (e.first > e.second) std::swap(e.first, e.second);
  return e;
}

/// Simple, undirected, connected graph with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;

  static Graph build(int n, std::span<const Edge> edges);

  int node_count() const noexcept { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const NodeId> neighbors(NodeId u) const { return adj_.at(static_cast<std::size_t>(u)); }
  int degree(NodeId u) const { return static_cast<int>(neighbors(u).size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool adjacent(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// u itself followed by its neighbors in ascending order.
  std::vector<NodeId> closed_neighborhood(NodeId u) const {
    std::vector<NodeId> out;
    out.reserve(neighbors(u).size() + 1);
    out.push_back(u);
    for (NodeId v : neighbors(u)) out.push_back(v);
    return out;
  }

  bool dominates(NodeId by, NodeId target) const { return by == target || adjacent(by, target); }

 private:
  std::vector<std::vector<NodeId>> adj_;
  std::vector<Edge> edges_;
};

inline Graph Graph::build(int n, std::span<const Edge> edges) {
  if (n < 1) throw Error(ErrorKind::BadParams, "graph needs at least one node");
  Graph g;
  g.adj_.assign(static_cast<std::size_t>(n), {});
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw Error(ErrorKind::BadNodeId, "edge (" + std::to_string(u) + "," + std::to_string(v) + ") outside [0," + std::to_string(n) + ")");
    if (u == v) throw Error(ErrorKind::SelfLoop, "self-loop at node " + std::to_string(u));
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
    g.edges_.push_back(normalized({u, v}));
  }
  for (auto& nb : g.adj_) {
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
      throw Error(ErrorKind::DuplicateEdge, "parallel edge at node " + std::to_string(&nb - g.adj_.data()));
  }
  std::sort(g.edges_.begin(), g.edges_.end());

  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : g.adj_[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
  }
  if (reached != n) throw Error(ErrorKind::Disconnected, std::to_string(n - reached) + " node(s) unreachable from node 0");
  return g;
}

inline int max_degree(const Graph& g) {
  int best = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) best = std::max(best, g.degree(u));
  return best;
}

/// All t-triplets over the closed neighborhood of `target`: (deg+1)*|L| entries,
/// ordered by node (target first, then neighbors ascending) then lease index.
struct DominatorSet {
  NodeId target = 0;
  Time time = 0;
  std::vector<Triplet> triplets;
};

inline DominatorSet dominators(const Graph& g, NodeId u, Time t, const LeaseCatalog& catalog) {
  DominatorSet ds{u, t, {}};
  ds.triplets.reserve((g.neighbors(u).size() + 1) * catalog.size());
  for (NodeId i : g.closed_neighborhood(u))
    for (const LeaseType& lt : catalog) ds.triplets.push_back(Triplet{i, lt.index, slot_start(t, lt)});
  return ds;
}

/// Hop distances from `source`.
inline std::vector<int> bfs_distances(const Graph& g, NodeId source) {
  std::vector<int> dist(static_cast<std::size_t>(g.node_count()), -1);
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : g.neighbors(u))
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
  }
  return dist;
}

/// All-pairs hop distances; fine for the graph sizes this library targets.
inline std::vector<std::vector<int>> all_pairs_distances(const Graph& g) {
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(g.node_count()));
  for (NodeId u = 0; u < g.node_count(); ++u) out.push_back(bfs_distances(g, u));
  return out;
}

inline int diameter(const Graph& g) {
  int best = 0;
  for (const auto& row : all_pairs_distances(g))
    for (int d : row) best = std::max(best, d);
  return best;
}

/// Minimum-hop path u..v. Among shortest paths the lexicographically smallest
/// node sequence is returned: at every step the smallest-id neighbor that is
/// one hop closer to v is taken.
inline std::vector<NodeId> shortest_path(const Graph& g, NodeId u, NodeId v) {
  const std::vector<int> to_target = bfs_distances(g, v);
  std::vector<NodeId> path{u};
  NodeId cur = u;
  while (cur != v) {
    for (NodeId next : g.neighbors(cur))
      if (to_target[next] == to_target[cur] - 1) {
        cur = next;
        break;
      }
    path.push_back(cur);
  }
  return path;
}

/// Connected components of the subgraph induced by nodes with `mask[node]` set.
/// Returns a component label per node (-1 for nodes outside the mask).
inline std::vector<int> induced_components(const Graph& g, const std::vector<char>& mask) {
  std::vector<int> label(static_cast<std::size_t>(g.node_count()), -1);
  int next = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (!mask[s] || label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : g.neighbors(u))
        if (mask[v] && label[v] < 0) {
          label[v] = next;
          stack.push_back(v);
        }
    }
    ++next;
  }
  return label;
}

}  // namespace leaselab
