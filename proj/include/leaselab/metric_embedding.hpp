#pragma once

// Random hierarchically well-separated tree over the unit-weight graph metric.
//
// Levels run from 0 (singleton leaves) to delta + 1 (the root, cluster = V),
// delta = ceil(log2(diameter)). A level-i cluster is cut out of its parent by
// scanning a random permutation of V and grabbing every still-unassigned member
// within distance beta * 2^(i-1) of the scanned node, which becomes its center.
// The edge from a level-i cluster to its parent has length 2^i.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "leaselab/graph.hpp"

namespace leaselab {

struct HstCluster {
  NodeId center = 0;
  int level = 0;
  int parent = -1;
  std::vector<NodeId> members;
  std::vector<int> children;
};

class Hst {
 public:
  int delta() const noexcept { return delta_; }
  int root() const noexcept { return root_; }
  int root_level() const noexcept { return clusters_[root_].level; }
  double beta() const noexcept { return beta_; }
  const std::vector<NodeId>& permutation() const noexcept { return permutation_; }
  const std::vector<HstCluster>& clusters() const noexcept { return clusters_; }
  const HstCluster& cluster(int id) const { return clusters_.at(static_cast<std::size_t>(id)); }
  int leaf(NodeId u) const { return leaf_of_.at(static_cast<std::size_t>(u)); }

  /// Length of the edge from cluster `id` to its parent.
  std::int64_t edge_length(int id) const { return std::int64_t{1} << cluster(id).level; }

  /// Cluster ids on the tree path leaf(u) -> leaf(v), both ends included.
  std::vector<int> path(NodeId u, NodeId v) const {
    std::vector<int> up{leaf(u)};
    std::vector<int> down{leaf(v)};
    while (up.back() != down.back()) {
      up.push_back(cluster(up.back()).parent);
      down.push_back(cluster(down.back()).parent);
    }
    down.pop_back();
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
  }

  /// HST edges (named by their child cluster) on the tree path u -> v.
  std::vector<int> path_edges(NodeId u, NodeId v) const {
    std::vector<int> out;
    int a = leaf(u), b = leaf(v);
    while (a != b) {
      out.push_back(a);
      out.push_back(b);
      a = cluster(a).parent;
      b = cluster(b).parent;
    }
    return out;
  }

  void dump(std::ostream& os) const { dump(os, root_, 0); }

 private:
  friend Hst build_hst(const Graph& g, std::mt19937_64& rng);

  void dump(std::ostream& os, int id, int depth) const {
    const HstCluster& c = cluster(id);
    os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "level " << c.level << " center " << c.center << " {";
    for (std::size_t i = 0; i < c.members.size(); ++i) os << (i ? " " : "") << c.members[i];
    os << "}\n";
    for (int ch : c.children) dump(os, ch, depth + 1);
  }

  int delta_ = 0;
  int root_ = 0;
  double beta_ = 1.0;
  std::vector<NodeId> permutation_;
  std::vector<HstCluster> clusters_;
  std::vector<int> leaf_of_;
};

inline int ceil_log2(std::int64_t x) {
  int k = 0;
  while ((std::int64_t{1} << k) < x) ++k;
  return k;
}

/// Deterministic given the generator state.
inline Hst build_hst(const Graph& g, std::mt19937_64& rng) {
  const int n = g.node_count();
  Hst h;
  h.permutation_.resize(static_cast<std::size_t>(n));
  std::iota(h.permutation_.begin(), h.permutation_.end(), 0);
  std::shuffle(h.permutation_.begin(), h.permutation_.end(), rng);
  h.beta_ = std::uniform_real_distribution<double>(1.0, 2.0)(rng);
  h.leaf_of_.assign(static_cast<std::size_t>(n), -1);

  std::vector<NodeId> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  if (n == 1) {
    h.clusters_.push_back(HstCluster{0, 0, -1, all, {}});
    h.leaf_of_[0] = 0;
    return h;
  }

  const auto dist = all_pairs_distances(g);
  h.delta_ = ceil_log2(diameter(g));
  h.clusters_.push_back(HstCluster{h.permutation_.front(), h.delta_ + 1, -1, all, {}});
  h.root_ = 0;

  std::vector<int> frontier{h.root_};
  for (int level = h.delta_; level >= 0; --level) {
    const double radius = h.beta_ * std::ldexp(1.0, level - 1);
    std::vector<int> next;
    for (int parent : frontier) {
      std::vector<NodeId> remaining = h.clusters_[parent].members;
      for (NodeId center : h.permutation_) {
        if (remaining.empty()) break;
        std::vector<NodeId> taken;
        std::erase_if(remaining, [&](NodeId x) {
          if (dist[center][x] > radius) return false;
          taken.push_back(x);
          return true;
        });
        if (taken.empty()) continue;
        std::sort(taken.begin(), taken.end());
        const int id = static_cast<int>(h.clusters_.size());
        h.clusters_.push_back(HstCluster{center, level, parent, std::move(taken), {}});
        h.clusters_[parent].children.push_back(id);
        next.push_back(id);
      }
    }
    frontier = std::move(next);
  }
  for (int id : frontier) {
    const HstCluster& c = h.clusters_[id];
    h.leaf_of_[c.members.front()] = id;
  }
  return h;
}

inline Hst build_hst(const Graph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return build_hst(g, rng);
}

inline std::int64_t tree_distance(const Hst& h, NodeId u, NodeId v) {
  std::int64_t total = 0;
  int a = h.leaf(u), b = h.leaf(v);
  while (a != b) {
    total += 2 * h.edge_length(a);
    a = h.cluster(a).parent;
    b = h.cluster(b).parent;
  }
  return total;
}

/// Graph walk u -> v obtained by joining shortest paths between the centers of
/// consecutive clusters on the tree path. Edges are oriented along the walk.
inline std::vector<Edge> realize_tree_path(const Hst& h, NodeId u, NodeId v, const Graph& g) {
  std::vector<Edge> walk;
  NodeId at = u;
  auto extend_to = [&](NodeId target) {
    if (target == at) return;
    const auto seg = shortest_path(g, at, target);
    for (std::size_t i = 0; i + 1 < seg.size(); ++i) walk.emplace_back(seg[i], seg[i + 1]);
    at = target;
  };
  for (int id : h.path(u, v)) extend_to(h.cluster(id).center);
  extend_to(v);
  return walk;
}

}  // namespace leaselab
