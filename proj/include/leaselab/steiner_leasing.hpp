#pragma once

// Edge-weighted online Steiner forest leasing on a random HST: each HST edge
// runs its own parking-permit instance, and every permit it fires is realized
// as leases on the graph edges of a shortest path between the edge's centers.

#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "leaselab/graph.hpp"
#include "leaselab/metric_embedding.hpp"
#include "leaselab/parking_permit.hpp"

namespace leaselab {

struct EdgeLease {
  Edge edge;
  int lease = 1;
  Time start = 0;
  Time step = 0;  // time of the request that fired it
  Cost cost = 0;
};

/// One permit bought by an HST edge's parking-permit instance.
struct TreePermitPurchase {
  int hst_edge = 0;  // child cluster id
  Permit permit;
  Time step = 0;
};

class OsflState {
 public:
  OsflState() = default;
  OsflState(Graph g, LeaseCatalog catalog, Hst hst)
      : graph_(std::move(g)), catalog_(std::move(catalog)), hst_(std::move(hst)) {}

  const Graph& graph() const noexcept { return graph_; }
  const Hst& hst() const noexcept { return hst_; }
  const LeaseCatalog& catalog() const noexcept { return catalog_; }
  const std::vector<EdgeLease>& ledger() const noexcept { return ledger_; }
  const std::vector<TreePermitPurchase>& tree_purchases() const noexcept { return tree_purchases_; }
  const std::map<int, PermitState>& edge_permits() const noexcept { return edge_permits_; }

  /// Cost of the tree-side solution: each fired permit charged length * c_l.
  Cost tree_cost() const noexcept { return tree_cost_; }

  std::vector<EdgeLease> connect(const std::vector<NodeId>& terminals, NodeId root, Time t);

  /// Graph edges holding a lease whose window contains t.
  std::vector<Edge> active_edges(Time t) const {
    std::set<Edge> out;
    for (const EdgeLease& e : ledger_)
      if (e.start <= t && t < e.start + catalog_[e.lease].duration) out.insert(normalized(e.edge));
    return {out.begin(), out.end()};
  }

 private:
  Graph graph_;
  LeaseCatalog catalog_;
  Hst hst_;
  std::map<int, PermitState> edge_permits_;
  std::vector<EdgeLease> ledger_;
  std::set<std::tuple<Edge, int, Time>> leased_keys_;
  std::vector<TreePermitPurchase> tree_purchases_;
  Cost tree_cost_ = 0;
  std::optional<Time> last_;
};

inline OsflState osfl_init(const Graph& g, const LeaseCatalog& catalog, std::mt19937_64& rng) {
  return OsflState(g, catalog, build_hst(g, rng));
}

inline std::vector<EdgeLease> OsflState::connect(const std::vector<NodeId>& terminals, NodeId root, Time t) {
  if (last_ && t < *last_)
    throw Error(ErrorKind::NonMonotonicTime, "connect at " + std::to_string(t) + " after " + std::to_string(*last_));
  last_ = t;

  std::set<int> required;
  for (NodeId r : terminals)
    for (int e : hst_.path_edges(r, root)) required.insert(e);

  std::vector<EdgeLease> fresh;
  for (int e : required) {
    auto it = edge_permits_.try_emplace(e, catalog_).first;
    const std::vector<Permit> fired = it->second.request(t);
    if (fired.empty()) continue;
    const HstCluster& child = hst_.cluster(e);
    const auto walk = shortest_path(graph_, child.center, hst_.cluster(child.parent).center);
    for (const Permit& p : fired) {
      tree_purchases_.push_back(TreePermitPurchase{e, p, t});
      tree_cost_ += catalog_[p.lease].cost * Cost(hst_.edge_length(e));
      for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
        const Edge ge = normalized({walk[i], walk[i + 1]});
        if (!leased_keys_.emplace(ge, p.lease, p.start).second) continue;
        EdgeLease lease{ge, p.lease, p.start, t, catalog_[p.lease].cost};
        ledger_.push_back(lease);
        fresh.push_back(lease);
      }
    }
  }
  return fresh;
}

inline std::vector<EdgeLease> osfl_connect(OsflState& st, const std::vector<NodeId>& terminals, NodeId root, Time t) {
  return st.connect(terminals, root, t);
}

inline Cost osfl_cost(const OsflState& st) {
  Cost total = 0;
  for (const EdgeLease& e : st.ledger()) total += e.cost;
  return total;
}

}  // namespace leaselab
