#pragma once

// Deterministic primal-dual online dominating set leasing.
//
// Each request occurrence u@t owns a dual Y. When u has no purchased active
// dominator, Y rises until the first dominator constraint goes tight; it is
// computed directly as the minimum slack over the dominators. Every tight
// dominator is bought.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "leaselab/instance.hpp"

namespace leaselab {

struct Occurrence {
  NodeId node = 0;
  Time t = 0;
  auto operator<=>(const Occurrence&) const = default;
};

struct DualServe {
  std::vector<Triplet> purchases;
  Cost dual = 0;
};

class DualState {
 public:
  DualState(Graph g, LeaseCatalog catalog) : graph_(std::move(g)), catalog_(std::move(catalog)) { catalog_.validate(); }

  const Graph& graph() const noexcept { return graph_; }
  const LeaseCatalog& catalog() const noexcept { return catalog_; }
  const PurchaseLedger& ledger() const noexcept { return ledger_; }
  const std::map<Occurrence, Cost>& duals() const noexcept { return duals_; }

  /// c_l minus the duals of every occurrence whose dominator set holds `tr`.
  Cost slack(const Triplet& tr) const {
    auto it = slack_.find(tr);
    return it == slack_.end() ? catalog_[tr.lease].cost : it->second;
  }

  /// Slack of every triplet touched so far.
  const std::map<Triplet, Cost>& slacks() const noexcept { return slack_; }

  DualServe serve(NodeId u, Time t) {
    if (last_ && t < *last_)
      throw Error(ErrorKind::NonMonotonicTime, "request at " + std::to_string(t) + " after " + std::to_string(*last_));
    if (u < 0 || u >= graph_.node_count()) throw Error(ErrorKind::BadNodeId, "request node " + std::to_string(u));
    last_ = t;
    DualServe out;
    const auto ws = dominators(graph_, u, t, catalog_).triplets;
    duals_.try_emplace(Occurrence{u, t}, Cost(0));
    for (const Triplet& tr : ws)
      if (ledger_.contains(tr)) return out;

    Cost y = slack(ws.front());
    for (const Triplet& tr : ws) y = std::min(y, slack(tr));
    for (const Triplet& tr : ws) {
      const Cost s = slack(tr) - y;
      slack_[tr] = s;
      if (s == Cost(0) && ledger_.add(tr, t, catalog_)) out.purchases.push_back(tr);
    }
    duals_[Occurrence{u, t}] += y;
    out.dual = y;
    return out;
  }

  Cost primal_cost() const { return ledger_.total_cost(); }

  Cost dual_value() const {
    Cost total = 0;
    for (const auto& [occ, y] : duals_) total += y;
    return total;
  }

 private:
  Graph graph_;
  LeaseCatalog catalog_;
  PurchaseLedger ledger_;
  std::map<Triplet, Cost> slack_;
  std::map<Occurrence, Cost> duals_;
  std::optional<Time> last_;
};

inline DualServe pd_serve(DualState& st, NodeId u, Time t) { return st.serve(u, t); }

struct PrimalDualTotals {
  Cost primal = 0;
  Cost dual = 0;
};

inline PrimalDualTotals pd_totals(const DualState& st) { return {st.primal_cost(), st.dual_value()}; }

}  // namespace leaselab
