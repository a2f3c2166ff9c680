#pragma once

// Feasibility checks and exact offline optima at desk scale.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "leaselab/instance.hpp"

namespace leaselab {

enum class CoverMode {
  Connected,       // connected dominating set leasing
  DominationOnly,  // dominating set leasing
};

struct FeasibleStep {
  bool ok = false;
  std::vector<NodeId> witness;  // the dominating component (Connected) or active dominators
};

/// True iff some connected component of the subgraph induced by the active
/// nodes dominates every node of `targets`. Any connected dominating subset
/// lives inside one component, and that whole component dominates too.
inline FeasibleStep check_feasible_step(const Graph& g, const std::vector<char>& active, const std::vector<NodeId>& targets) {
  const auto label = induced_components(g, active);
  const int components = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  if (targets.empty()) return {true, {}};
  for (int c = 0; c < components; ++c) {
    bool all = true;
    for (NodeId u : targets) {
      bool hit = label[u] == c;
      for (NodeId v : g.neighbors(u)) hit = hit || label[v] == c;
      if (!hit) {
        all = false;
        break;
      }
    }
    if (!all) continue;
    FeasibleStep out{true, {}};
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (label[v] == c) out.witness.push_back(v);
    return out;
  }
  return {false, {}};
}

inline bool check_dominated_step(const Graph& g, const std::vector<char>& active, const std::vector<NodeId>& targets) {
  for (NodeId u : targets) {
    bool hit = active[u] != 0;
    for (NodeId v : g.neighbors(u)) hit = hit || active[v];
    if (!hit) return false;
  }
  return true;
}

inline bool check_solution(const Instance& inst, const PurchaseLedger& ledger, CoverMode mode = CoverMode::Connected) {
  for (const Request& r : inst.requests) {
    const auto active = ledger.active_nodes(inst.graph, inst.catalog, r.t);
    const bool ok = mode == CoverMode::Connected ? check_feasible_step(inst.graph, active, r.nodes).ok
                                                 : check_dominated_step(inst.graph, active, r.nodes);
    if (!ok) return false;
  }
  return true;
}

/// Every triplet whose window contains some request time: n nodes times the
/// distinct (lease, slot) pairs touched by the requests. Ordered by node,
/// lease, start.
inline std::vector<Triplet> candidate_triplets(const Instance& inst) {
  std::set<std::pair<int, Time>> slots;
  for (const Request& r : inst.requests)
    for (const LeaseType& lt : inst.catalog) slots.emplace(lt.index, slot_start(r.t, lt));
  std::vector<Triplet> out;
  for (NodeId i = 0; i < inst.graph.node_count(); ++i)
    for (auto [l, s] : slots) out.push_back(Triplet{i, l, s});
  return out;
}

inline constexpr std::size_t kOracleUniverseCap = 24;

struct OfflineSolution {
  Cost cost = 0;
  PurchaseLedger ledger;
};

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, CoverMode mode) : inst_(inst), mode_(mode) {
    cands_ = candidate_triplets(inst);
    if (cands_.size() > kOracleUniverseCap)
      throw Error(ErrorKind::TooLarge, "candidate universe " + std::to_string(cands_.size()) + " exceeds " +
                                           std::to_string(kOracleUniverseCap));
    // Expensive triplets first so cost pruning bites early.
    std::stable_sort(cands_.begin(), cands_.end(), [&](const Triplet& a, const Triplet& b) {
      return inst.catalog[a.lease].cost > inst.catalog[b.lease].cost;
    });
    const int n = inst.graph.node_count();
    node_masks_.assign(inst.requests.size(), std::vector<std::uint32_t>(static_cast<std::size_t>(n), 0));
    for (std::size_t r = 0; r < inst.requests.size(); ++r)
      for (std::size_t k = 0; k < cands_.size(); ++k)
        if (is_active(cands_[k], inst.catalog, inst.requests[r].t)) node_masks_[r][cands_[k].node] |= std::uint32_t{1} << k;
    suffix_.assign(cands_.size() + 1, 0);
    for (std::size_t k = cands_.size(); k-- > 0;) suffix_[k] = suffix_[k + 1] | (std::uint32_t{1} << k);
  }

  OfflineSolution solve() {
    best_mask_ = suffix_[0];
    best_cost_ = cost_of(best_mask_);
    search(0, 0, 0);
    OfflineSolution out{best_cost_, {}};
    std::vector<Triplet> chosen;
    for (std::size_t k = 0; k < cands_.size(); ++k)
      if (best_mask_ >> k & 1U) chosen.push_back(cands_[k]);
    std::sort(chosen.begin(), chosen.end());
    for (const Triplet& tr : chosen) out.ledger.add(tr, tr.start, inst_.catalog);
    return out;
  }

 private:
  Cost cost_of(std::uint32_t mask) const {
    Cost c = 0;
    for (std::size_t k = 0; k < cands_.size(); ++k)
      if (mask >> k & 1U) c += inst_.catalog[cands_[k].lease].cost;
    return c;
  }

  bool feasible(std::uint32_t mask) const {
    const int n = inst_.graph.node_count();
    std::vector<char> active(static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < inst_.requests.size(); ++r) {
      for (NodeId i = 0; i < n; ++i) active[i] = (node_masks_[r][i] & mask) != 0;
      const auto& targets = inst_.requests[r].nodes;
      const bool ok = mode_ == CoverMode::Connected ? check_feasible_step(inst_.graph, active, targets).ok
                                                    : check_dominated_step(inst_.graph, active, targets);
      if (!ok) return false;
    }
    return true;
  }

  void search(std::size_t k, std::uint32_t mask, Cost cost) {
    if (cost >= best_cost_) return;
    if (!feasible(mask | suffix_[k])) return;
    if (feasible(mask)) {
      best_cost_ = cost;
      best_mask_ = mask;
      return;
    }
    if (k == cands_.size()) return;
    search(k + 1, mask, cost);
    search(k + 1, mask | (std::uint32_t{1} << k), cost + inst_.catalog[cands_[k].lease].cost);
  }

  const Instance& inst_;
  CoverMode mode_;
  std::vector<Triplet> cands_;
  std::vector<std::vector<std::uint32_t>> node_masks_;
  std::vector<std::uint32_t> suffix_;
  std::uint32_t best_mask_ = 0;
  Cost best_cost_ = 0;
};

}  // namespace detail

/// Exact minimum-cost connected dominating lease set.
inline OfflineSolution offline_opt(const Instance& inst) {
  return detail::BranchAndBound(inst, CoverMode::Connected).solve();
}

/// Exact minimum-cost dominating lease set (no connectivity).
inline OfflineSolution offline_opt_ds(const Instance& inst) {
  return detail::BranchAndBound(inst, CoverMode::DominationOnly).solve();
}

}  // namespace leaselab
