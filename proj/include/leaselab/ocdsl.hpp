#pragma once

// Randomized two-phase online connected dominating set leasing.
//
// Phase 1 grows fractional weights on the dominators of every undominated
// request node, rounds them against per-triplet random thresholds, falls back
// to the cheapest lease on the node itself, then picks representatives for the
// chosen dominators greedily. Phase 2 connects representatives that are not
// yet linked to a root through an online Steiner forest leasing instance and
// leases both endpoints of every graph edge it buys.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "leaselab/instance.hpp"
#include "leaselab/oracle.hpp"
#include "leaselab/steiner_leasing.hpp"

namespace leaselab {

enum class Phase { Rounding, Fallback, Representative, Connection };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::Rounding: return "rounding";
    case Phase::Fallback: return "fallback";
    case Phase::Representative: return "representative";
    case Phase::Connection: return "connection";
  }
  return "?";
}

struct Purchase {
  Triplet triplet;
  Cost cost = 0;
  Phase phase = Phase::Rounding;
};

struct StepReport {
  Time t = 0;
  std::vector<NodeId> requests;
  std::vector<Purchase> purchases;
  std::vector<Triplet> dominators;       // S_t, distinct, sorted
  std::vector<Triplet> representatives;  // sorted by node
  std::optional<NodeId> root;
  std::vector<NodeId> terminals;         // R_t
  std::vector<EdgeLease> edge_leases;    // leased by the Steiner subroutine this step
  Cost phase1_cost = 0;
  Cost phase2_cost = 0;
};

/// One multiplicative-growth episode, kept for diagnostics.
struct GrowthRecord {
  NodeId node = 0;
  Time t = 0;
  int rounds = 0;
  std::size_t dominator_count = 0;
  double weight_sum = 0.0;  // after growth
};

struct RepresentativeChoice {
  std::vector<Triplet> representatives;
  std::map<Triplet, Triplet> assignment;  // S_t member -> representative
  std::vector<Purchase> purchases;
};

/// Number of uniforms whose minimum forms one rounding threshold: 2*ceil(log2(n+1)).
inline int threshold_sample_count(int n) { return 2 * ceil_log2(static_cast<std::int64_t>(n) + 1); }

/// Minimum of `samples` independent uniforms on [0, 1).
inline double sample_threshold(std::mt19937_64& rng, int samples) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double mu = 1.0;
  for (int q = 0; q < samples; ++q) mu = std::min(mu, unit(rng));
  return mu;
}

class OcdslState {
 public:
  OcdslState(Graph g, LeaseCatalog catalog, std::uint64_t seed, CoverMode mode = CoverMode::Connected)
      : graph_(std::move(g)), catalog_(std::move(catalog)), mode_(mode), rng_(seed) {
    catalog_.validate();
    samples_ = threshold_sample_count(graph_.node_count());
    if (mode_ == CoverMode::Connected) osfl_ = osfl_init(graph_, catalog_, rng_);
  }

  const Graph& graph() const noexcept { return graph_; }
  const LeaseCatalog& catalog() const noexcept { return catalog_; }
  CoverMode mode() const noexcept { return mode_; }
  const PurchaseLedger& ledger() const noexcept { return ledger_; }
  const OsflState& osfl() const noexcept { return osfl_; }
  const std::vector<GrowthRecord>& growth_log() const noexcept { return growth_log_; }
  Cost phase1_cost() const noexcept { return phase1_cost_; }
  Cost phase2_cost() const noexcept { return phase2_cost_; }
  Cost total_cost() const noexcept { return phase1_cost_ + phase2_cost_; }

  double weight(const Triplet& tr) const {
    auto it = weights_.find(tr);
    return it == weights_.end() ? 0.0 : it->second;
  }

  /// Frozen threshold of a triplet, sampling it on first use.
  double threshold(const Triplet& tr) {
    auto [it, fresh] = thresholds_.try_emplace(tr, 0.0);
    if (fresh) it->second = sample_threshold(rng_, samples_);
    return it->second;
  }

  const std::unordered_map<Triplet, double, TripletHash>& weights() const noexcept { return weights_; }
  const std::unordered_map<Triplet, double, TripletHash>& thresholds() const noexcept { return thresholds_; }

  /// Sum over all triplets of c_l * w.
  double fractional_cost() const {
    double total = 0.0;
    for (const auto& [tr, w] : weights_) total += to_double(catalog_[tr.lease].cost) * w;
    return total;
  }

  /// Largest |W_u| over every node requested so far.
  std::size_t max_dominator_count() const noexcept { return max_dominators_; }

  bool has_active_dominator(NodeId u, Time t) const {
    for (const Triplet& tr : dominators(graph_, u, t, catalog_).triplets)
      if (ledger_.contains(tr)) return true;
    return false;
  }

  int grow_fractional(NodeId u, Time t);
  std::vector<Purchase> round_purchases(NodeId u, Time t);
  std::optional<Purchase> fallback(NodeId u, Time t);
  RepresentativeChoice select_representatives(const std::vector<Triplet>& chosen, const std::vector<NodeId>& requests, Time t);
  StepReport serve_request(std::vector<NodeId> requests, Time t);

 private:
  std::optional<Purchase> buy(const Triplet& tr, Time t, Phase phase) {
    if (!ledger_.add(tr, t, catalog_)) return std::nullopt;
    const Cost c = catalog_[tr.lease].cost;
    (phase == Phase::Connection ? phase2_cost_ : phase1_cost_) += c;
    return Purchase{tr, c, phase};
  }

  Graph graph_;
  LeaseCatalog catalog_;
  CoverMode mode_;
  std::mt19937_64 rng_;
  int samples_ = 1;
  OsflState osfl_;
  std::unordered_map<Triplet, double, TripletHash> weights_;
  std::unordered_map<Triplet, double, TripletHash> thresholds_;
  PurchaseLedger ledger_;
  std::vector<GrowthRecord> growth_log_;
  std::size_t max_dominators_ = 0;
  Cost phase1_cost_ = 0;
  Cost phase2_cost_ = 0;
  std::optional<Time> last_;
};

inline int OcdslState::grow_fractional(NodeId u, Time t) {
  const auto ws = dominators(graph_, u, t, catalog_).triplets;
  const double size = static_cast<double>(ws.size());
  const double types = static_cast<double>(catalog_.size());
  auto sum = [&] {
    double s = 0.0;
    for (const Triplet& tr : ws) s += weight(tr);
    return s;
  };
  int rounds = 0;
  for (double s = sum(); s < 1.0; s = sum()) {
    for (const Triplet& tr : ws) {
      const double c = to_double(catalog_[tr.lease].cost);
      double& w = weights_[tr];
      // A free lease saturates at once: the update's limit as c -> 0.
      w = c == 0.0 ? std::max(w, 1.0) : w * (1.0 + 1.0 / c) + 1.0 / (size * types * c);
    }
    ++rounds;
  }
  growth_log_.push_back(GrowthRecord{u, t, rounds, ws.size(), sum()});
  return rounds;
}

inline std::vector<Purchase> OcdslState::round_purchases(NodeId u, Time t) {
  std::vector<Purchase> out;
  for (const Triplet& tr : dominators(graph_, u, t, catalog_).triplets) {
    const double w = weight(tr);
    if (w <= 0.0 || ledger_.contains(tr)) continue;
    if (w > threshold(tr))
      if (auto p = buy(tr, t, Phase::Rounding)) out.push_back(*p);
  }
  return out;
}

inline std::optional<Purchase> OcdslState::fallback(NodeId u, Time t) {
  if (has_active_dominator(u, t)) return std::nullopt;
  return buy(Triplet{u, 1, slot_start(t, catalog_.cheapest())}, t, Phase::Fallback);
}

inline RepresentativeChoice OcdslState::select_representatives(const std::vector<Triplet>& chosen,
                                                                const std::vector<NodeId>& requests, Time t) {
  RepresentativeChoice out;
  std::vector<Triplet> unassigned = chosen;
  const Time slot = slot_start(t, catalog_.cheapest());
  while (!unassigned.empty()) {
    NodeId best = -1;
    std::set<NodeId> best_cover;
    for (NodeId u : requests) {
      std::set<NodeId> cover;
      for (const Triplet& tr : unassigned)
        if (graph_.dominates(tr.node, u)) cover.insert(tr.node);
      if (cover.size() > best_cover.size()) {
        best = u;
        best_cover = std::move(cover);
      }
    }
    if (best < 0)
      throw Error(ErrorKind::UncoveredDominator, "dominator " + to_string(unassigned.front()) + " dominates no request node");
    const Triplet rep{best, 1, slot};
    out.representatives.push_back(rep);
    if (auto p = buy(rep, t, Phase::Representative)) out.purchases.push_back(*p);
    std::erase_if(unassigned, [&](const Triplet& tr) {
      if (!best_cover.count(tr.node)) return false;
      out.assignment.emplace(tr, rep);
      return true;
    });
  }
  std::sort(out.representatives.begin(), out.representatives.end());
  return out;
}

inline StepReport OcdslState::serve_request(std::vector<NodeId> requests, Time t) {
  if (requests.empty()) throw Error(ErrorKind::EmptyRequest, "request at time " + std::to_string(t) + " is empty");
  if (t < 0 || (last_ && t <= *last_))
    throw Error(ErrorKind::NonMonotonicTime, "request at " + std::to_string(t) + " does not follow " +
                                                 (last_ ? std::to_string(*last_) : std::string("start")));
  std::sort(requests.begin(), requests.end());
  requests.erase(std::unique(requests.begin(), requests.end()), requests.end());
  for (NodeId u : requests)
    if (u < 0 || u >= graph_.node_count()) throw Error(ErrorKind::BadNodeId, "request node " + std::to_string(u));
  last_ = t;

  StepReport report;
  report.t = t;
  report.requests = requests;
  const Cost c1_before = phase1_cost_, c2_before = phase2_cost_;
  auto take = [&](auto&& bought) {
    for (const Purchase& p : bought) report.purchases.push_back(p);
  };

  for (NodeId u : requests) {
    max_dominators_ = std::max(max_dominators_, (graph_.neighbors(u).size() + 1) * catalog_.size());
    if (has_active_dominator(u, t)) continue;
    grow_fractional(u, t);
    take(round_purchases(u, t));
    if (auto p = fallback(u, t)) report.purchases.push_back(*p);
  }

  if (mode_ == CoverMode::Connected) {
    // S_t: one active dominator per request node.
    std::set<Triplet> chosen;
    for (NodeId u : requests) {
      std::optional<Triplet> pick;
      auto key = [&](const Triplet& tr) { return std::make_tuple(catalog_[tr.lease].cost, tr.node, tr.start, tr.lease); };
      for (const Triplet& tr : dominators(graph_, u, t, catalog_).triplets)
        if (ledger_.contains(tr) && (!pick || key(tr) < key(*pick))) pick = tr;
      if (!pick) throw Error(ErrorKind::InfeasibleOutput, "node " + std::to_string(u) + " left undominated");
      chosen.insert(*pick);
    }
    report.dominators.assign(chosen.begin(), chosen.end());

    RepresentativeChoice reps = select_representatives(report.dominators, requests, t);
    take(reps.purchases);
    report.representatives = reps.representatives;

    const NodeId root = report.representatives.front().node;
    report.root = root;
    const auto label = induced_components(graph_, ledger_.active_nodes(graph_, catalog_, t));
    for (const Triplet& rep : report.representatives)
      if (label[rep.node] != label[root]) report.terminals.push_back(rep.node);

    if (!report.terminals.empty()) {
      report.edge_leases = osfl_.connect(report.terminals, root, t);
      for (const EdgeLease& e : report.edge_leases)
        for (NodeId endpoint : {e.edge.first, e.edge.second})
          if (auto p = buy(Triplet{endpoint, e.lease, e.start}, t, Phase::Connection)) report.purchases.push_back(*p);
    }
  }

  report.phase1_cost = phase1_cost_ - c1_before;
  report.phase2_cost = phase2_cost_ - c2_before;
  return report;
}

/// Step report as one JSON object (one line of a JSON-lines log).
inline nlohmann::json to_json(const StepReport& r) {
  auto triplets = [](const std::vector<Triplet>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const Triplet& tr : v) a.push_back({tr.node, tr.lease, tr.start});
    return a;
  };
  nlohmann::json j;
  j["t"] = r.t;
  j["D_t"] = r.requests;
  j["purchases"] = nlohmann::json::array();
  for (const Purchase& p : r.purchases)
    j["purchases"].push_back({{"node", p.triplet.node}, {"lease", p.triplet.lease}, {"start", p.triplet.start},
                              {"cost", cost_to_json(p.cost)}, {"phase", to_string(p.phase)}});
  j["S_t"] = triplets(r.dominators);
  j["representatives"] = triplets(r.representatives);
  j["root"] = r.root ? nlohmann::json(*r.root) : nlohmann::json(nullptr);
  j["R_t"] = r.terminals;
  j["C1"] = cost_to_json(r.phase1_cost);
  j["C2"] = cost_to_json(r.phase2_cost);
  return j;
}

}  // namespace leaselab
