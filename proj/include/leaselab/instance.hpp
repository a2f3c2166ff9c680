#pragma once

// Problem instances, purchase ledgers and their JSON / CSV encodings.

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "leaselab/graph.hpp"
#include "leaselab/lease_model.hpp"

namespace leaselab {

struct Request {
  Time t = 0;
  std::vector<NodeId> nodes;  // sorted, distinct
};

struct Instance {
  Graph graph;
  LeaseCatalog catalog;
  std::vector<Request> requests;  // strictly increasing t

  /// One past the last time any lease bought for a request can be active.
  Time horizon() const {
    if (requests.empty()) return 0;
    return requests.back().t + catalog.longest().duration;
  }

  void validate() const {
    catalog.validate();
    for (std::size_t i = 0; i < requests.size(); ++i) {
      const Request& r = requests[i];
      if (r.nodes.empty()) throw Error(ErrorKind::EmptyRequest, "request " + std::to_string(i) + " is empty");
      if (r.t < 0 || (i > 0 && r.t <= requests[i - 1].t))
        throw Error(ErrorKind::NonMonotonicTime, "request times must be nonnegative and strictly increasing");
      for (NodeId u : r.nodes)
        if (u < 0 || u >= graph.node_count()) throw Error(ErrorKind::BadNodeId, "request node " + std::to_string(u));
    }
  }
};

struct LedgerEntry {
  Triplet triplet;
  Time step = 0;
  Cost cost = 0;
};

/// Bought triplets in purchase order; each triplet appears at most once.
class PurchaseLedger {
 public:
  bool contains(const Triplet& tr) const { return keys_.count(tr) > 0; }

  /// Records a purchase unless the triplet is already owned; returns whether it was new.
  bool add(const Triplet& tr, Time step, const LeaseCatalog& catalog) {
    if (!keys_.insert(tr).second) return false;
    entries_.push_back(LedgerEntry{tr, step, catalog[tr.lease].cost});
    return true;
  }

  const std::vector<LedgerEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  Cost total_cost() const {
    Cost c = 0;
    for (const auto& e : entries_) c += e.cost;
    return c;
  }

  /// mask[node] is set when some owned triplet of that node is active at t.
  std::vector<char> active_nodes(const Graph& g, const LeaseCatalog& catalog, Time t) const {
    std::vector<char> mask(static_cast<std::size_t>(g.node_count()), 0);
    for (const auto& e : entries_)
      if (is_active(e.triplet, catalog, t)) mask[e.triplet.node] = 1;
    return mask;
  }

 private:
  std::vector<LedgerEntry> entries_;
  std::set<Triplet> keys_;
};

// ---------------------------------------------------------------------------
// JSON instance files:
//   { "n", "edges": [[u,v],...], "leases": [{"duration","cost"},...],
//     "requests": [{"t", "nodes": [...]},...] }

inline nlohmann::json cost_to_json(const Cost& c) {
  if (c.denominator() == 1) return c.numerator();
  return to_string(c);
}

inline Cost cost_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Cost(j.get<std::int64_t>());
  if (j.is_string()) return parse_cost(j.get<std::string>());
  if (j.is_number()) return parse_cost(j.dump());
  throw Error(ErrorKind::BadInput, "cost must be a number or a rational string");
}

inline nlohmann::json to_json(const Instance& inst) {
  nlohmann::json j;
  j["n"] = inst.graph.node_count();
  j["edges"] = nlohmann::json::array();
  for (auto [u, v] : inst.graph.edges()) j["edges"].push_back({u, v});
  j["leases"] = nlohmann::json::array();
  for (const LeaseType& lt : inst.catalog) j["leases"].push_back({{"duration", lt.duration}, {"cost", cost_to_json(lt.cost)}});
  j["requests"] = nlohmann::json::array();
  for (const Request& r : inst.requests) j["requests"].push_back({{"t", r.t}, {"nodes", r.nodes}});
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  try {
    Instance inst;
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
    inst.graph = Graph::build(j.at("n").get<int>(), edges);
    std::vector<std::pair<Time, Cost>> leases;
    for (const auto& l : j.at("leases")) leases.emplace_back(l.at("duration").get<Time>(), cost_from_json(l.at("cost")));
    inst.catalog = LeaseCatalog::from_pairs(leases);
    for (const auto& r : j.at("requests")) {
      Request req{r.at("t").get<Time>(), r.at("nodes").get<std::vector<NodeId>>()};
      std::sort(req.nodes.begin(), req.nodes.end());
      req.nodes.erase(std::unique(req.nodes.begin(), req.nodes.end()), req.nodes.end());
      inst.requests.push_back(std::move(req));
    }
    inst.validate();
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadInput, std::string("malformed instance: ") + e.what());
  }
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadInput, "cannot open " + path);
  try {
    return instance_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::BadInput, path + ": " + e.what());
  }
}

// Ledger CSV: node,lease,start,step,cost

inline std::string ledger_to_csv(const PurchaseLedger& ledger) {
  std::ostringstream os;
  os << "node,lease,start,step,cost\n";
  for (const auto& e : ledger.entries())
    os << e.triplet.node << ',' << e.triplet.lease << ',' << e.triplet.start << ',' << e.step << ',' << to_string(e.cost) << '\n';
  return os.str();
}

inline PurchaseLedger ledger_from_csv(std::istream& in, const LeaseCatalog& catalog) {
  PurchaseLedger ledger;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("node", 0) == 0) continue;
    }
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> cols;
    while (std::getline(row, field, ',')) cols.push_back(field);
    if (cols.size() < 3) throw Error(ErrorKind::BadInput, "ledger row needs node,lease,start: " + line);
    Triplet tr{std::stoi(cols[0]), std::stoi(cols[1]), std::stoll(cols[2])};
    if (tr.lease < 1 || tr.lease > static_cast<int>(catalog.size()))
      throw Error(ErrorKind::BadInput, "ledger lease index out of range: " + line);
    if (tr.start % catalog[tr.lease].duration != 0)
      throw Error(ErrorKind::BadInput, "ledger triplet not slot-aligned: " + line);
    ledger.add(tr, cols.size() > 3 ? std::stoll(cols[3]) : 0, catalog);
  }
  return ledger;
}

}  // namespace leaselab
