#pragma once

// Deterministic online parking permit under the interval model, plus an exact
// offline optimum computed over the nested slot hierarchy.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "leaselab/error.hpp"
#include "leaselab/lease_model.hpp"

namespace leaselab {

struct Permit {
  int lease = 1;
  Time start = 0;

  auto operator<=>(const Permit&) const = default;
};

/// State of one online parking-permit instance.
///
/// `spend[(k, s)]` accumulates the cost of purchases of types strictly below k
/// made inside the type-k slot starting at s. Once that spend reaches c_k the
/// type-k permit for the slot is bought.
class PermitState {
 public:
  PermitState() = default;
  explicit PermitState(LeaseCatalog catalog) : catalog_(std::move(catalog)) {}

  const LeaseCatalog& catalog() const noexcept { return catalog_; }
  const std::set<Permit>& owned() const noexcept { return owned_; }
  const std::map<Permit, Cost>& spend() const noexcept { return spend_; }
  Cost total_cost() const noexcept { return total_; }

  /// Largest owned type whose window contains t, or nullopt.
  std::optional<int> covering_type(Time t) const {
    for (auto it = catalog_.types().rbegin(); it != catalog_.types().rend(); ++it)
      if (owned_.count(Permit{it->index, slot_start(t, *it)})) return it->index;
    return std::nullopt;
  }

  bool covered(Time t) const { return covering_type(t).has_value(); }

  /// Serves a rainy day at t and returns the permits bought for it (ascending type).
  std::vector<Permit> request(Time t) {
    if (last_ && t < *last_)
      throw Error(ErrorKind::NonMonotonicTime, "request at " + std::to_string(t) + " after " + std::to_string(*last_));
    if (t < 0) throw Error(ErrorKind::NonMonotonicTime, "negative time");
    last_ = t;
    std::vector<Permit> bought;
    if (covered(t)) return bought;

    buy(1, t, bought);
    int top = 1;
    for (;;) {
      std::optional<int> escalate;
      for (int k = static_cast<int>(catalog_.size()); k > top; --k) {
        const Permit slot{k, slot_start(t, catalog_[k])};
        auto it = spend_.find(slot);
        if (it != spend_.end() && it->second >= catalog_[k].cost && !owned_.count(slot)) {
          escalate = k;
          break;
        }
      }
      if (!escalate) break;
      buy(*escalate, t, bought);
      top = *escalate;
    }
    return bought;
  }

 private:
  void buy(int k, Time t, std::vector<Permit>& bought) {
    const LeaseType& lt = catalog_[k];
    const Permit p{k, slot_start(t, lt)};
    owned_.insert(p);
    bought.push_back(p);
    total_ += lt.cost;
    for (int up = k + 1; up <= static_cast<int>(catalog_.size()); ++up)
      spend_[Permit{up, slot_start(t, catalog_[up])}] += lt.cost;
  }

  LeaseCatalog catalog_;
  std::set<Permit> owned_;
  std::map<Permit, Cost> spend_;
  Cost total_ = 0;
  std::optional<Time> last_;
};

inline std::vector<Permit> pp_request(PermitState& st, Time t) { return st.request(t); }

namespace detail {

// Minimum cost to cover every rainy day in the type-k slot [s, s + d_k).
inline Cost pp_slot_opt(const std::vector<Time>& rainy, const LeaseCatalog& catalog, int k, Time s) {
  const LeaseType& lt = catalog[k];
  auto lo = std::lower_bound(rainy.begin(), rainy.end(), s);
  if (lo == rainy.end() || *lo >= s + lt.duration) return 0;
  if (k == 1) return lt.cost;
  const Time child = catalog[k - 1].duration;
  Cost nested = 0;
  for (Time cs = s; cs < s + lt.duration && nested < lt.cost; cs += child)
    nested += pp_slot_opt(rainy, catalog, k - 1, cs);
  return std::min(lt.cost, nested);
}

}  // namespace detail

/// Exact offline optimum for covering `rainy` (all inside [0, horizon)).
inline Cost pp_offline_opt(std::vector<Time> rainy, const LeaseCatalog& catalog, Time horizon) {
  std::sort(rainy.begin(), rainy.end());
  rainy.erase(std::unique(rainy.begin(), rainy.end()), rainy.end());
  for (Time t : rainy)
    if (t < 0 || t >= horizon)
      throw Error(ErrorKind::RainyDayOutOfHorizon, "day " + std::to_string(t) + " outside [0," + std::to_string(horizon) + ")");
  const int top = static_cast<int>(catalog.size());
  const Time d = catalog[top].duration;
  Cost total = 0;
  for (Time s = 0; s < horizon; s += d) total += detail::pp_slot_opt(rainy, catalog, top, s);
  return total;
}

}  // namespace leaselab
