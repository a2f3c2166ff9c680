#pragma once

// Lease types, the interval model's slot alignment and triplet windows.

#include <boost/rational.hpp>

#include <charconv>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "leaselab/error.hpp"

namespace leaselab {

using Time = std::int64_t;
using NodeId = int;
using Cost = boost::rational<std::int64_t>;

inline double to_double(const Cost& c) {
  return boost::rational_cast<double>(c);
}

inline std::string to_string(const Cost& c) {
  if (c.denominator() == 1) return std::to_string(c.numerator());
  return std::to_string(c.numerator()) + "/" + std::to_string(c.denominator());
}

/// Parses "3", "3/2" or a plain decimal such as "1.25" into an exact rational.
inline Cost parse_cost(std::string_view text) {
  auto fail = [&] { throw Error(ErrorKind::BadInput, "cannot parse cost '" + std::string(text) + "'"); };
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) fail();
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t den = parse_int(text.substr(slash + 1));
    if (den <= 0) fail();
    return Cost(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 12) fail();
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t whole = dot == 0 ? 0 : parse_int(text.substr(0, dot));
    std::int64_t part = frac.empty() ? 0 : parse_int(frac);
    if (whole < 0 || text.front() == '-') fail();
    return Cost(whole * scale + part, scale);
  }
  return Cost(parse_int(text));
}

struct LeaseType {
  int index = 1;  // 1-based, ascending duration
  Time duration = 1;
  Cost cost = 1;
};

/// Validated, immutable list of lease types sorted by duration.
class LeaseCatalog {
 public:
  LeaseCatalog() = default;

  /// Takes (duration, cost) pairs in ascending-duration order and validates them.
  static LeaseCatalog from_pairs(const std::vector<std::pair<Time, Cost>>& pairs) {
    LeaseCatalog catalog;
    int index = 1;
    for (const auto& [d, c] : pairs) catalog.types_.push_back(LeaseType{index++, d, c});
    catalog.validate();
    return catalog;
  }

  void validate() const;

  std::size_t size() const noexcept { return types_.size(); }
  bool empty() const noexcept { return types_.empty(); }
  const LeaseType& operator[](int index) const { return types_.at(static_cast<std::size_t>(index - 1)); }
  const LeaseType& cheapest() const { return types_.front(); }
  const LeaseType& longest() const { return types_.back(); }
  const std::vector<LeaseType>& types() const noexcept { return types_; }

  auto begin() const noexcept { return types_.begin(); }
  auto end() const noexcept { return types_.end(); }

 private:
  std::vector<LeaseType> types_;
};

inline bool is_power_of_two(Time d) { return d > 0 && (d & (d - 1)) == 0; }

inline void validate_catalog(const LeaseCatalog& catalog) {
  const auto& types = catalog.types();
  if (types.empty()) throw Error(ErrorKind::EmptyCatalog, "lease catalog has no types");
  for (std::size_t i = 0; i < types.size(); ++i) {
    const LeaseType& lt = types[i];
    const std::string where = "lease index " + std::to_string(i + 1);
    if (!is_power_of_two(lt.duration))
      throw Error(ErrorKind::NonPowerOfTwoDuration, where + " has duration " + std::to_string(lt.duration));
    if (lt.cost < Cost(0)) throw Error(ErrorKind::BadInput, where + " has negative cost");
    if (i == 0) continue;
    const LeaseType& prev = types[i - 1];
    if (lt.duration <= prev.duration)
      throw Error(ErrorKind::BadInput, where + " is not longer than its predecessor");
    if (lt.cost < prev.cost)
      throw Error(ErrorKind::EconomyOfScaleViolated, where + " is cheaper than a shorter lease");
    // c_k / d_k <= c_{k-1} / d_{k-1}
    if (lt.cost * Cost(prev.duration) > prev.cost * Cost(lt.duration))
      throw Error(ErrorKind::EconomyOfScaleViolated, where + " costs more per unit time than index " + std::to_string(i));
  }
}

inline void LeaseCatalog::validate() const { validate_catalog(*this); }

inline Time slot_start(Time t, Time duration) { return t - t % duration; }
inline Time slot_start(Time t, const LeaseType& lease) { return slot_start(t, lease.duration); }

/// A purchasable unit: node `node` leased with type `lease` over [start, start + d_lease).
struct Triplet {
  NodeId node = 0;
  int lease = 1;
  Time start = 0;

  auto operator<=>(const Triplet&) const = default;
};

inline bool is_active(const Triplet& tr, const LeaseCatalog& catalog, Time t) {
  const Time d = catalog[tr.lease].duration;
  return tr.start <= t && t < tr.start + d;
}

inline std::string to_string(const Triplet& tr) {
  return "(" + std::to_string(tr.node) + "," + std::to_string(tr.lease) + "," + std::to_string(tr.start) + ")";
}

struct TripletHash {
  std::size_t operator()(const Triplet& tr) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(tr.node) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(tr.lease) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(tr.start) + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace leaselab
