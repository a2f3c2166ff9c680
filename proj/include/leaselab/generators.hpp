#pragma once

// Instance generators. Every generator is a pure function of its parameters
// and seed.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "leaselab/instance.hpp"

namespace leaselab {

/// splitmix64 finalizer; used to derive independent seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) { return mix_seed(mix_seed(base) ^ index); }

enum class GraphKind { RandomGnpConnected, Path, Star, Grid, PpAdversary };

inline GraphKind parse_graph_kind(const std::string& name) {
  if (name == "random-gnp-connected" || name == "gnp") return GraphKind::RandomGnpConnected;
  if (name == "path") return GraphKind::Path;
  if (name == "star") return GraphKind::Star;
  if (name == "grid") return GraphKind::Grid;
  if (name == "pp-adversary") return GraphKind::PpAdversary;
  throw Error(ErrorKind::BadParams, "unknown generator '" + name + "'");
}

inline const char* to_string(GraphKind k) {
  switch (k) {
    case GraphKind::RandomGnpConnected: return "random-gnp-connected";
    case GraphKind::Path: return "path";
    case GraphKind::Star: return "star";
    case GraphKind::Grid: return "grid";
    case GraphKind::PpAdversary: return "pp-adversary";
  }
  return "?";
}

struct GenParams {
  GraphKind kind = GraphKind::Path;
  int n = 4;
  double p = 0.4;        // gnp edge probability
  int rows = 2;          // grid
  int cols = 2;
  int steps = 4;         // number of request steps T
  Time time_step = 1;    // spacing of request times
  int request_size = 0;  // 0: size drawn uniformly from [1, n]
  int num_leases = 2;    // used when `catalog` is empty
  std::optional<LeaseCatalog> catalog;
  std::vector<Request> requests;  // explicit requests override random ones
  int gnp_retries = 1000;
};

/// Durations grow by a factor 2 or 4, costs by at most that factor, so economy
/// of scale holds. Costs are positive integers.
inline LeaseCatalog random_catalog(int types, std::mt19937_64& rng) {
  if (types < 1) throw Error(ErrorKind::BadParams, "need at least one lease type");
  std::vector<std::pair<Time, Cost>> pairs;
  Time d = 1;
  std::int64_t c = std::uniform_int_distribution<std::int64_t>(1, 3)(rng);
  pairs.emplace_back(d, Cost(c));
  for (int k = 1; k < types; ++k) {
    const Time factor = std::uniform_int_distribution<int>(0, 1)(rng) ? 4 : 2;
    d *= factor;
    c = std::uniform_int_distribution<std::int64_t>(c + 1, c * factor)(rng);
    pairs.emplace_back(d, Cost(c));
  }
  return LeaseCatalog::from_pairs(pairs);
}

namespace detail {

inline std::vector<Edge> gnp_edges(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (coin(rng)) edges.emplace_back(u, v);
  return edges;
}

inline bool connected(int n, const std::vector<Edge>& edges) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int parts = n;
  for (auto [u, v] : edges) {
    int a = find(u), b = find(v);
    if (a != b) {
      parent[a] = b;
      --parts;
    }
  }
  return parts == 1;
}

inline std::vector<Edge> star_edges(int n) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.emplace_back(0, v);
  return edges;
}

// Nested bursts: inside each slot of type k a random non-empty subset of its
// type-(k-1) sub-slots is rainy; a rainy type-1 slot rains on every day.
inline void nested_burst(const LeaseCatalog& catalog, int k, Time s, std::mt19937_64& rng, std::vector<Time>& out) {
  const LeaseType& lt = catalog[k];
  if (k == 1) {
    for (Time day = s; day < s + lt.duration; ++day) out.push_back(day);
    return;
  }
  const Time child = catalog[k - 1].duration;
  const Time count = lt.duration / child;
  std::vector<char> pick(static_cast<std::size_t>(count));
  std::bernoulli_distribution coin(0.5);
  bool any = false;
  for (auto& b : pick) any |= (b = coin(rng));
  if (!any) pick[std::uniform_int_distribution<Time>(0, count - 1)(rng)] = 1;
  for (Time i = 0; i < count; ++i)
    if (pick[i]) nested_burst(catalog, k - 1, s + i * child, rng, out);
}

}  // namespace detail

inline Instance gen_instance(const GenParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (params.steps < 0 || params.time_step < 1) throw Error(ErrorKind::BadParams, "steps must be >= 0 and time_step >= 1");
  Instance inst;
  inst.catalog = params.catalog ? *params.catalog : random_catalog(params.num_leases, rng);
  inst.catalog.validate();

  int n = params.n;
  std::vector<Edge> edges;
  switch (params.kind) {
    case GraphKind::RandomGnpConnected: {
      if (n < 1 || params.p < 0.0 || params.p > 1.0) throw Error(ErrorKind::BadParams, "gnp needs n >= 1 and p in [0,1]");
      bool ok = false;
      for (int attempt = 0; attempt < params.gnp_retries && !ok; ++attempt) {
        edges = detail::gnp_edges(n, params.p, rng);
        ok = detail::connected(n, edges);
      }
      if (!ok) throw Error(ErrorKind::BadParams, "no connected G(n,p) sample within the retry budget");
      break;
    }
    case GraphKind::Path:
      if (n < 1) throw Error(ErrorKind::BadParams, "path needs n >= 1");
      for (NodeId v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
      break;
    case GraphKind::Star:
    case GraphKind::PpAdversary:
      if (n < 1) throw Error(ErrorKind::BadParams, "star needs n >= 1");
      edges = detail::star_edges(n);
      break;
    case GraphKind::Grid:
      if (params.rows < 1 || params.cols < 1) throw Error(ErrorKind::BadParams, "grid needs rows, cols >= 1");
      n = params.rows * params.cols;
      for (int r = 0; r < params.rows; ++r)
        for (int c = 0; c < params.cols; ++c) {
          const NodeId v = r * params.cols + c;
          if (c + 1 < params.cols) edges.emplace_back(v, v + 1);
          if (r + 1 < params.rows) edges.emplace_back(v, v + params.cols);
        }
      break;
  }
  inst.graph = Graph::build(n, edges);

  if (!params.requests.empty()) {
    inst.requests = params.requests;
  } else if (params.kind == GraphKind::PpAdversary) {
    std::vector<Time> days;
    const int top = static_cast<int>(inst.catalog.size());
    for (Time s = 0; static_cast<int>(days.size()) < params.steps; s += inst.catalog[top].duration)
      detail::nested_burst(inst.catalog, top, s, rng, days);
    days.resize(static_cast<std::size_t>(params.steps));
    std::uniform_int_distribution<NodeId> node(0, n - 1);
    for (Time day : days) inst.requests.push_back(Request{day, {node(rng)}});
  } else {
    if (params.request_size < 0 || params.request_size > n) throw Error(ErrorKind::BadParams, "request_size must lie in [0, n]");
    std::vector<NodeId> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int j = 0; j < params.steps; ++j) {
      const int size = params.request_size > 0 ? params.request_size : std::uniform_int_distribution<int>(1, n)(rng);
      std::shuffle(pool.begin(), pool.end(), rng);
      Request r{static_cast<Time>(j) * params.time_step, {pool.begin(), pool.begin() + size}};
      std::sort(r.nodes.begin(), r.nodes.end());
      inst.requests.push_back(std::move(r));
    }
  }
  inst.validate();
  return inst;
}

}  // namespace leaselab
