#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "brute_force.hpp"

using namespace leaselab;
using namespace leaselab::testing;

namespace {

OsflState make(const Graph& g, const LeaseCatalog& cat, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return osfl_init(g, cat, rng);
}

bool reaches(const Graph& g, const std::vector<Edge>& edges, NodeId from, NodeId to) {
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(g.node_count()));
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(adj.size(), 0);
  std::vector<NodeId> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : adj[u])
      if (!seen[v]) seen[v] = 1, stack.push_back(v);
  }
  return seen[to];
}

Graph random_tree(int n, std::mt19937_64& rng) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.emplace_back(std::uniform_int_distribution<NodeId>(0, v - 1)(rng), v);
  return Graph::build(n, edges);
}

}  // namespace

TEST(SteinerLeasing, InitIsEmptyAndDeterministic) {
  const Graph g = cycle_graph(6);
  const auto cat = catalog({{1, 1}, {4, 3}});
  OsflState a = make(g, cat, 17), b = make(g, cat, 17);
  EXPECT_TRUE(a.ledger().empty());
  EXPECT_EQ(osfl_cost(a), Cost(0));
  std::ostringstream da, db;
  a.hst().dump(da);
  b.hst().dump(db);
  EXPECT_EQ(da.str(), db.str());
}

TEST(SteinerLeasing, SingleNodeIsNoOp) {
  OsflState st = make(Graph::build(1, std::vector<Edge>{}), catalog({{1, 1}}), 3);
  EXPECT_TRUE(osfl_connect(st, {0}, 0, 0).empty());
  EXPECT_TRUE(osfl_connect(st, {0}, 0, 5).empty());
  EXPECT_EQ(osfl_cost(st), Cost(0));
}

TEST(SteinerLeasing, RootAsTerminalBuysNothing) {
  OsflState st = make(path_graph(5), catalog({{1, 1}}), 3);
  EXPECT_TRUE(osfl_connect(st, {2}, 2, 0).empty());
  EXPECT_TRUE(st.tree_purchases().empty());
}

TEST(SteinerLeasing, TwoNodeGraphLeasesTheOnlyEdge) {
  const Graph g = path_graph(2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    OsflState st = make(g, catalog({{1, 1}}), seed);
    const auto fresh = osfl_connect(st, {1}, 0, 4);
    ASSERT_EQ(fresh.size(), 1u);
    EXPECT_EQ(fresh[0].edge, (Edge{0, 1}));
    EXPECT_EQ(fresh[0].start, 4);
    EXPECT_EQ(osfl_cost(st), Cost(1));
    // Both unit-length tree edges on the path fire once.
    EXPECT_EQ(st.tree_cost(), Cost(2));
  }
}

TEST(SteinerLeasing, EscalationMatchesPerEdgePermitReplay) {
  const Graph g = path_graph(3);
  const auto cat = catalog({{1, 1}, {2, Cost(3, 2)}});
  OsflState st = make(g, cat, 2024);
  const auto edges = st.hst().path_edges(2, 0);
  std::map<int, PermitState> replay;
  for (int e : edges) replay.emplace(e, PermitState(cat));
  std::vector<TreePermitPurchase> expected;
  for (Time t : {0, 1}) {
    osfl_connect(st, {2}, 0, t);
    std::set<int> distinct(edges.begin(), edges.end());
    for (int e : distinct)
      for (const Permit& p : replay.at(e).request(t)) expected.push_back({e, p, t});
  }
  ASSERT_EQ(st.tree_purchases().size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(st.tree_purchases()[i].hst_edge, expected[i].hst_edge);
    EXPECT_EQ(st.tree_purchases()[i].permit, expected[i].permit);
    EXPECT_EQ(st.tree_purchases()[i].step, expected[i].step);
  }
  // Second request: spend in the [0,2) slot reaches 2 >= 3/2 on every edge.
  for (const auto& [e, permits] : st.edge_permits()) {
    EXPECT_TRUE(permits.owned().count(Permit{2, 0}));
    EXPECT_EQ(permits.total_cost(), Cost(1) + Cost(1) + Cost(3, 2));
  }
  // osfl_cost recomputed from the purchase log: each fired permit leases the
  // distinct graph edges of its realization once.
  std::set<std::tuple<Edge, int, Time>> keys;
  Cost from_log = 0;
  for (const auto& tp : st.tree_purchases()) {
    const HstCluster& c = st.hst().cluster(tp.hst_edge);
    const auto sp = shortest_path(g, c.center, st.hst().cluster(c.parent).center);
    for (std::size_t i = 0; i + 1 < sp.size(); ++i)
      if (keys.emplace(normalized({sp[i], sp[i + 1]}), tp.permit.lease, tp.permit.start).second)
        from_log += cat[tp.permit.lease].cost;
  }
  EXPECT_EQ(osfl_cost(st), from_log);
  EXPECT_TRUE(reaches(g, st.active_edges(1), 2, 0));
}

TEST(SteinerLeasing, ConnectsTerminalsWithActiveLeases) {
  std::mt19937_64 rng(8);
  GenParams p;
  p.kind = GraphKind::RandomGnpConnected;
  p.steps = 0;
  for (int trial = 0; trial < 60; ++trial) {
    p.n = std::uniform_int_distribution<int>(2, 14)(rng);
    p.p = 0.3;
    const Instance inst = gen_instance(p, rng());
    OsflState st = make(inst.graph, random_catalog(3, rng), rng());
    Time t = 0;
    for (int step = 0; step < 12; ++step) {
      t += std::uniform_int_distribution<Time>(0, 3)(rng);
      const NodeId root = std::uniform_int_distribution<NodeId>(0, p.n - 1)(rng);
      std::vector<NodeId> terms;
      for (NodeId v = 0; v < p.n; ++v)
        if (std::bernoulli_distribution(0.3)(rng)) terms.push_back(v);
      osfl_connect(st, terms, root, t);
      const auto active = st.active_edges(t);
      for (NodeId r : terms) EXPECT_TRUE(reaches(inst.graph, active, r, root));
    }
    std::set<std::tuple<Edge, int, Time>> keys;
    for (const EdgeLease& e : st.ledger()) {
      EXPECT_TRUE(keys.emplace(e.edge, e.lease, e.start).second);
      EXPECT_EQ(e.start % st.catalog()[e.lease].duration, 0);
    }
  }
}

TEST(SteinerLeasing, RejectsTimeGoingBackwards) {
  OsflState st = make(path_graph(3), catalog({{1, 1}}), 1);
  osfl_connect(st, {1}, 0, 3);
  try {
    osfl_connect(st, {2}, 0, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonMonotonicTime);
  }
}

// With one lease longer than the horizon every tree edge fires at most once,
// so on a tree the ledger costs c_1 per distinct graph edge of the realized
// terminal-root walks, and never less than the union of terminal-root paths
// (the cheapest Steiner tree on a tree).
TEST(SteinerLeasing, InfiniteLeaseOnTreesMatchesRealizedUnion) {
  std::mt19937_64 rng(99);
  const auto cat = catalog({{64, 3}});
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    const Graph g = random_tree(n, rng);
    OsflState st = make(g, cat, rng());
    const NodeId root = std::uniform_int_distribution<NodeId>(0, n - 1)(rng);
    std::set<Edge> realized, steiner;
    for (Time t = 0; t < 6; ++t) {
      std::vector<NodeId> terms{std::uniform_int_distribution<NodeId>(0, n - 1)(rng)};
      osfl_connect(st, terms, root, t);
      for (NodeId r : terms) {
        for (const Edge& e : realize_tree_path(st.hst(), r, root, g)) realized.insert(normalized(e));
        const auto sp = shortest_path(g, r, root);
        for (std::size_t i = 0; i + 1 < sp.size(); ++i) steiner.insert(normalized({sp[i], sp[i + 1]}));
      }
      EXPECT_EQ(osfl_cost(st), cat[1].cost * Cost(static_cast<std::int64_t>(realized.size())));
      EXPECT_GE(osfl_cost(st), cat[1].cost * Cost(static_cast<std::int64_t>(steiner.size())));
    }
  }
}
