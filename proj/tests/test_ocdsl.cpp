#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "brute_force.hpp"

using namespace leaselab;
using namespace leaselab::testing;

namespace {

const Graph kSingle = Graph::build(1, std::vector<Edge>{});

double weight_sum(const OcdslState& st, NodeId u, Time t) {
  double s = 0.0;
  for (const Triplet& tr : dominators(st.graph(), u, t, st.catalog()).triplets) s += st.weight(tr);
  return s;
}

}  // namespace

TEST(Ocdsl, ThresholdSampleCount) {
  EXPECT_EQ(threshold_sample_count(1), 2);
  EXPECT_EQ(threshold_sample_count(3), 4);
  EXPECT_EQ(threshold_sample_count(4), 6);
  EXPECT_EQ(threshold_sample_count(15), 8);
}

// Expected weights replayed exactly with rationals by tests/oracles/growth_replay.py.
TEST(Ocdsl, GrowFractionalSingleDominator) {
  OcdslState st(kSingle, catalog({{1, 1}}), 1);
  EXPECT_EQ(st.grow_fractional(0, 0), 1);
  EXPECT_DOUBLE_EQ(st.weight(Triplet{0, 1, 0}), 1.0);
}

TEST(Ocdsl, GrowFractionalTwoDominators) {
  OcdslState st(path_graph(2), catalog({{1, 1}}), 1);
  EXPECT_EQ(st.grow_fractional(0, 0), 1);
  EXPECT_DOUBLE_EQ(st.weight(Triplet{0, 1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(st.weight(Triplet{1, 1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(weight_sum(st, 0, 0), 1.0);
}

TEST(Ocdsl, GrowFractionalNeedsSecondRound) {
  // |W_u| = 4, |L| = 2, costs (1, 2): round one sums to 3/8, round two to 17/16.
  OcdslState st(path_graph(2), catalog({{1, 1}, {2, 2}}), 1);
  EXPECT_EQ(st.grow_fractional(0, 0), 2);
  EXPECT_DOUBLE_EQ(st.weight(Triplet{0, 1, 0}), 0.375);
  EXPECT_DOUBLE_EQ(st.weight(Triplet{1, 1, 0}), 0.375);
  EXPECT_DOUBLE_EQ(st.weight(Triplet{0, 2, 0}), 0.15625);
  EXPECT_DOUBLE_EQ(st.weight(Triplet{1, 2, 0}), 0.15625);
  EXPECT_DOUBLE_EQ(weight_sum(st, 0, 0), 1.0625);
  ASSERT_EQ(st.growth_log().size(), 1u);
  EXPECT_EQ(st.growth_log()[0].rounds, 2);
}

TEST(Ocdsl, RoundingBuysFullWeightNeverZeroWeight) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    OcdslState st(kSingle, catalog({{1, 1}}), seed);
    st.grow_fractional(0, 3);
    const auto bought = st.round_purchases(0, 3);
    ASSERT_EQ(bought.size(), 1u);
    EXPECT_EQ(bought[0].triplet, (Triplet{0, 1, 3}));
    EXPECT_EQ(bought[0].phase, Phase::Rounding);
  }
  OcdslState st(path_graph(3), catalog({{1, 1}}), 5);
  EXPECT_TRUE(st.round_purchases(1, 0).empty());  // all weights zero
  EXPECT_TRUE(st.thresholds().empty());
}

TEST(Ocdsl, ThresholdsAreFrozen) {
  OcdslState st(path_graph(3), catalog({{1, 1}}), 5);
  const Triplet tr{1, 1, 0};
  const double mu = st.threshold(tr);
  EXPECT_GE(mu, 0.0);
  EXPECT_LT(mu, 1.0);
  EXPECT_EQ(st.threshold(tr), mu);
  OcdslState again(path_graph(3), catalog({{1, 1}}), 5);
  EXPECT_EQ(again.threshold(tr), mu);
}

// P(w > min of m uniforms) = 1 - (1 - w)^m; for n = 3, m = 4 and w = 1/2 this is 15/16.
TEST(Ocdsl, RoundingProbabilityMatchesClosedForm) {
  std::mt19937_64 rng(123);
  const int m = threshold_sample_count(3);
  int hits = 0;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) hits += 0.5 > sample_threshold(rng, m);
  EXPECT_NEAR(static_cast<double>(hits) / samples, 0.9375, 0.005);
}

TEST(Ocdsl, Fallback) {
  OcdslState st(star_graph(4), catalog({{1, 1}, {4, 2}}), 9);
  const auto first = st.fallback(2, 1);
  ASSERT_TRUE(first.has_value());
  EXPECT_EQ(first->triplet, (Triplet{2, 1, 1}));
  EXPECT_EQ(first->phase, Phase::Fallback);
  EXPECT_TRUE(st.has_active_dominator(2, 1));
  EXPECT_FALSE(st.fallback(2, 1).has_value());
  // A neighbor's lease dominates too.
  EXPECT_TRUE(st.has_active_dominator(0, 1));
  EXPECT_FALSE(st.fallback(0, 1).has_value());
}

TEST(Ocdsl, RepresentativeIsSelf) {
  OcdslState st(path_graph(3), catalog({{1, 1}}), 1);
  const auto choice = st.select_representatives({Triplet{1, 1, 0}}, {1}, 0);
  ASSERT_EQ(choice.representatives.size(), 1u);
  EXPECT_EQ(choice.representatives[0], (Triplet{1, 1, 0}));
  EXPECT_EQ(choice.purchases.size(), 1u);
}

TEST(Ocdsl, RepresentativeForStarCenterIsSmallestLeaf) {
  OcdslState st(star_graph(4), catalog({{2, 1}}), 1);
  const auto choice = st.select_representatives({Triplet{0, 1, 0}}, {1, 2, 3}, 1);
  ASSERT_EQ(choice.representatives.size(), 1u);
  EXPECT_EQ(choice.representatives[0], (Triplet{1, 1, 0}));
  EXPECT_EQ(choice.assignment.at(Triplet{0, 1, 0}), (Triplet{1, 1, 0}));
}

// Gadget p - a - u - b - q: dominators a, b share request node u. Greedy
// replay: p covers {a}, u covers {a, b}, q covers {b}, so u goes first and
// alone represents both.
TEST(Ocdsl, RepresentativeGreedyPrefersSharedNode) {
  const Graph g = path_graph(5);
  const std::vector<Triplet> chosen{{1, 1, 0}, {3, 1, 0}};
  const std::vector<NodeId> requests{0, 2, 4};
  std::map<NodeId, int> cover;
  for (NodeId u : requests)
    for (const Triplet& tr : chosen) cover[u] += g.dominates(tr.node, u);
  EXPECT_EQ(cover, (std::map<NodeId, int>{{0, 1}, {2, 2}, {4, 1}}));

  OcdslState st(g, catalog({{1, 1}}), 1);
  const auto choice = st.select_representatives(chosen, requests, 0);
  ASSERT_EQ(choice.representatives.size(), 1u);
  EXPECT_EQ(choice.representatives[0].node, 2);
}

TEST(Ocdsl, RepresentativeErrorOnUncoverableDominator) {
  OcdslState st(path_graph(4), catalog({{1, 1}}), 1);
  try {
    st.select_representatives({Triplet{3, 1, 0}}, {0}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UncoveredDominator);
  }
}

TEST(Ocdsl, ServeSingleNode) {
  OcdslState st(kSingle, catalog({{1, 1}}), 4);
  const StepReport r = st.serve_request({0}, 7);
  ASSERT_EQ(r.purchases.size(), 1u);
  EXPECT_EQ(r.purchases[0].triplet, (Triplet{0, 1, 7}));
  EXPECT_EQ(st.total_cost(), Cost(1));
  EXPECT_TRUE(r.terminals.empty());
  EXPECT_EQ(r.root, 0);
}

TEST(Ocdsl, ServeStarIsFeasibleAndAtLeastOptimal) {
  Instance inst;
  inst.graph = star_graph(4);
  inst.catalog = catalog({{2, 1}});
  inst.requests = {Request{1, {1, 2, 3}}};
  const Cost opt = offline_opt(inst).cost;
  EXPECT_EQ(opt, Cost(1));
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    OcdslState st(inst.graph, inst.catalog, seed);
    const StepReport r = st.serve_request({1, 2, 3}, 1);
    EXPECT_TRUE(check_solution(inst, st.ledger()));
    EXPECT_GE(st.total_cost(), opt);
    EXPECT_EQ(r.phase1_cost + r.phase2_cost, st.total_cost());
  }
}

TEST(Ocdsl, RepeatWhileLeasesActiveBuysNothing) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    OcdslState st(cycle_graph(5), catalog({{2, 1}, {8, 3}}), seed);
    st.serve_request({0, 2}, 0);
    const StepReport again = st.serve_request({0, 2}, 1);
    EXPECT_TRUE(again.purchases.empty());
    EXPECT_TRUE(again.terminals.empty());
    EXPECT_EQ(again.phase1_cost, Cost(0));
  }
}

TEST(Ocdsl, ServeErrors) {
  OcdslState st(path_graph(3), catalog({{1, 1}}), 1);
  auto kind = [&](std::vector<NodeId> d, Time t) {
    try {
      st.serve_request(d, t);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::BadInput;
  };
  EXPECT_EQ(kind({}, 0), ErrorKind::EmptyRequest);
  st.serve_request({0}, 2);
  EXPECT_EQ(kind({1}, 2), ErrorKind::NonMonotonicTime);
  EXPECT_EQ(kind({1}, 1), ErrorKind::NonMonotonicTime);
  EXPECT_EQ(kind({7}, 3), ErrorKind::BadNodeId);
}

// Invariants checked on every step of random runs.
TEST(Ocdsl, RunInvariants) {
  std::mt19937_64 rng(2718);
  const GraphKind kinds[] = {GraphKind::RandomGnpConnected, GraphKind::Path, GraphKind::Star, GraphKind::Grid,
                             GraphKind::PpAdversary};
  for (int trial = 0; trial < 150; ++trial) {
    GenParams p;
    p.kind = kinds[trial % 5];
    p.n = std::uniform_int_distribution<int>(1, 12)(rng);
    p.rows = std::uniform_int_distribution<int>(1, 3)(rng);
    p.cols = std::uniform_int_distribution<int>(1, 4)(rng);
    p.steps = std::uniform_int_distribution<int>(1, 8)(rng);
    p.time_step = std::uniform_int_distribution<int>(1, 3)(rng);
    p.num_leases = std::uniform_int_distribution<int>(1, 3)(rng);
    const Instance inst = gen_instance(p, rng());
    OcdslState st(inst.graph, inst.catalog, rng());
    std::unordered_map<Triplet, double, TripletHash> before;
    for (const Request& r : inst.requests) {
      const std::size_t growth_before = st.growth_log().size();
      const StepReport rep = st.serve_request(r.nodes, r.t);
      for (const auto& [tr, w] : before) EXPECT_GE(st.weight(tr), w);
      before = st.weights();
      for (std::size_t k = growth_before; k < st.growth_log().size(); ++k) EXPECT_GE(st.growth_log()[k].weight_sum, 1.0);
      for (const Triplet& rt : rep.representatives) EXPECT_EQ(rt.lease, 1);
      const auto active = st.ledger().active_nodes(inst.graph, inst.catalog, r.t);
      EXPECT_TRUE(check_feasible_step(inst.graph, active, r.nodes).ok);
      for (const Purchase& pu : rep.purchases) {
        if (pu.phase != Phase::Connection) continue;
        bool matched = false;
        for (const EdgeLease& e : rep.edge_leases)
          matched = matched || (pu.triplet.lease == e.lease && pu.triplet.start == e.start &&
                                (pu.triplet.node == e.edge.first || pu.triplet.node == e.edge.second));
        EXPECT_TRUE(matched);
      }
    }
    EXPECT_LE(st.phase2_cost(), Cost(2) * osfl_cost(st.osfl()));
    EXPECT_TRUE(check_solution(inst, st.ledger()));
    for (const LedgerEntry& e : st.ledger().entries()) EXPECT_EQ(e.triplet.start % inst.catalog[e.triplet.lease].duration, 0);
  }
}

TEST(Ocdsl, DominationOnlyModeDominates) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    GenParams p;
    p.kind = GraphKind::RandomGnpConnected;
    p.n = std::uniform_int_distribution<int>(2, 12)(rng);
    p.steps = 6;
    p.num_leases = 3;
    const Instance inst = gen_instance(p, rng());
    OcdslState st(inst.graph, inst.catalog, rng(), CoverMode::DominationOnly);
    for (const Request& r : inst.requests) {
      const StepReport rep = st.serve_request(r.nodes, r.t);
      EXPECT_TRUE(rep.representatives.empty());
      EXPECT_EQ(rep.phase2_cost, Cost(0));
    }
    EXPECT_TRUE(check_solution(inst, st.ledger(), CoverMode::DominationOnly));
    EXPECT_TRUE(st.osfl().ledger().empty());
  }
}

TEST(Ocdsl, StepReportJson) {
  OcdslState st(path_graph(4), catalog({{1, 1}, {2, Cost(3, 2)}}), 77);
  const auto j = to_json(st.serve_request({0, 3}, 0));
  for (const char* key : {"t", "D_t", "purchases", "S_t", "representatives", "root", "R_t", "C1", "C2"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["D_t"], nlohmann::json::array({0, 3}));
}

// The fractional cost is the sum over touched triplets of c_l * w.
TEST(Ocdsl, FractionalCost) {
  OcdslState st(path_graph(2), catalog({{1, 1}, {2, 2}}), 1);
  st.grow_fractional(0, 0);
  EXPECT_DOUBLE_EQ(st.fractional_cost(), 2 * (1 * 0.375 + 2 * 0.15625));
}
