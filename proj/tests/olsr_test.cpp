#include <gtest/gtest.h>

#include <set>

#include "emanet/olsr.hpp"
#include "test_util.hpp"

using namespace emanet;
using namespace emanet::testing;

TEST(MprSelection, StarNeedsOneRelay) {
  const std::set<NodeId> one = {1, 2, 3};
  const std::map<NodeId, std::set<NodeId>> two = {{1, {4, 5, 6}}, {2, {}}, {3, {}}};
  EXPECT_EQ(select_mprs(0, one, two), (std::set<NodeId>{1}));
}

TEST(MprSelection, NoTwoHopNoRelays) {
  EXPECT_TRUE(select_mprs(0, {1, 2}, {{1, {0, 2}}, {2, {0, 1}}}).empty());
}

TEST(MprSelection, CoversRandomTwoHopSets) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto g = random_graph(15, 0.2, seed);
    for (NodeId self = 0; self < 15; ++self) {
      std::set<NodeId> one(g[self].begin(), g[self].end());
      std::map<NodeId, std::set<NodeId>> two;
      for (auto n : one) two[n] = std::set<NodeId>(g[n].begin(), g[n].end());
      const auto mprs = select_mprs(self, one, two);
      for (auto m : mprs) ASSERT_TRUE(one.count(m));
      const auto d = reference_hops(g, self);
      for (NodeId w = 0; w < 15; ++w) {
        if (d[w] != 2) continue;
        bool covered = false;
        for (auto m : mprs) covered = covered || std::count(g[m].begin(), g[m].end(), w) > 0;
        ASSERT_TRUE(covered) << "seed " << seed << " self " << self << " two-hop " << w;
      }
    }
  }
}

TEST(Routes, ChainAndPartition) {
  DenseGraph g = {{1}, {0, 2}, {1}, {}};
  const auto table = compute_routes(0, g);
  ASSERT_TRUE(table.count(2));
  EXPECT_EQ(table.at(2).next_hop, 1);
  EXPECT_EQ(table.at(2).hops, 2);
  EXPECT_FALSE(table.count(3));
  EXPECT_EQ(reachable_count(table), 3);
  EXPECT_EQ(reachable_count(compute_routes(3, g)), 1);
}

TEST(Routes, ReachableInPartitions) {
  DenseGraph g = complete_graph(10);
  EXPECT_EQ(reachable_count(compute_routes(0, g)), 10);
  // 4 + 6 split
  DenseGraph split(10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      if (i != j && (i < 4) == (j < 4)) split[i].push_back(j);
    }
  }
  EXPECT_EQ(reachable_count(compute_routes(2, split)), 4);
  EXPECT_EQ(reachable_count(compute_routes(7, split)), 6);
}

TEST(Routes, MatchBfsOnRandomGraphs) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto g = random_graph(20, 0.12, seed);
    Adjacency edges;
    for (NodeId u = 0; u < 20; ++u) {
      for (auto v : g[u]) edges[u].insert(v);
    }
    for (NodeId s = 0; s < 20; ++s) {
      const auto d = reference_hops(g, s);
      const auto dense = compute_routes(s, g);
      const auto sparse = compute_routes(s, edges);
      for (NodeId t = 0; t < 20; ++t) {
        if (t == s) continue;
        if (d[t] < 0) {
          ASSERT_FALSE(dense.count(t));
          continue;
        }
        ASSERT_EQ(dense.at(t).hops, d[t]);
        ASSERT_EQ(sparse.at(t).hops, d[t]);
        ASSERT_EQ(dense.at(t).next_hop, sparse.at(t).next_hop);
        const auto nh = dense.at(t).next_hop;
        ASSERT_TRUE(std::count(g[s].begin(), g[s].end(), nh));
        ASSERT_EQ(reference_hops(g, nh)[t], d[t] - 1);
      }
    }
  }
}

TEST(OlsrAgent, ConvergesOnConnectedGraph) {
  const auto g = random_graph(10, 0.3, 11);
  ASSERT_TRUE(connected(g));
  IdealNetwork net(g, 1e-3, 1);
  install<OlsrAgent>(net, OlsrParams{});
  net.start();
  net.run_until(30.0);
  for (NodeId v = 0; v < 10; ++v) {
    auto* a = agent_at<OlsrAgent>(net, v);
    EXPECT_EQ(a->reachable(), 10) << v;
    const auto d = reference_hops(g, v);
    for (const auto& [t, r] : a->routes()) EXPECT_EQ(r.hops, d[t]);
    // Every origin that has MPR selectors shows up in the topology database.
    for (NodeId o = 0; o < 10; ++o) {
      if (o != v && !agent_at<OlsrAgent>(net, o)->mpr_selectors().empty()) {
        EXPECT_TRUE(a->topology_origins().count(o)) << v << " lacks TC from " << o;
      }
    }
  }
}

TEST(OlsrAgent, LeafEmitsNoTc) {
  IdealNetwork net(chain_graph(3), 1e-3, 1);
  install<OlsrAgent>(net, OlsrParams{});
  net.start();
  net.run_until(30.0);
  EXPECT_TRUE(agent_at<OlsrAgent>(net, 0)->mpr_selectors().empty());
  // The leaf still needs 1 to reach 2.
  EXPECT_EQ(agent_at<OlsrAgent>(net, 0)->mprs(), std::set<NodeId>{1});
  EXPECT_EQ(agent_at<OlsrAgent>(net, 0)->routes().at(2).next_hop, 1);
  EXPECT_FALSE(agent_at<OlsrAgent>(net, 1)->mpr_selectors().empty());
  EXPECT_TRUE(agent_at<OlsrAgent>(net, 2)->topology_origins().count(1));
  EXPECT_FALSE(agent_at<OlsrAgent>(net, 2)->topology_origins().count(0));
}

TEST(OlsrAgent, SilentNeighbourExpires) {
  IdealNetwork net(chain_graph(3), 1e-3, 1);
  const OlsrParams params;
  install<OlsrAgent>(net, params);
  net.start();
  net.run_until(20.0);
  auto* a = agent_at<OlsrAgent>(net, 0);
  ASSERT_TRUE(a->one_hop().count(1));
  ASSERT_TRUE(a->routes().count(2));
  // B goes silent: its links vanish.
  net.set_graph(DenseGraph{{}, {}, {}});
  net.run_until(20.0 + params.hold_factor * params.hello_interval + 0.1);
  EXPECT_FALSE(a->one_hop().count(1));
  EXPECT_FALSE(a->routes().count(2));
  EXPECT_FALSE(a->routes().count(1));
}

TEST(OlsrAgent, HelloIsNotRelayed) {
  IdealNetwork net(chain_graph(3), 1e-3, 1);
  install<OlsrAgent>(net, OlsrParams{});
  net.start();
  net.run_until(9.0);
  // One HELLO per node every 2 s at most, nothing relayed.
  EXPECT_LE(net.transmissions(PacketKind::Hello), 3u * 5u);
  EXPECT_GE(net.transmissions(PacketKind::Hello), 3u * 4u);
}
