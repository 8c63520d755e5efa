#include <gtest/gtest.h>

#include "emanet/aodv.hpp"
#include "test_util.hpp"

using namespace emanet;
using namespace emanet::testing;

TEST(AodvArithmetic, NetTraversalTime) {
  AodvParams p;
  EXPECT_DOUBLE_EQ(net_traversal_time(p), 2.8);
  p.net_diameter = 1;
  EXPECT_DOUBLE_EQ(net_traversal_time(p), 0.08);
  p.net_diameter = 35;
  p.node_traversal_time = 0.08;
  EXPECT_DOUBLE_EQ(net_traversal_time(p), 5.6);
}

TEST(AodvArithmetic, SizeEstimate) {
  EXPECT_EQ(estimate_size_from_hops(0, 1.0), 0);
  EXPECT_EQ(estimate_size_from_hops(4, 1.0), 16);
  EXPECT_EQ(estimate_size_from_hops(3, 0.67), 6);  // 6.03
  EXPECT_EQ(estimate_size_from_hops(4, 0.67), 11);  // 10.72
}

namespace {
struct Chain {
  IdealNetwork net;
  explicit Chain(int n, AodvParams p = {}) : net(chain_graph(n), 1e-3, 1) {
    install<AodvAgent>(net, p);
    net.start();
  }
  AodvAgent* at(NodeId v) { return agent_at<AodvAgent>(net, v); }
};
}  // namespace

TEST(AodvAgent, DiscoversAndDelivers) {
  Chain c(4);
  c.net.send_data(0, 3, 0, 0);
  c.net.run_until(1.0);
  ASSERT_EQ(c.net.delivered().size(), 1u);
  EXPECT_EQ(c.net.delivered()[0].as<DataHeader>().hops, 3);
  ASSERT_NE(c.at(0)->route(3), nullptr);
  EXPECT_EQ(c.at(0)->route(3)->hops, 3);
  EXPECT_EQ(c.at(0)->route(3)->next_hop, 1);
  // Intermediate nodes gained forward routes from the RREP.
  ASSERT_NE(c.at(1)->route(3), nullptr);
  EXPECT_EQ(c.at(1)->route(3)->hops, 2);
  // Reverse route at the destination, built from the RREQ.
  ASSERT_NE(c.at(3)->route(0), nullptr);
  EXPECT_EQ(c.at(3)->route(0)->hops, 3);
  EXPECT_EQ(c.at(0)->discoveries(), 1u);
}

TEST(AodvAgent, ValidRouteSkipsDiscovery) {
  Chain c(4);
  c.net.send_data(0, 3, 0, 0);
  c.net.run_until(1.0);
  const auto rreqs = c.net.transmissions(PacketKind::Rreq);
  c.net.send_data(0, 3, 0, 1);
  c.net.run_until(2.0);
  EXPECT_EQ(c.net.transmissions(PacketKind::Rreq), rreqs);
  EXPECT_EQ(c.net.delivered().size(), 2u);
}

TEST(AodvAgent, FloodRelaysEachRequestOnce) {
  Chain c(5);
  c.net.send_data(0, 4, 0, 0);
  c.net.run_until(1.0);
  // Origin plus relays 1..3; the destination answers instead of relaying.
  EXPECT_EQ(c.net.transmissions(PacketKind::Rreq), 4u);
  EXPECT_EQ(c.net.transmissions(PacketKind::Rrep), 4u);
}

TEST(AodvAgent, UnreachableDropsAfterRetries) {
  DenseGraph g = {{1}, {0}, {}};
  IdealNetwork net(g, 1e-3, 1);
  AodvParams p;
  install<AodvAgent>(net, p);
  net.start();
  net.send_data(0, 2, 0, 0);
  net.send_data(0, 2, 0, 1);
  // 2.8 + 5.6 + 11.2 s of waiting across the three attempts.
  net.run_until(19.5);
  EXPECT_TRUE(net.drops().empty());
  net.run_until(20.0);
  ASSERT_EQ(net.drops().size(), 2u);
  for (const auto& d : net.drops()) EXPECT_EQ(d.reason, DropReason::DiscoveryFailed);
  EXPECT_EQ(agent_at<AodvAgent>(net, 0)->discoveries(), 3u);
}

TEST(AodvAgent, RoutesExpire) {
  AodvParams p;
  Chain c(3, p);
  c.net.send_data(0, 2, 0, 0);
  c.net.run_until(1.0);
  ASSERT_NE(c.at(0)->route(2), nullptr);
  c.net.run_until(1.0 + p.active_route_timeout);
  EXPECT_EQ(c.at(0)->route(2), nullptr);
}

TEST(AodvAgent, HopCountsMatchBfsUnderUniformDelay) {
  int pairs = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = random_graph(15, 0.18, seed);
    const auto d = reference_hops(g, 0);
    for (NodeId t = 1; t < 15; ++t) {
      if (d[t] < 0) continue;
      IdealNetwork net(g, 1e-3, seed);
      install<AodvAgent>(net, AodvParams{});
      net.start();
      net.send_data(0, t, 0, 0);
      net.run_until(1.0);
      const auto* r = agent_at<AodvAgent>(net, 0)->route(t);
      ASSERT_NE(r, nullptr);
      ASSERT_EQ(r->hops, d[t]) << "seed " << seed << " dst " << t;
      ASSERT_EQ(net.delivered().size(), 1u);
      ++pairs;
    }
  }
  EXPECT_GT(pairs, 100);
}

TEST(AodvAgent, StaticNetworkDiscoversWithinTraversalTime) {
  auto c = default_config();
  c.protocol = ProtocolKind::Aodv;
  c.nodes = 10;
  c.placement = Placement::Connected;
  c.mobility.v_min = c.mobility.v_max = 0.0;
  c.traffic.flows = 0;
  Scenario sc(c);
  sc.run_until(1.0);
  const double t0 = sc.sim().now();
  for (NodeId d = 1; d < 10; ++d) sc.world().send_data(0, d, d, 0, 512);
  sc.run_until(t0 + net_traversal_time(c.aodv));
  auto* a = dynamic_cast<AodvAgent*>(sc.agent(0));
  for (NodeId d = 1; d < 10; ++d) EXPECT_NE(a->route(d), nullptr) << d;
}
