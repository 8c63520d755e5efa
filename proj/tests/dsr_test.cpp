#include <gtest/gtest.h>

#include "emanet/dsr.hpp"
#include "test_util.hpp"

using namespace emanet;
using namespace emanet::testing;

namespace {
struct Net {
  IdealNetwork net;
  explicit Net(DenseGraph g) : net(std::move(g), 1e-3, 1) {
    install<DsrAgent>(net, DsrParams{});
    net.start();
  }
  DsrAgent* at(NodeId v) { return agent_at<DsrAgent>(net, v); }
};
}  // namespace

TEST(DsrAgent, ChainDiscoveryCarriesFullRoute) {
  Net n(chain_graph(3));
  n.net.send_data(0, 2, 0, 0);
  n.net.run_until(1.0);
  ASSERT_NE(n.at(0)->best_path(2), nullptr);
  EXPECT_EQ(*n.at(0)->best_path(2), (Path{0, 1, 2}));
  ASSERT_EQ(n.net.delivered().size(), 1u);
  EXPECT_EQ(n.net.delivered()[0].as<DataHeader>().hops, 2);
}

TEST(DsrAgent, CachedPathSkipsFlood) {
  Net n(chain_graph(4));
  n.net.send_data(0, 3, 0, 0);
  n.net.run_until(1.0);
  const auto floods = n.net.transmissions(PacketKind::DsrRreq);
  n.net.send_data(0, 3, 0, 1);
  n.net.run_until(2.0);
  EXPECT_EQ(n.net.transmissions(PacketKind::DsrRreq), floods);
  EXPECT_EQ(n.net.delivered().size(), 2u);
  EXPECT_EQ(n.at(0)->discoveries(), 1u);
}

TEST(DsrAgent, RouteRecordLoopGuard) {
  // Triangle: each node relays a given request at most once.
  Net n(complete_graph(3));
  DenseGraph g = complete_graph(3);
  g.push_back({});
  n.net.set_graph(g);
  n.net.send_data(0, 1, 0, 0);
  n.net.run_until(1.0);
  EXPECT_LE(n.net.transmissions(PacketKind::DsrRreq), 2u);
}

TEST(DsrAgent, OneHopRouteIsOneTransmission) {
  Net n(chain_graph(2));
  n.net.send_data(0, 1, 0, 0);
  n.net.run_until(1.0);
  ASSERT_EQ(n.net.delivered().size(), 1u);
  EXPECT_EQ(n.net.delivered()[0].as<DataHeader>().hops, 1);
}

TEST(DsrAgent, BrokenLinkPurgesAndReportsBack) {
  Net n(chain_graph(4));
  n.net.send_data(0, 3, 0, 0);
  n.net.run_until(1.0);
  ASSERT_EQ(n.net.delivered().size(), 1u);
  ASSERT_NE(n.at(1)->best_path(3), nullptr);

  // Break 1-2, the middle link.
  n.net.set_graph(DenseGraph{{1}, {0}, {3}, {2}});
  n.net.send_data(0, 3, 0, 1);
  n.net.run_until(2.0);
  ASSERT_EQ(n.net.drops().size(), 1u);
  EXPECT_EQ(n.net.drops()[0].reason, DropReason::LinkFailure);
  EXPECT_EQ(n.net.transmissions(PacketKind::DsrRerr), 1u);
  EXPECT_EQ(n.at(1)->best_path(3), nullptr);
  EXPECT_EQ(n.at(0)->best_path(3), nullptr);
  EXPECT_EQ(n.at(0)->cached_paths(3), 0u);
}
