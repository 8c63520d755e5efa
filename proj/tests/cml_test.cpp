#include <gtest/gtest.h>

#include "emanet/acceptance.hpp"
#include "emanet/cml.hpp"
#include "test_util.hpp"

using namespace emanet;
using namespace emanet::testing;

TEST(Nht, Examples) {
  EXPECT_EQ(derive_nht(10, 1.0), 4);
  EXPECT_EQ(derive_nht(1, 1.0), 1);
  EXPECT_EQ(derive_nht(10, 0.4), 5);
  EXPECT_EQ(derive_nht(8, 0.67), 4);
}

namespace {
struct CmlNet {
  IdealNetwork net;
  CmlNet(DenseGraph g, int x, Phase initial) : net(std::move(g), 1e-3, 1) {
    CmlParams p;
    p.x = x;
    p.k = 0.67;
    p.initial_phase = initial;
    install<CmlAgent>(net, p);
    net.start();
  }
  CmlAgent* at(NodeId v) { return agent_at<CmlAgent>(net, v); }
  int confirmed() const { return confirmed_shifts(net.transitions()); }
  bool all(CmlState s) {
    for (NodeId v = 0; v < static_cast<NodeId>(net.size()); ++v) {
      if (at(v)->state() != s) return false;
    }
    return true;
  }
};
}  // namespace

TEST(CmlAgent, SmallNetworkStaysProactiveWithoutExtraTraffic) {
  CmlNet c(ring_graph(10), 0, Phase::Proactive);
  c.net.run_until(120.0);
  EXPECT_TRUE(c.net.transitions().empty());
  EXPECT_TRUE(c.all(CmlState::Proactive));
  EXPECT_EQ(c.net.transmissions(PacketKind::Cp), 0u);
  EXPECT_EQ(c.net.transmissions(PacketKind::HcReq), 0u);
  EXPECT_EQ(c.net.transmissions(PacketKind::Rreq), 0u);
}

TEST(CmlAgent, GrowthPastThresholdShiftsEveryone) {
  CmlNet c(ring_graph(12), 0, Phase::Proactive);
  c.net.run_until(120.0);
  EXPECT_TRUE(c.all(CmlState::Reactive));
  EXPECT_GE(c.confirmed(), 12);
  int cp_triggered = 0;
  double first = 1e9, last = 0;
  for (const auto& t : c.net.transitions()) {
    if (!is_confirmed_shift(t)) continue;
    first = std::min(first, t.time);
    last = std::max(last, t.time);
    cp_triggered += t.trigger.rfind("cp:", 0) == 0;
  }
  // One CP flood carries the rest within a network traversal.
  EXPECT_LE(last - first, net_traversal_time(AodvParams{}));
  EXPECT_GT(cp_triggered, 0);
  EXPECT_TRUE(c.at(0)->timer_active() || c.net.sim().now() - first >= 30.0);
}

TEST(CmlAgent, HysteresisBandAbsorbsSmallExcess) {
  CmlNet c(ring_graph(12), 2, Phase::Proactive);
  c.net.run_until(120.0);
  EXPECT_EQ(c.confirmed(), 0);
  // Nodes keep re-checking, so some may be mid-check; none has left p.
  for (NodeId v = 0; v < 12; ++v) EXPECT_EQ(c.at(v)->phase(), Phase::Proactive) << v;
  bool resumed = false;
  for (const auto& t : c.net.transitions()) resumed = resumed || t.trigger == "resumed:tc-count";
  EXPECT_TRUE(resumed);
}

TEST(CmlAgent, ExcessBeyondBandConfirms) {
  CmlNet c(ring_graph(13), 2, Phase::Proactive);
  c.net.run_until(120.0);
  EXPECT_TRUE(c.all(CmlState::Reactive));
}

TEST(CmlAgent, OscillationTimerBlocksImmediateReturn) {
  CmlNet c(ring_graph(12), 0, Phase::Proactive);
  c.net.run_until(120.0);
  ASSERT_TRUE(c.all(CmlState::Reactive));
  EXPECT_GE(min_confirmed_gap(c.net.transitions()), 30.0);
}

TEST(CmlAgent, SmallDiameterProbesConfirmProactive) {
  CmlNet c(complete_graph(5), 0, Phase::Reactive);
  c.net.send_data(0, 4, 0, 0);
  c.net.run_until(0.5);
  EXPECT_EQ(c.at(0)->state(), CmlState::TowardProactive);
  // Still routing reactively while confirming.
  EXPECT_NE(c.at(0)->aodv(), nullptr);
  c.net.run_until(60.0);
  EXPECT_TRUE(c.all(CmlState::Proactive));
  EXPECT_EQ(c.net.transmissions(PacketKind::HcRep), 0u);
  bool silent = false;
  for (const auto& t : c.net.transitions()) silent = silent || t.trigger == "confirmed:probe-silent";
  EXPECT_TRUE(silent);
}

TEST(CmlAgent, LongChainAnswersProbes) {
  CmlNet c(chain_graph(20), 0, Phase::Reactive);
  c.net.send_data(0, 1, 0, 0);
  c.net.run_until(0.5);
  ASSERT_EQ(c.at(0)->state(), CmlState::TowardProactive);
  c.net.run_until(60.0);
  EXPECT_EQ(c.at(0)->state(), CmlState::Reactive);
  EXPECT_EQ(c.confirmed(), 0);
  EXPECT_GT(c.net.transmissions(PacketKind::HcRep), 0u);
  bool resumed = false;
  for (const auto& t : c.net.transitions()) resumed = resumed || t.trigger == "resumed:probe-answered";
  EXPECT_TRUE(resumed);
}

TEST(CmlAgent, EchoesDoNotSpawnEchoes) {
  // Probe from one end of a 12-node chain: the original reaches 4 relays,
  // each of which echoes once; echoes are relayed but never re-echoed.
  CmlNet c(chain_graph(12), 0, Phase::Reactive);
  c.net.send_data(0, 1, 0, 0);
  c.net.run_until(0.5);
  ASSERT_EQ(c.at(0)->state(), CmlState::TowardProactive);
  // Count by hand: a flood with budget b from node r is sent by r and by
  // every node within b hops of it; the original probe stops its relays at
  // NHT hops and each relay adds exactly one echo flood.
  const int nht = c.at(0)->probe_ttl();
  auto flood = [&](int r) {
    int senders = 1;
    for (int v = 0; v < 12; ++v) senders += v != r && std::abs(v - r) <= nht;
    return senders;
  };
  int expected = 1 + nht;  // original: origin + relays at distance 1..nht
  for (int r = 1; r <= nht; ++r) expected += flood(r);
  c.net.run_until(5.0);
  EXPECT_EQ(c.net.transmissions(PacketKind::HcReq), static_cast<std::uint64_t>(expected));
}

TEST(CmlAgent, ProactiveFiveNodeLoadMatchesOlsr) {
  auto run = [](bool cml) {
    IdealNetwork net(complete_graph(5), 1e-3, 9);
    if (cml) {
      CmlParams p;
      p.k = 0.67;
      install<CmlAgent>(net, p);
    } else {
      install<OlsrAgent>(net, OlsrParams{});
    }
    net.start();
    net.run_until(100.0);
    std::vector<std::uint64_t> v;
    for (std::size_t k = 0; k < kPacketKindCount; ++k) v.push_back(net.transmissions(static_cast<PacketKind>(k)));
    return v;
  };
  EXPECT_EQ(run(true), run(false));
}
