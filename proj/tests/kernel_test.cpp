#include <gtest/gtest.h>

#include <sstream>

#include "emanet/kernel.hpp"
#include "emanet/scenario.hpp"

using namespace emanet;

TEST(Simulator, FiresAtScheduledTime) {
  Simulator sim;
  double fired = -1;
  auto h = sim.schedule(5.0, EventKind::Timer, 0, [&] { fired = sim.now(); });
  EXPECT_TRUE(h.valid());
  sim.run_until(10.0);
  EXPECT_DOUBLE_EQ(fired, 5.0);
  EXPECT_DOUBLE_EQ(sim.now(), 10.0);
}

TEST(Simulator, EqualTimesRunFifo) {
  Simulator sim;
  std::string order;
  sim.schedule(3.0, EventKind::Timer, 0, [&] { order += 'A'; });
  sim.schedule(3.0, EventKind::Timer, 0, [&] { order += 'B'; });
  sim.schedule(1.0, EventKind::Timer, 0, [&] { order += 'Z'; });
  sim.run_until(4.0);
  EXPECT_EQ(order, "ZAB");
}

TEST(Simulator, RejectsPastEvents) {
  Simulator sim;
  sim.run_until(2.0);
  EXPECT_THROW(sim.schedule(1.0, EventKind::Timer, 0, [] {}), std::logic_error);
}

TEST(Simulator, CancelSemantics) {
  Simulator sim;
  bool ran = false;
  auto a = sim.schedule(1.0, EventKind::Timer, 0, [&] { ran = true; });
  auto b = sim.schedule(1.0, EventKind::Timer, 0, [] {});
  EXPECT_TRUE(sim.cancel(a));
  EXPECT_FALSE(sim.cancel(a));
  sim.run_until(2.0);
  EXPECT_FALSE(ran);
  EXPECT_FALSE(sim.cancel(b));
}

TEST(Simulator, RunUntilCountsDispatches) {
  Simulator empty;
  EXPECT_EQ(empty.run_until(10.0), 0u);
  EXPECT_DOUBLE_EQ(empty.now(), 10.0);

  Simulator sim;
  for (double t : {1.0, 2.0, 3.0}) sim.schedule(t, EventKind::Timer, 0, [] {});
  EXPECT_EQ(sim.run_until(2.5), 2u);
  EXPECT_EQ(sim.pending(), 1u);
}

TEST(Simulator, SequencesAreUnique) {
  Simulator sim;
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) seen.insert(sim.schedule(1.0, EventKind::Timer, 0, [] {}).sequence);
  EXPECT_EQ(seen.size(), 100u);
}

TEST(Simulator, SameSeedSameTrace) {
  auto trace = [] {
    auto c = default_config();
    c.protocol = ProtocolKind::Aodv;
    c.nodes = 8;
    c.duration = 40.0;
    c.warmup = 10.0;
    std::ostringstream out;
    run_scenario(c, &out);
    return out.str();
  };
  const auto a = trace();
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, trace());
}

TEST(RandomStream, ForksAreIndependentAndStable) {
  RandomStream root(42);
  auto a = root.fork("x", 1), b = root.fork("x", 1), c = root.fork("x", 2);
  const auto va = a.next_u64();
  EXPECT_EQ(va, b.next_u64());
  EXPECT_NE(va, c.next_u64());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(a.below(7), 7u);
  }
}
