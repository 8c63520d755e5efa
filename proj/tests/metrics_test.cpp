#include <gtest/gtest.h>

#include <cmath>

#include "emanet/metrics.hpp"
#include "emanet/random.hpp"

using namespace emanet;

TEST(MetricLog, AverageDelay) {
  MetricLog one;
  one.record_delivery(0, 0, 1.0, 1.02, 1, 0.0);
  EXPECT_NEAR(*summarize(one, 2, 512).avg_delay, 0.02, 1e-12);

  MetricLog two;
  two.record_delivery(0, 0, 1.0, 1.02, 1, 0.0);
  two.record_delivery(0, 1, 2.0, 2.04, 1, 0.0);
  EXPECT_NEAR(*summarize(two, 2, 512).avg_delay, 0.03, 1e-12);
}

TEST(MetricLog, DuplicatesAreCountedNotRecorded) {
  MetricLog log;
  EXPECT_TRUE(log.record_delivery(0, 0, 1.0, 1.1, 1, 0.0));
  EXPECT_FALSE(log.record_delivery(0, 0, 1.0, 1.3, 2, 0.0));
  EXPECT_EQ(log.duplicates(), 1u);
  EXPECT_EQ(log.records().size(), 1u);
}

TEST(MetricLog, WarmupIsIgnored) {
  MetricLog log(50.0);
  log.record_sent(0, 10.0);
  log.record_delivery(0, 0, 10.0, 10.1, 1, 0.0);
  log.record_control(PacketKind::Hello, 20, 49.9);
  log.record_sent(0, 60.0);
  log.record_control(PacketKind::Hello, 20, 60.0);
  EXPECT_EQ(log.sent_total(), 1u);
  EXPECT_TRUE(log.records().empty());
  EXPECT_EQ(log.control_total().transmissions, 1u);
}

TEST(Jitter, HandExamples) {
  MetricLog flat;
  for (std::uint32_t i = 0; i < 5; ++i) flat.record_delivery(0, i, i, i + 0.01, 1, 0.0);
  EXPECT_NEAR(*flow_jitter(flat, 0), 0.0, 1e-12);

  MetricLog log;
  log.record_delivery(0, 0, 0.0, 0.010, 1, 0.0);
  log.record_delivery(0, 1, 1.0, 1.020, 1, 0.0);
  log.record_delivery(0, 2, 2.0, 2.010, 1, 0.0);
  EXPECT_NEAR(*flow_jitter(log, 0), 0.010, 1e-12);

  MetricLog single;
  single.record_delivery(0, 0, 0.0, 0.01, 1, 0.0);
  EXPECT_FALSE(flow_jitter(single, 0).has_value());
}

TEST(Jitter, MatchesBruteForce) {
  RandomStream rng(17);
  MetricLog log;
  std::map<std::int32_t, std::map<std::uint32_t, double>> delays;
  // Out-of-order arrivals across three flows, with gaps in sequence.
  for (int i = 0; i < 300; ++i) {
    const auto flow = static_cast<std::int32_t>(rng.below(3));
    const auto seq = static_cast<std::uint32_t>(rng.below(1000));
    if (delays[flow].count(seq)) continue;
    const double send = rng.uniform(0, 100), d = rng.uniform(0.001, 0.5);
    delays[flow][seq] = d;
    log.record_delivery(flow, seq, send, send + d, 1, 0.0);
  }
  double sum = 0;
  int flows = 0;
  for (const auto& [f, by_seq] : delays) {
    std::vector<double> v;
    for (const auto& [s, d] : by_seq) v.push_back(d);
    double j = 0;
    for (std::size_t i = 1; i < v.size(); ++i) j += std::fabs(v[i] - v[i - 1]);
    j /= static_cast<double>(v.size() - 1);
    EXPECT_NEAR(*flow_jitter(log, f), j, 1e-9);
    sum += j;
    ++flows;
  }
  EXPECT_NEAR(*summarize(log, 5, 512).avg_jitter, sum / flows, 1e-9);
}

TEST(Summary, HandBuiltTwoFlowLog) {
  MetricLog log;
  log.record_sent(0, 1.0);
  log.record_sent(0, 2.0);
  log.record_sent(1, 1.5);
  log.record_delivery(0, 0, 1.0, 1.1, 2, 0.0);
  log.record_delivery(0, 1, 2.0, 2.3, 3, 0.0);
  log.record_delivery(1, 0, 1.5, 1.6, 1, 0.0);
  log.record_control(PacketKind::Rreq, 24, 1.0);
  log.record_control(PacketKind::Rrep, 20, 1.0);
  log.record_control(PacketKind::Rreq, 24, 1.1);
  log.record_control(PacketKind::Rrep, 20, 1.1);
  const auto s = summarize(log, 4, 512);
  EXPECT_NEAR(*s.avg_delay, (0.1 + 0.3 + 0.1) / 3, 1e-12);
  EXPECT_NEAR(*s.avg_jitter, 0.2, 1e-12);  // only flow 0 has two deliveries
  EXPECT_EQ(s.routing_load_packets, 4u);
  EXPECT_EQ(s.routing_load_bytes, 88u);
  EXPECT_EQ(s.data_packets_sent, 3u);
  EXPECT_EQ(s.data_packets_delivered, 3u);
  EXPECT_DOUBLE_EQ(s.goodput_ratio, 0.75);
  EXPECT_DOUBLE_EQ(s.goodput_bytes_ratio, 3.0 * 512 / 88);
}

TEST(Summary, NoTrafficLeavesDelayUndefined) {
  MetricLog log;
  log.record_control(PacketKind::Hello, 16, 1.0);
  const auto s = summarize(log, 3, 512);
  EXPECT_FALSE(s.avg_delay.has_value());
  EXPECT_FALSE(s.avg_jitter.has_value());
  EXPECT_GT(s.routing_load_packets, 0u);
  const auto row = summary_csv_row(s);
  EXPECT_NE(row.find("NA"), std::string::npos);
}

TEST(Cumulate, PrefixSums) {
  std::vector<RunSummary> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].network_size = 5 * (i + 1);
    rows[i].avg_delay = i + 1.0;
  }
  const auto c = cumulate(rows);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_DOUBLE_EQ(c[0].delay, 1);
  EXPECT_DOUBLE_EQ(c[1].delay, 3);
  EXPECT_DOUBLE_EQ(c[2].delay, 6);
  const auto single = cumulate(std::vector<RunSummary>{rows[1]});
  EXPECT_DOUBLE_EQ(single[0].delay, 2);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_GE(c[i].delay, c[i - 1].delay);
}

TEST(Csv, GoldenHeaders) {
  EXPECT_STREQ(kSummaryCsvHeader,
               "protocol,security_mode,N,seed,avg_delay_s,avg_jitter_s,ctl_packets,ctl_bytes,data_sent,"
               "data_delivered,goodput_ratio,phase_shifts");
  RunSummary s;
  s.protocol = "olsr";
  s.security_mode = "none";
  s.network_size = 5;
  s.seed = 3;
  s.avg_delay = 0.25;
  s.avg_jitter = 0.5;
  s.routing_load_packets = 10;
  s.routing_load_bytes = 200;
  s.data_packets_sent = 4;
  s.data_packets_delivered = 2;
  s.goodput_ratio = 0.2;
  EXPECT_EQ(summary_csv_row(s), "olsr,none,5,3,0.25,0.5,10,200,4,2,0.2,0");
}
