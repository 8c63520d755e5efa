#include "emanet/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace emanet {

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::NoRoute: return "no-route";
    case DropReason::LinkFailure: return "link-failure";
    case DropReason::QueueOverflow: return "queue-overflow";
    case DropReason::DiscoveryFailed: return "discovery-failed";
    case DropReason::TtlExpired: return "ttl-expired";
    case DropReason::NodeDown: return "node-down";
    case DropReason::BufferTimeout: return "buffer-timeout";
    case DropReason::EngineSwitch: return "engine-switch";
  }
  return "?";
}

bool MetricLog::record_delivery(std::int32_t flow, std::uint32_t seq, double send_t, double recv_t,
                                int hops, double crypto_delay) {
  if (send_t < warmup_) return true;
  if (!seen_.emplace(flow, seq).second) {
    ++duplicates_;
    return false;
  }
  records_.push_back(DeliveryRecord{flow, seq, send_t, recv_t, hops, crypto_delay});
  return true;
}

void MetricLog::record_sent(std::int32_t flow, double send_t) {
  if (send_t < warmup_) return;
  ++sent_[flow];
}

void MetricLog::record_drop(std::int32_t flow, double send_t, DropReason reason) {
  if (send_t < warmup_) return;
  ++dropped_[flow];
  ++drop_reasons_[static_cast<std::size_t>(reason)];
}

void MetricLog::record_control(PacketKind kind, std::uint32_t bytes, double time) {
  if (time < warmup_) return;
  auto& c = control_[static_cast<std::size_t>(kind)];
  ++c.transmissions;
  c.bytes += bytes;
}

void MetricLog::record_route_header(std::uint32_t bytes, double time) {
  if (time < warmup_) return;
  route_header_bytes_ += bytes;
}

void MetricLog::record_data_transmission(std::uint32_t bytes, double time) {
  if (time < warmup_) return;
  ++data_tx_;
  data_tx_bytes_ += bytes;
}

ControlCounter MetricLog::control_total() const {
  ControlCounter total;
  for (std::size_t k = 0; k < kPacketKindCount; ++k) {
    if (!is_control(static_cast<PacketKind>(k))) continue;
    total.transmissions += control_[k].transmissions;
    total.bytes += control_[k].bytes;
  }
  total.bytes += route_header_bytes_;
  return total;
}

namespace {
std::uint64_t lookup(const std::map<std::int32_t, std::uint64_t>& m, std::int32_t key) {
  auto it = m.find(key);
  return it == m.end() ? 0 : it->second;
}
std::uint64_t sum(const std::map<std::int32_t, std::uint64_t>& m) {
  std::uint64_t s = 0;
  for (const auto& [k, v] : m) s += v;
  return s;
}
}  // namespace

std::uint64_t MetricLog::sent(std::int32_t flow) const { return lookup(sent_, flow); }
std::uint64_t MetricLog::sent_total() const { return sum(sent_); }
std::uint64_t MetricLog::dropped(std::int32_t flow) const { return lookup(dropped_, flow); }
std::uint64_t MetricLog::dropped_total() const { return sum(dropped_); }

std::uint64_t MetricLog::delivered(std::int32_t flow) const {
  return static_cast<std::uint64_t>(
      std::count_if(records_.begin(), records_.end(), [&](const DeliveryRecord& r) { return r.flow == flow; }));
}

std::vector<std::int32_t> MetricLog::flows() const {
  std::set<std::int32_t> ids;
  for (const auto& [f, n] : sent_) ids.insert(f);
  for (const auto& r : records_) ids.insert(r.flow);
  return {ids.begin(), ids.end()};
}

std::optional<double> flow_jitter(const MetricLog& log, std::int32_t flow) {
  std::vector<const DeliveryRecord*> recs;
  for (const auto& r : log.records()) {
    if (r.flow == flow) recs.push_back(&r);
  }
  if (recs.size() < 2) return std::nullopt;
  std::sort(recs.begin(), recs.end(), [](auto* a, auto* b) { return a->seq < b->seq; });
  double total = 0.0;
  for (std::size_t i = 1; i < recs.size(); ++i) total += std::abs(recs[i]->delay() - recs[i - 1]->delay());
  return total / static_cast<double>(recs.size() - 1);
}

RunSummary summarize(const MetricLog& log, int network_size, std::uint32_t data_packet_bytes) {
  RunSummary s;
  s.network_size = network_size;
  const auto& recs = log.records();
  if (!recs.empty()) {
    double total = 0.0;
    for (const auto& r : recs) total += r.delay();
    s.avg_delay = total / static_cast<double>(recs.size());
  }
  double jitter_sum = 0.0;
  int jitter_flows = 0;
  for (auto flow : log.flows()) {
    if (auto j = flow_jitter(log, flow)) {
      jitter_sum += *j;
      ++jitter_flows;
    }
  }
  if (jitter_flows > 0) s.avg_jitter = jitter_sum / jitter_flows;
  const auto ctl = log.control_total();
  s.routing_load_packets = ctl.transmissions;
  s.routing_load_bytes = ctl.bytes;
  s.data_packets_sent = log.sent_total();
  s.data_packets_delivered = recs.size();
  s.data_bytes_delivered = s.data_packets_delivered * data_packet_bytes;
  constexpr double inf = std::numeric_limits<double>::infinity();
  s.goodput_ratio = ctl.transmissions == 0
                        ? (s.data_packets_delivered == 0 ? 0.0 : inf)
                        : static_cast<double>(s.data_packets_delivered) / static_cast<double>(ctl.transmissions);
  s.goodput_bytes_ratio = ctl.bytes == 0
                              ? (s.data_bytes_delivered == 0 ? 0.0 : inf)
                              : static_cast<double>(s.data_bytes_delivered) / static_cast<double>(ctl.bytes);
  return s;
}

MeanSummary mean_of(const std::vector<RunSummary>& runs) {
  MeanSummary m;
  if (runs.empty()) return m;
  m.protocol = runs.front().protocol;
  m.security_mode = runs.front().security_mode;
  m.network_size = runs.front().network_size;
  m.seeds = static_cast<int>(runs.size());
  double delay = 0.0, jitter = 0.0;
  int nd = 0, nj = 0;
  for (const auto& r : runs) {
    if (r.avg_delay) {
      delay += *r.avg_delay;
      ++nd;
    }
    if (r.avg_jitter) {
      jitter += *r.avg_jitter;
      ++nj;
    }
    m.routing_load_packets += static_cast<double>(r.routing_load_packets);
    m.routing_load_bytes += static_cast<double>(r.routing_load_bytes);
    m.data_packets_sent += static_cast<double>(r.data_packets_sent);
    m.data_packets_delivered += static_cast<double>(r.data_packets_delivered);
    m.goodput_ratio += r.goodput_ratio;
    m.goodput_bytes_ratio += r.goodput_bytes_ratio;
    m.phase_shifts += r.phase_shifts;
  }
  const double n = static_cast<double>(runs.size());
  if (nd) m.avg_delay = delay / nd;
  if (nj) m.avg_jitter = jitter / nj;
  m.routing_load_packets /= n;
  m.routing_load_bytes /= n;
  m.data_packets_sent /= n;
  m.data_packets_delivered /= n;
  m.goodput_ratio /= n;
  m.goodput_bytes_ratio /= n;
  m.phase_shifts /= n;
  return m;
}

std::vector<CumulativePoint> cumulate(const std::vector<MeanSummary>& by_size) {
  std::vector<CumulativePoint> out;
  out.reserve(by_size.size());
  CumulativePoint acc;
  for (const auto& s : by_size) {
    acc.network_size = s.network_size;
    acc.delay += s.avg_delay.value_or(0.0);
    acc.jitter += s.avg_jitter.value_or(0.0);
    acc.ctl_packets += s.routing_load_packets;
    acc.ctl_bytes += s.routing_load_bytes;
    acc.goodput_ratio += s.goodput_ratio;
    acc.goodput_bytes_ratio += s.goodput_bytes_ratio;
    out.push_back(acc);
  }
  return out;
}

std::vector<CumulativePoint> cumulate(const std::vector<RunSummary>& by_size) {
  std::vector<CumulativePoint> out;
  out.reserve(by_size.size());
  CumulativePoint acc;
  for (const auto& s : by_size) {
    acc.network_size = s.network_size;
    acc.delay += s.avg_delay.value_or(0.0);
    acc.jitter += s.avg_jitter.value_or(0.0);
    acc.ctl_packets += static_cast<double>(s.routing_load_packets);
    acc.ctl_bytes += static_cast<double>(s.routing_load_bytes);
    acc.goodput_ratio += s.goodput_ratio;
    acc.goodput_bytes_ratio += s.goodput_bytes_ratio;
    out.push_back(acc);
  }
  return out;
}

namespace {
std::string opt(const std::optional<double>& v) { return v ? fmt::format("{:.9g}", *v) : "NA"; }
}  // namespace

std::string summary_csv_row(const RunSummary& s, std::string_view seed_label) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{:.9g},{}", s.protocol, s.security_mode, s.network_size,
                     seed_label, opt(s.avg_delay), opt(s.avg_jitter), s.routing_load_packets,
                     s.routing_load_bytes, s.data_packets_sent, s.data_packets_delivered, s.goodput_ratio,
                     s.phase_shifts);
}

std::string summary_csv_row(const RunSummary& s) { return summary_csv_row(s, std::to_string(s.seed)); }

std::string mean_csv_row(const MeanSummary& s) {
  return fmt::format("{},{},{},mean,{},{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}", s.protocol, s.security_mode,
                     s.network_size, opt(s.avg_delay), opt(s.avg_jitter), s.routing_load_packets,
                     s.routing_load_bytes, s.data_packets_sent, s.data_packets_delivered, s.goodput_ratio,
                     s.phase_shifts);
}

std::string cumulative_csv_row(std::string_view protocol, std::string_view mode, const CumulativePoint& p) {
  return fmt::format("{},{},{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}", protocol, mode, p.network_size, p.delay,
                     p.jitter, p.ctl_packets, p.ctl_bytes, p.goodput_ratio, p.goodput_bytes_ratio);
}

}  // namespace emanet
