#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "emanet/packet.hpp"

namespace emanet {

struct DeliveryRecord {
  std::int32_t flow = 0;
  std::uint32_t seq = 0;
  double send_time = 0.0;
  double recv_time = 0.0;
  int hops = 0;
  double crypto_delay = 0.0;
  double delay() const { return recv_time - send_time; }
};

struct ControlCounter {
  std::uint64_t transmissions = 0;
  std::uint64_t bytes = 0;
};

enum class DropReason : std::uint8_t {
  NoRoute,
  LinkFailure,
  QueueOverflow,
  DiscoveryFailed,
  TtlExpired,
  NodeDown,
  BufferTimeout,
  EngineSwitch,
};
inline constexpr std::size_t kDropReasonCount = 8;
std::string_view to_string(DropReason r);

struct SecurityCounters {
  std::uint64_t rejected = 0;
  std::uint64_t adversary_injected = 0;
  std::uint64_t secured_transmissions = 0;
  double crypto_delay_total = 0.0;
};

/// Per-run measurement store. Everything stamped before `warmup` is ignored.
class MetricLog {
 public:
  explicit MetricLog(double warmup = 0.0) : warmup_(warmup) {}

  double warmup() const { return warmup_; }

  /// Returns false (and bumps the duplicate counter) for a repeated (flow, seq).
  bool record_delivery(std::int32_t flow, std::uint32_t seq, double send_t, double recv_t, int hops,
                       double crypto_delay);
  void record_sent(std::int32_t flow, double send_t);
  void record_drop(std::int32_t flow, double send_t, DropReason reason);
  /// One on-air control transmission. `bytes` includes any security delta.
  void record_control(PacketKind kind, std::uint32_t bytes, double time);
  /// DSR source-route header bytes carried by a data transmission.
  void record_route_header(std::uint32_t bytes, double time);
  void record_data_transmission(std::uint32_t bytes, double time);

  SecurityCounters& security() { return security_; }
  const SecurityCounters& security() const { return security_; }

  const std::vector<DeliveryRecord>& records() const { return records_; }
  std::uint64_t duplicates() const { return duplicates_; }
  const ControlCounter& control(PacketKind kind) const { return control_[static_cast<std::size_t>(kind)]; }
  ControlCounter control_total() const;
  std::uint64_t sent(std::int32_t flow) const;
  std::uint64_t sent_total() const;
  std::uint64_t dropped(std::int32_t flow) const;
  std::uint64_t dropped_total() const;
  std::uint64_t dropped_by(DropReason r) const { return drop_reasons_[static_cast<std::size_t>(r)]; }
  std::uint64_t delivered(std::int32_t flow) const;
  std::vector<std::int32_t> flows() const;
  std::uint64_t data_transmissions() const { return data_tx_; }
  std::uint64_t data_bytes_on_air() const { return data_tx_bytes_; }

 private:
  double warmup_;
  std::vector<DeliveryRecord> records_;
  std::set<std::pair<std::int32_t, std::uint32_t>> seen_;
  std::uint64_t duplicates_ = 0;
  std::array<ControlCounter, kPacketKindCount> control_{};
  std::uint64_t route_header_bytes_ = 0;
  std::map<std::int32_t, std::uint64_t> sent_;
  std::map<std::int32_t, std::uint64_t> dropped_;
  std::array<std::uint64_t, kDropReasonCount> drop_reasons_{};
  std::uint64_t data_tx_ = 0;
  std::uint64_t data_tx_bytes_ = 0;
  SecurityCounters security_;
};

/// Mean |delay_i - delay_{i-1}| over the flow's deliveries in sequence order.
/// Undefined (nullopt) below two deliveries.
std::optional<double> flow_jitter(const MetricLog& log, std::int32_t flow);

struct RunSummary {
  std::string protocol;
  std::string security_mode;
  int network_size = 0;
  std::uint64_t seed = 0;
  std::optional<double> avg_delay;
  std::optional<double> avg_jitter;
  std::uint64_t routing_load_packets = 0;
  std::uint64_t routing_load_bytes = 0;
  std::uint64_t data_packets_sent = 0;
  std::uint64_t data_packets_delivered = 0;
  double goodput_ratio = 0.0;
  /// Delivered data bytes over control bytes.
  double goodput_bytes_ratio = 0.0;
  std::uint64_t data_bytes_delivered = 0;
  int phase_shifts = 0;
};

/// `data_packet_bytes` is the unsecured size of one data packet.
RunSummary summarize(const MetricLog& log, int network_size, std::uint32_t data_packet_bytes);

struct CumulativePoint {
  int network_size = 0;
  double delay = 0.0;
  double jitter = 0.0;
  double ctl_packets = 0.0;
  double ctl_bytes = 0.0;
  double goodput_ratio = 0.0;
  double goodput_bytes_ratio = 0.0;
};

/// Seed-averaged summary of one (protocol, mode, N) cell. Delay and jitter
/// average over the seeds where they are defined.
struct MeanSummary {
  std::string protocol;
  std::string security_mode;
  int network_size = 0;
  int seeds = 0;
  std::optional<double> avg_delay;
  std::optional<double> avg_jitter;
  double routing_load_packets = 0.0;
  double routing_load_bytes = 0.0;
  double data_packets_sent = 0.0;
  double data_packets_delivered = 0.0;
  double goodput_ratio = 0.0;
  double goodput_bytes_ratio = 0.0;
  double phase_shifts = 0.0;
};

MeanSummary mean_of(const std::vector<RunSummary>& runs);

/// Running prefix sums over summaries sorted by network size. Undefined
/// delay/jitter contributes zero.
std::vector<CumulativePoint> cumulate(const std::vector<RunSummary>& by_size);
std::vector<CumulativePoint> cumulate(const std::vector<MeanSummary>& by_size);

inline constexpr const char* kSummaryCsvHeader =
    "protocol,security_mode,N,seed,avg_delay_s,avg_jitter_s,ctl_packets,ctl_bytes,data_sent,"
    "data_delivered,goodput_ratio,phase_shifts";

std::string summary_csv_row(const RunSummary& s);
/// Same schema, seed column replaced by a label such as "mean".
std::string summary_csv_row(const RunSummary& s, std::string_view seed_label);

std::string mean_csv_row(const MeanSummary& s);

inline constexpr const char* kCumulativeCsvHeader =
    "protocol,security_mode,N,cum_delay_s,cum_jitter_s,cum_ctl_packets,cum_ctl_bytes,cum_goodput_ratio,"
    "cum_goodput_bytes_ratio";
std::string cumulative_csv_row(std::string_view protocol, std::string_view mode, const CumulativePoint& p);

}  // namespace emanet
