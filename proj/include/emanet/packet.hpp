#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "emanet/kernel.hpp"

namespace emanet {

inline constexpr NodeId kBroadcast = -2;

enum class PacketKind : std::uint8_t {
  Hello,
  Tc,
  Rreq,
  Rrep,
  DsrRreq,
  DsrRrep,
  DsrRerr,
  Cp,
  HcReq,
  HcRep,
  Data,
};
inline constexpr std::size_t kPacketKindCount = 11;

std::string_view to_string(PacketKind kind);
inline bool is_control(PacketKind kind) { return kind != PacketKind::Data; }

enum class Phase : std::uint8_t { Proactive, Reactive };
std::string_view to_string(Phase phase);

// Control-packet sizes used for routing-load accounting (bytes).
namespace wire {
inline constexpr std::uint32_t kIdBytes = 4;
inline constexpr std::uint32_t kHelloBase = 16;
inline constexpr std::uint32_t kTcBase = 16;
inline constexpr std::uint32_t kRreq = 24;
inline constexpr std::uint32_t kRrep = 20;
inline constexpr std::uint32_t kDsrRreqBase = 24;
inline constexpr std::uint32_t kDsrRrepBase = 20;
inline constexpr std::uint32_t kDsrRerr = 20;
inline constexpr std::uint32_t kCp = 16;
inline constexpr std::uint32_t kHcReq = 20;
inline constexpr std::uint32_t kHcRep = 16;
}  // namespace wire

struct HelloMsg {
  std::vector<NodeId> neighbor_list;  // sorted
  std::vector<NodeId> mpr_flags;      // sorted, subset of neighbor_list
};

struct TcMsg {
  std::vector<NodeId> advertised;  // sorted MPR selectors of the origin
  std::uint32_t sequence = 0;
};

struct RreqMsg {
  NodeId destination = kNoNode;
  std::uint32_t rreq_id = 0;
  std::uint32_t origin_sequence = 0;
  std::uint32_t dest_sequence_known = 0;
  int hop_count = 0;
};

struct RrepMsg {
  NodeId rreq_origin = kNoNode;  // the node that asked; RREP travels toward it
  NodeId destination = kNoNode;  // the node the route leads to
  std::uint32_t dest_sequence = 0;
  int hop_count = 0;
};

struct DsrRreq {
  NodeId destination = kNoNode;
  std::uint32_t rreq_id = 0;
  std::vector<NodeId> route_record;  // starts with the origin
};

/// Reply carrying the discovered path, source-routed back along its reverse.
struct DsrRrep {
  std::vector<NodeId> route;  // origin .. destination
  std::size_t cursor = 0;     // index of the node currently holding the reply
};

struct DsrRerr {
  NodeId broken_from = kNoNode;
  NodeId broken_to = kNoNode;
  std::vector<NodeId> return_path;  // nodes to visit, last element = source
  std::size_t cursor = 0;
};

struct CpPacket {
  Phase target_phase = Phase::Proactive;
  std::uint32_t sequence = 0;
};

struct HcReqPacket {
  std::uint32_t probe_id = 0;
  int ttl = 0;
  int initial_ttl = 0;
  bool is_echo = false;
  NodeId echo_parent_origin = kNoNode;
  std::uint32_t echo_parent_probe = 0;
};

struct HcRepPacket {
  NodeId responder = kNoNode;
  NodeId probe_origin = kNoNode;  // unicast target
  std::uint32_t probe_id = 0;
  bool is_echo_reply = false;
};

struct DataHeader {
  std::int32_t flow = 0;
  std::uint32_t seq = 0;
  double send_time = 0.0;
  int hops = 0;
  std::vector<NodeId> source_route;  // DSR only
  std::size_t cursor = 0;
};

using PacketBody = std::variant<HelloMsg, TcMsg, RreqMsg, RrepMsg, DsrRreq, DsrRrep, DsrRerr, CpPacket,
                                HcReqPacket, HcRepPacket, DataHeader>;

/// A frame on the air. `bytes` excludes security overhead, which is charged
/// per transmission by the channel.
struct Packet {
  PacketKind kind = PacketKind::Data;
  NodeId origin = kNoNode;
  NodeId destination = kBroadcast;
  std::uint32_t bytes = 0;
  int ttl = 64;
  /// Cleared for adversary-originated or tampered packets.
  bool authentic = true;
  /// Security processing accumulated along the path (seconds).
  double crypto_delay = 0.0;
  PacketBody body;

  template <class T>
  T& as() {
    return std::get<T>(body);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(body);
  }
};

Packet make_hello(NodeId origin, HelloMsg msg);
Packet make_tc(NodeId origin, TcMsg msg, int ttl);
Packet make_rreq(NodeId origin, RreqMsg msg);
Packet make_rrep(NodeId origin, RrepMsg msg);
Packet make_dsr_rreq(NodeId origin, DsrRreq msg);
Packet make_dsr_rrep(NodeId origin, DsrRrep msg);
Packet make_dsr_rerr(NodeId origin, DsrRerr msg);
Packet make_cp(NodeId origin, CpPacket msg);
Packet make_hcreq(NodeId origin, HcReqPacket msg);
Packet make_hcrep(NodeId origin, HcRepPacket msg);

/// Bytes of a DSR data packet's source-route header.
inline std::uint32_t source_route_bytes(const DataHeader& h) {
  return h.source_route.empty() ? 0u : wire::kIdBytes * static_cast<std::uint32_t>(h.source_route.size());
}

}  // namespace emanet
