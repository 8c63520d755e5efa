#include "emanet/packet.hpp"

namespace emanet {

std::string_view to_string(PacketKind kind) {
  switch (kind) {
    case PacketKind::Hello: return "HELLO";
    case PacketKind::Tc: return "TC";
    case PacketKind::Rreq: return "RREQ";
    case PacketKind::Rrep: return "RREP";
    case PacketKind::DsrRreq: return "DSR-RREQ";
    case PacketKind::DsrRrep: return "DSR-RREP";
    case PacketKind::DsrRerr: return "DSR-RERR";
    case PacketKind::Cp: return "CP";
    case PacketKind::HcReq: return "HCREQ";
    case PacketKind::HcRep: return "HCREP";
    case PacketKind::Data: return "DATA";
  }
  return "?";
}

std::string_view to_string(Phase phase) { return phase == Phase::Proactive ? "p-phase" : "r-phase"; }

namespace {

std::uint32_t ids(std::size_t n) { return wire::kIdBytes * static_cast<std::uint32_t>(n); }

Packet make(PacketKind kind, NodeId origin, NodeId destination, std::uint32_t bytes, PacketBody body) {
  Packet p;
  p.kind = kind;
  p.origin = origin;
  p.destination = destination;
  p.bytes = bytes;
  p.body = std::move(body);
  return p;
}

}  // namespace

Packet make_hello(NodeId origin, HelloMsg msg) {
  const auto bytes = wire::kHelloBase + ids(msg.neighbor_list.size());
  Packet p = make(PacketKind::Hello, origin, kBroadcast, bytes, std::move(msg));
  p.ttl = 1;
  return p;
}

Packet make_tc(NodeId origin, TcMsg msg, int ttl) {
  const auto bytes = wire::kTcBase + ids(msg.advertised.size());
  Packet p = make(PacketKind::Tc, origin, kBroadcast, bytes, std::move(msg));
  p.ttl = ttl;
  return p;
}

Packet make_rreq(NodeId origin, RreqMsg msg) {
  return make(PacketKind::Rreq, origin, kBroadcast, wire::kRreq, msg);
}

Packet make_rrep(NodeId origin, RrepMsg msg) {
  return make(PacketKind::Rrep, origin, msg.rreq_origin, wire::kRrep, msg);
}

Packet make_dsr_rreq(NodeId origin, DsrRreq msg) {
  const auto bytes = wire::kDsrRreqBase + ids(msg.route_record.size());
  return make(PacketKind::DsrRreq, origin, kBroadcast, bytes, std::move(msg));
}

Packet make_dsr_rrep(NodeId origin, DsrRrep msg) {
  const auto bytes = wire::kDsrRrepBase + ids(msg.route.size());
  const NodeId to = msg.route.front();
  return make(PacketKind::DsrRrep, origin, to, bytes, std::move(msg));
}

Packet make_dsr_rerr(NodeId origin, DsrRerr msg) {
  const NodeId to = msg.return_path.empty() ? kNoNode : msg.return_path.back();
  return make(PacketKind::DsrRerr, origin, to, wire::kDsrRerr, std::move(msg));
}

Packet make_cp(NodeId origin, CpPacket msg) { return make(PacketKind::Cp, origin, kBroadcast, wire::kCp, msg); }

Packet make_hcreq(NodeId origin, HcReqPacket msg) {
  return make(PacketKind::HcReq, origin, kBroadcast, wire::kHcReq, msg);
}

Packet make_hcrep(NodeId origin, HcRepPacket msg) {
  const NodeId to = msg.probe_origin;
  return make(PacketKind::HcRep, origin, to, wire::kHcRep, msg);
}

}  // namespace emanet
