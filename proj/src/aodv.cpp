#include "emanet/aodv.hpp"

#include <algorithm>
#include <cmath>

namespace emanet {

double net_traversal_time(const AodvParams& params) {
  return 2.0 * params.node_traversal_time * params.net_diameter;
}

int estimate_size_from_hops(int max_hop_count, double k) {
  const double h = static_cast<double>(max_hop_count);
  return static_cast<int>(std::lround(k * h * h));
}

AodvAgent::AodvAgent(NodeContext& ctx, AodvParams params) : ctx_(ctx), params_(params) {}

const AodvAgent::Route* AodvAgent::route(NodeId destination) const {
  auto it = table_.find(destination);
  if (it == table_.end() || it->second.expires <= ctx_.now()) return nullptr;
  return &it->second;
}

void AodvAgent::install(NodeId destination, NodeId next_hop, int hops, std::uint32_t seq) {
  auto& r = table_[destination];
  const bool valid = r.expires > ctx_.now();
  // Fresher sequence wins; equal sequence only if shorter or the entry is dead.
  if (valid && seq < r.dest_sequence) return;
  if (valid && seq == r.dest_sequence && hops >= r.hops) return;
  r = Route{next_hop, hops, seq, ctx_.now() + params_.active_route_timeout};
}

void AodvAgent::send_data(Packet packet) {
  const NodeId dst = packet.destination;
  if (const Route* r = route(dst)) {
    ctx_.unicast(std::move(packet), r->next_hop);
    return;
  }
  if (packet.origin != ctx_.id()) {
    ctx_.drop(packet, DropReason::NoRoute);
    return;
  }
  auto& p = pending_[dst];
  if (p.buffer.size() >= params_.buffer_capacity) {
    ctx_.drop(packet, DropReason::QueueOverflow);
    return;
  }
  p.buffer.push_back(std::move(packet));
  if (!p.timer.valid()) discover(dst);
}

void AodvAgent::discover(NodeId destination) {
  auto& p = pending_[destination];
  p.retries_left = params_.rreq_retries;
  p.attempt = 0;
  send_rreq(destination);
}

void AodvAgent::send_rreq(NodeId destination) {
  auto& p = pending_[destination];
  RreqMsg msg;
  msg.destination = destination;
  msg.rreq_id = ++rreq_id_;
  msg.origin_sequence = ++own_sequence_;
  auto it = table_.find(destination);
  msg.dest_sequence_known = it == table_.end() ? 0 : it->second.dest_sequence;
  msg.hop_count = 0;
  seen_[{ctx_.id(), msg.rreq_id}] = ctx_.now() + 2.0 * net_traversal_time(params_);
  Packet pkt = make_rreq(ctx_.id(), msg);
  pkt.ttl = params_.net_diameter;
  ctx_.broadcast(std::move(pkt));
  const double wait = net_traversal_time(params_) * static_cast<double>(1 << p.attempt);
  p.timer = ctx_.timer(wait, guard_.wrap([this, destination] { discovery_timeout(destination); }), "aodv-rreq-wait");
}

void AodvAgent::discovery_timeout(NodeId destination) {
  auto it = pending_.find(destination);
  if (it == pending_.end()) return;
  auto& p = it->second;
  if (p.retries_left > 0) {
    --p.retries_left;
    ++p.attempt;
    send_rreq(destination);
    return;
  }
  for (const auto& pkt : p.buffer) ctx_.drop(pkt, DropReason::DiscoveryFailed);
  pending_.erase(it);
}

void AodvAgent::flush(NodeId destination) {
  auto it = pending_.find(destination);
  if (it == pending_.end()) return;
  ctx_.cancel(it->second.timer);
  auto buffer = std::move(it->second.buffer);
  pending_.erase(it);
  const Route* r = route(destination);
  for (auto& pkt : buffer) {
    if (r) {
      ctx_.unicast(std::move(pkt), r->next_hop);
    } else {
      ctx_.drop(pkt, DropReason::NoRoute);
    }
  }
}

std::vector<Packet> AodvAgent::take_buffered() {
  std::vector<Packet> out;
  for (auto& [dst, p] : pending_) {
    ctx_.cancel(p.timer);
    for (auto& pkt : p.buffer) out.push_back(std::move(pkt));
  }
  pending_.clear();
  return out;
}

void AodvAgent::process_rreq(Packet packet, NodeId from) {
  const NodeId self = ctx_.id();
  const NodeId origin = packet.origin;
  if (origin == self) return;
  auto msg = packet.as<RreqMsg>();
  const auto key = std::make_pair(origin, msg.rreq_id);
  auto seen = seen_.find(key);
  if (seen != seen_.end() && seen->second > ctx_.now()) return;
  seen_[key] = ctx_.now() + 2.0 * net_traversal_time(params_);

  const int hops = msg.hop_count + 1;
  if (on_hops_seen) on_hops_seen(hops);
  install(origin, from, hops, msg.origin_sequence);
  if (from != origin) install(from, from, 1, 0);

  if (msg.destination == self) {
    own_sequence_ = std::max(own_sequence_ + 1, msg.dest_sequence_known);
    RrepMsg rep{origin, self, own_sequence_, 0};
    ctx_.unicast(make_rrep(self, rep), from);
    return;
  }
  if (packet.ttl <= 1) return;
  --packet.ttl;
  packet.as<RreqMsg>().hop_count = hops;
  ctx_.broadcast(std::move(packet));
}

void AodvAgent::process_rrep(Packet packet, NodeId from) {
  const NodeId self = ctx_.id();
  auto& msg = packet.as<RrepMsg>();
  const int hops = msg.hop_count + 1;
  if (on_hops_seen) on_hops_seen(hops);
  install(msg.destination, from, hops, msg.dest_sequence);
  if (msg.rreq_origin == self) {
    flush(msg.destination);
    if (on_source_rrep) on_source_rrep(hops);
    return;
  }
  const Route* back = route(msg.rreq_origin);
  if (!back) {
    ctx_.count("aodv.rrep-no-reverse-route");
    return;
  }
  msg.hop_count = hops;
  const NodeId next = back->next_hop;
  ctx_.unicast(std::move(packet), next);
}

void AodvAgent::receive(Packet packet, NodeId from) {
  switch (packet.kind) {
    case PacketKind::Rreq: process_rreq(std::move(packet), from); break;
    case PacketKind::Rrep: process_rrep(std::move(packet), from); break;
    default: ctx_.count("aodv.ignored-packet"); break;
  }
}

void AodvAgent::link_failed(Packet packet, NodeId next_hop) {
  // No RERR: the broken next hop is forgotten locally.
  for (auto& [dst, r] : table_) {
    if (r.next_hop == next_hop) r.expires = std::min(r.expires, ctx_.now());
  }
  if (packet.kind != PacketKind::Data) {
    ctx_.count("aodv.control-link-failure");
    return;
  }
  if (packet.origin == ctx_.id()) {
    send_data(std::move(packet));
  } else {
    ctx_.drop(packet, DropReason::LinkFailure);
  }
}

}  // namespace emanet
