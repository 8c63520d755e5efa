#include "emanet/dsr.hpp"

#include <algorithm>

namespace emanet {

namespace {
bool has_link(const Path& p, NodeId a, NodeId b) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if ((p[i] == a && p[i + 1] == b) || (p[i] == b && p[i + 1] == a)) return true;
  }
  return false;
}
}  // namespace

DsrAgent::DsrAgent(NodeContext& ctx, DsrParams params) : ctx_(ctx), params_(params) {}

void DsrAgent::expire_cache() {
  const double now = ctx_.now();
  for (auto it = cache_.begin(); it != cache_.end();) {
    auto& v = it->second;
    v.erase(std::remove_if(v.begin(), v.end(), [&](const Cached& c) { return c.expires <= now; }), v.end());
    it = v.empty() ? cache_.erase(it) : std::next(it);
  }
}

void DsrAgent::cache(Path path) {
  if (path.size() < 2 || path.front() != ctx_.id()) return;
  auto& v = cache_[path.back()];
  const double expires = ctx_.now() + params_.cache_lifetime;
  for (auto& c : v) {
    if (c.path == path) {
      c.expires = expires;
      return;
    }
  }
  v.push_back(Cached{std::move(path), expires});
  std::stable_sort(v.begin(), v.end(), [](const Cached& a, const Cached& b) { return a.path.size() < b.path.size(); });
  if (v.size() > params_.paths_per_destination) v.resize(params_.paths_per_destination);
}

const Path* DsrAgent::best_path(NodeId destination) {
  expire_cache();
  auto it = cache_.find(destination);
  if (it == cache_.end() || it->second.empty()) return nullptr;
  return &it->second.front().path;
}

std::size_t DsrAgent::cached_paths(NodeId destination) {
  expire_cache();
  auto it = cache_.find(destination);
  return it == cache_.end() ? 0 : it->second.size();
}

void DsrAgent::purge_link(NodeId a, NodeId b) {
  for (auto it = cache_.begin(); it != cache_.end();) {
    auto& v = it->second;
    v.erase(std::remove_if(v.begin(), v.end(), [&](const Cached& c) { return has_link(c.path, a, b); }), v.end());
    it = v.empty() ? cache_.erase(it) : std::next(it);
  }
}

void DsrAgent::send_data(Packet packet) {
  auto& h = packet.as<DataHeader>();
  if (packet.origin != ctx_.id() || !h.source_route.empty()) {
    forward(std::move(packet));
    return;
  }
  const NodeId dst = packet.destination;
  if (const Path* p = best_path(dst)) {
    h.source_route = *p;
    h.cursor = 0;
    ctx_.unicast(std::move(packet), h.source_route[1]);
    return;
  }
  auto& buf = buffer_[dst];
  if (buf.size() >= params_.buffer_capacity) {
    ctx_.drop(packet, DropReason::QueueOverflow);
    return;
  }
  buf.push_back(Buffered{std::move(packet), ctx_.now() + params_.buffer_timeout});
  if (!discovery_.count(dst)) discover(dst);
}

void DsrAgent::forward(Packet packet) {
  auto& h = packet.as<DataHeader>();
  const auto& route = h.source_route;
  auto pos = std::find(route.begin(), route.end(), ctx_.id());
  if (pos == route.end() || pos + 1 == route.end()) {
    ctx_.count("dsr.malformed-route");
    ctx_.drop(packet, DropReason::NoRoute);
    return;
  }
  h.cursor = static_cast<std::size_t>(pos - route.begin());
  const NodeId next = *(pos + 1);
  ctx_.unicast(std::move(packet), next);
}

void DsrAgent::discover(NodeId destination) {
  auto& d = discovery_[destination];
  d.backoff = params_.discovery_backoff;
  DsrRreq msg;
  msg.destination = destination;
  msg.rreq_id = ++rreq_id_;
  msg.route_record = {ctx_.id()};
  seen_.emplace(ctx_.id(), msg.rreq_id);
  Packet pkt = make_dsr_rreq(ctx_.id(), std::move(msg));
  pkt.ttl = params_.rreq_ttl;
  ctx_.broadcast(std::move(pkt));
  d.timer = ctx_.timer(d.backoff, guard_.wrap([this, destination] { retry_discovery(destination); }), "dsr-rreq-wait");
}

void DsrAgent::retry_discovery(NodeId destination) {
  auto& buf = buffer_[destination];
  const double now = ctx_.now();
  for (auto it = buf.begin(); it != buf.end();) {
    if (it->expires <= now) {
      ctx_.drop(it->packet, DropReason::BufferTimeout);
      it = buf.erase(it);
    } else {
      ++it;
    }
  }
  if (buf.empty()) {
    buffer_.erase(destination);
    discovery_.erase(destination);
    return;
  }
  auto& d = discovery_[destination];
  const double backoff = std::min(2.0 * d.backoff, params_.discovery_backoff_max);
  DsrRreq msg;
  msg.destination = destination;
  msg.rreq_id = ++rreq_id_;
  msg.route_record = {ctx_.id()};
  seen_.emplace(ctx_.id(), msg.rreq_id);
  Packet pkt = make_dsr_rreq(ctx_.id(), std::move(msg));
  pkt.ttl = params_.rreq_ttl;
  ctx_.broadcast(std::move(pkt));
  d.backoff = backoff;
  d.timer = ctx_.timer(backoff, guard_.wrap([this, destination] { retry_discovery(destination); }), "dsr-rreq-wait");
}

void DsrAgent::flush(NodeId destination) {
  auto d = discovery_.find(destination);
  if (d != discovery_.end()) {
    ctx_.cancel(d->second.timer);
    discovery_.erase(d);
  }
  auto it = buffer_.find(destination);
  if (it == buffer_.end()) return;
  auto buf = std::move(it->second);
  buffer_.erase(it);
  for (auto& b : buf) send_data(std::move(b.packet));
}

void DsrAgent::process_rreq(Packet packet) {
  const NodeId self = ctx_.id();
  auto& msg = packet.as<DsrRreq>();
  const auto& record = msg.route_record;
  if (std::find(record.begin(), record.end(), self) != record.end()) return;
  if (!seen_.emplace(packet.origin, msg.rreq_id).second) return;
  if (msg.destination == self) {
    DsrRrep rep;
    rep.route = record;
    rep.route.push_back(self);
    rep.cursor = rep.route.size() - 1;
    Path back(rep.route.rbegin(), rep.route.rend());
    cache(back);
    const NodeId next = rep.route[rep.cursor - 1];
    ctx_.unicast(make_dsr_rrep(self, std::move(rep)), next);
    return;
  }
  if (packet.ttl <= 1) return;
  DsrRreq relay = msg;
  relay.route_record.push_back(self);
  Packet out = make_dsr_rreq(packet.origin, std::move(relay));
  out.ttl = packet.ttl - 1;
  out.authentic = packet.authentic;
  out.crypto_delay = packet.crypto_delay;
  ctx_.broadcast(std::move(out));
}

void DsrAgent::process_rrep(Packet packet) {
  const NodeId self = ctx_.id();
  auto& msg = packet.as<DsrRrep>();
  auto pos = std::find(msg.route.begin(), msg.route.end(), self);
  if (pos == msg.route.end()) {
    ctx_.count("dsr.malformed-rrep");
    return;
  }
  msg.cursor = static_cast<std::size_t>(pos - msg.route.begin());
  cache(Path(pos, msg.route.end()));
  if (msg.cursor == 0) {
    flush(msg.route.back());
    return;
  }
  const NodeId next = msg.route[msg.cursor - 1];
  ctx_.unicast(std::move(packet), next);
}

void DsrAgent::process_rerr(Packet packet) {
  auto& msg = packet.as<DsrRerr>();
  purge_link(msg.broken_from, msg.broken_to);
  const auto& rp = msg.return_path;
  auto pos = std::find(rp.begin(), rp.end(), ctx_.id());
  if (pos == rp.end() || pos + 1 == rp.end()) return;
  msg.cursor = static_cast<std::size_t>(pos - rp.begin());
  const NodeId next = *(pos + 1);
  ctx_.unicast(std::move(packet), next);
}

void DsrAgent::receive(Packet packet, NodeId /*from*/) {
  switch (packet.kind) {
    case PacketKind::DsrRreq: process_rreq(std::move(packet)); break;
    case PacketKind::DsrRrep: process_rrep(std::move(packet)); break;
    case PacketKind::DsrRerr: process_rerr(std::move(packet)); break;
    default: ctx_.count("dsr.ignored-packet"); break;
  }
}

void DsrAgent::link_failed(Packet packet, NodeId next_hop) {
  const NodeId self = ctx_.id();
  purge_link(self, next_hop);
  if (packet.kind != PacketKind::Data) {
    ctx_.count("dsr.control-link-failure");
    return;
  }
  const auto& h = packet.as<DataHeader>();
  Path traversed(h.source_route.begin(), h.source_route.begin() + static_cast<std::ptrdiff_t>(h.cursor) + 1);
  ctx_.drop(packet, DropReason::LinkFailure);
  if (traversed.size() < 2) return;
  DsrRerr err;
  err.broken_from = self;
  err.broken_to = next_hop;
  err.return_path.assign(traversed.rbegin(), traversed.rend());
  err.cursor = 0;
  const NodeId next = err.return_path[1];
  ctx_.unicast(make_dsr_rerr(self, std::move(err)), next);
}

}  // namespace emanet
