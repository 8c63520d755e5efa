#include "emanet/olsr.hpp"

#include <algorithm>
#include <vector>

namespace emanet {

std::set<NodeId> select_mprs(NodeId self, const std::set<NodeId>& one_hop,
                             const std::map<NodeId, std::set<NodeId>>& two_hop) {
  // Strict two-hop set: reachable through a neighbor, not self, not a neighbor.
  std::map<NodeId, std::vector<NodeId>> via;
  for (NodeId n : one_hop) {
    auto it = two_hop.find(n);
    if (it == two_hop.end()) continue;
    for (NodeId t : it->second) {
      if (t == self || one_hop.count(t)) continue;
      via[t].push_back(n);
    }
  }
  std::set<NodeId> mprs;
  std::set<NodeId> uncovered;
  for (const auto& [t, ns] : via) {
    if (ns.size() == 1) {
      mprs.insert(ns.front());
    } else {
      uncovered.insert(t);
    }
  }
  auto covers = [&](NodeId n, NodeId t) {
    const auto& ns = via[t];
    return std::find(ns.begin(), ns.end(), n) != ns.end();
  };
  for (auto it = uncovered.begin(); it != uncovered.end();) {
    bool hit = std::any_of(mprs.begin(), mprs.end(), [&](NodeId m) { return covers(m, *it); });
    it = hit ? uncovered.erase(it) : std::next(it);
  }
  while (!uncovered.empty()) {
    NodeId best = kNoNode;
    std::size_t best_count = 0;
    for (NodeId n : one_hop) {
      if (mprs.count(n)) continue;
      std::size_t c = 0;
      for (NodeId t : uncovered) c += covers(n, t) ? 1 : 0;
      if (c > best_count) {
        best = n;
        best_count = c;
      }
    }
    if (best == kNoNode) break;
    mprs.insert(best);
    for (auto it = uncovered.begin(); it != uncovered.end();) {
      it = covers(best, *it) ? uncovered.erase(it) : std::next(it);
    }
  }
  return mprs;
}

RoutingTable compute_routes(NodeId self, const DenseGraph& graph) {
  const auto n = graph.size();
  RoutingTable table;
  if (self < 0 || static_cast<std::size_t>(self) >= n) return table;
  std::vector<int> dist(n, -1);
  std::vector<NodeId> next(n, kNoNode);
  std::vector<NodeId> queue{self};
  dist[self] = 0;
  // Level-ordered BFS; a node's next hop is the minimum over its parents on
  // the previous level, which are all settled before it is dequeued.
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId v : graph[u]) {
      const NodeId via = u == self ? v : next[u];
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        next[v] = via;
        queue.push_back(v);
      } else if (dist[v] == dist[u] + 1 && via < next[v]) {
        next[v] = via;
      }
    }
  }
  for (std::size_t i = 1; i < queue.size(); ++i) table.emplace(queue[i], RouteEntry{next[queue[i]], dist[queue[i]]});
  return table;
}

RoutingTable compute_routes(NodeId self, const Adjacency& edges) {
  NodeId top = self;
  for (const auto& [a, bs] : edges) {
    top = std::max(top, a);
    if (!bs.empty()) top = std::max(top, *bs.rbegin());
  }
  DenseGraph graph(static_cast<std::size_t>(top) + 1);
  for (const auto& [a, bs] : edges) {
    for (NodeId b : bs) {
      if (a == b) continue;
      graph[a].push_back(b);
      graph[b].push_back(a);
    }
  }
  return compute_routes(self, graph);
}

OlsrAgent::OlsrAgent(NodeContext& ctx, OlsrParams params) : ctx_(ctx), params_(params) {}

void OlsrAgent::start() {
  const double h0 = ctx_.rng().uniform(0.0, params_.hello_interval);
  const double t0 = ctx_.rng().uniform(0.0, params_.tc_interval);
  ctx_.timer(h0, guard_.wrap([this] { emit_hello(); }), "olsr-hello");
  ctx_.timer(t0, guard_.wrap([this] { emit_tc(); }), "olsr-tc");
}

void OlsrAgent::purge() {
  const double now = ctx_.now();
  for (auto it = one_hop_.begin(); it != one_hop_.end();) {
    if (it->second.expires <= now) {
      it = one_hop_.erase(it);
      dirty_ = true;
    } else {
      ++it;
    }
  }
  for (auto it = selectors_.begin(); it != selectors_.end();) {
    it = it->second <= now ? selectors_.erase(it) : std::next(it);
  }
  for (auto it = topology_.begin(); it != topology_.end();) {
    if (it->second.expires <= now) {
      it = topology_.erase(it);
      dirty_ = true;
    } else {
      ++it;
    }
  }
}

void OlsrAgent::recompute() {
  purge();
  if (!dirty_) return;
  dirty_ = false;
  mprs_dirty_ = true;
  const NodeId self = ctx_.id();
  NodeId top = self;
  auto grow = [&](NodeId v) { top = std::max(top, v); };
  for (const auto& [n, info] : one_hop_) {
    grow(n);
    if (!info.neighbors.empty()) grow(*info.neighbors.rbegin());
  }
  for (const auto& [origin, entry] : topology_) {
    grow(origin);
    if (!entry.advertised.empty()) grow(*entry.advertised.rbegin());
  }
  DenseGraph graph(static_cast<std::size_t>(top) + 1);
  auto link = [&](NodeId a, NodeId b) {
    if (a == b) return;
    graph[a].push_back(b);
    graph[b].push_back(a);
  };
  for (const auto& [n, info] : one_hop_) {
    link(self, n);
    for (NodeId t : info.neighbors) link(n, t);
  }
  // Links touching self come only from the neighbor table, or a stale TC
  // would keep an expired neighbor reachable.
  for (const auto& [origin, entry] : topology_) {
    if (origin == self) continue;
    for (NodeId a : entry.advertised) {
      if (a != self) link(origin, a);
    }
  }
  table_ = compute_routes(self, graph);
}

const std::set<NodeId>& OlsrAgent::mprs() {
  recompute();
  if (mprs_dirty_) {
    mprs_dirty_ = false;
    std::set<NodeId> ones;
    std::map<NodeId, std::set<NodeId>> twos;
    for (const auto& [n, info] : one_hop_) {
      ones.insert(n);
      twos[n] = info.neighbors;
    }
    mprs_ = select_mprs(ctx_.id(), ones, twos);
  }
  return mprs_;
}

const RoutingTable& OlsrAgent::routes() {
  recompute();
  return table_;
}

int OlsrAgent::reachable() { return reachable_count(routes()); }

std::set<NodeId> OlsrAgent::one_hop() {
  purge();
  std::set<NodeId> out;
  for (const auto& [n, info] : one_hop_) out.insert(n);
  return out;
}

std::set<NodeId> OlsrAgent::mpr_selectors() {
  purge();
  std::set<NodeId> out;
  for (const auto& [n, t] : selectors_) out.insert(n);
  return out;
}

std::set<NodeId> OlsrAgent::topology_origins() {
  purge();
  std::set<NodeId> out;
  for (const auto& [o, e] : topology_) out.insert(o);
  return out;
}

void OlsrAgent::emit_hello() {
  const auto& relays = mprs();
  HelloMsg msg;
  for (const auto& [n, info] : one_hop_) msg.neighbor_list.push_back(n);
  msg.mpr_flags.assign(relays.begin(), relays.end());
  ctx_.broadcast(make_hello(ctx_.id(), std::move(msg)));
  ctx_.timer(params_.hello_interval, guard_.wrap([this] { emit_hello(); }), "olsr-hello");
}

void OlsrAgent::emit_tc() {
  purge();
  if (!selectors_.empty()) {
    TcMsg msg;
    for (const auto& [n, t] : selectors_) msg.advertised.push_back(n);
    msg.sequence = ++tc_sequence_;
    seen_tc_.emplace(ctx_.id(), msg.sequence);
    ctx_.broadcast(make_tc(ctx_.id(), std::move(msg), params_.tc_ttl));
  }
  ctx_.timer(params_.tc_interval, guard_.wrap([this] { emit_tc(); }), "olsr-tc");
}

void OlsrAgent::process_hello(const Packet& packet, NodeId from) {
  const auto& msg = packet.as<HelloMsg>();
  const double now = ctx_.now();
  const NodeId self = ctx_.id();
  auto& entry = one_hop_[from];
  std::set<NodeId> listed(msg.neighbor_list.begin(), msg.neighbor_list.end());
  listed.erase(self);
  if (entry.expires <= now || entry.neighbors != listed) dirty_ = true;
  entry.neighbors = std::move(listed);
  entry.expires = now + params_.hold_factor * params_.hello_interval;
  if (std::binary_search(msg.mpr_flags.begin(), msg.mpr_flags.end(), self)) {
    selectors_[from] = entry.expires;
  } else {
    selectors_.erase(from);
  }
}

void OlsrAgent::process_tc(Packet packet, NodeId from) {
  const NodeId origin = packet.origin;
  if (origin == ctx_.id()) return;
  auto& msg = packet.as<TcMsg>();
  if (!seen_tc_.emplace(origin, msg.sequence).second) return;
  const double now = ctx_.now();
  auto& entry = topology_[origin];
  if (entry.expires <= now || msg.sequence >= entry.sequence) {
    std::set<NodeId> adv(msg.advertised.begin(), msg.advertised.end());
    if (entry.expires <= now || adv != entry.advertised) dirty_ = true;
    entry.sequence = msg.sequence;
    entry.advertised = std::move(adv);
    entry.expires = now + params_.hold_factor * params_.tc_interval;
  }
  // MPR flooding: relay only for nodes that picked us as their relay.
  purge();
  if (selectors_.count(from) && packet.ttl > 1) {
    --packet.ttl;
    ctx_.broadcast(std::move(packet));
  }
  if (on_tc) on_tc();
}

void OlsrAgent::receive(Packet packet, NodeId from) {
  switch (packet.kind) {
    case PacketKind::Hello: process_hello(packet, from); break;
    case PacketKind::Tc: process_tc(std::move(packet), from); break;
    default: ctx_.count("olsr.ignored-packet"); break;
  }
}

void OlsrAgent::send_data(Packet packet) {
  const auto& table = routes();
  auto it = table.find(packet.destination);
  if (it == table.end()) {
    ctx_.drop(packet, DropReason::NoRoute);
    return;
  }
  ctx_.unicast(std::move(packet), it->second.next_hop);
}

void OlsrAgent::link_failed(Packet packet, NodeId /*next_hop*/) {
  if (packet.kind == PacketKind::Data) {
    ctx_.drop(packet, DropReason::LinkFailure);
  } else {
    ctx_.count("olsr.control-link-failure");
  }
}

}  // namespace emanet
