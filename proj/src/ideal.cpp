#include "emanet/ideal.hpp"

#include <algorithm>

namespace emanet {

class IdealNetwork::Context final : public NodeContext {
 public:
  Context(IdealNetwork& net, NodeId id, std::uint64_t seed)
      : net_(net), id_(id), rng_(RandomStream(seed).fork("node", static_cast<std::uint64_t>(id))) {}

  NodeId id() const override { return id_; }
  double now() const override { return net_.sim_.now(); }
  RandomStream& rng() override { return rng_; }
  EventHandle timer(double delay, std::function<void()> fn, std::string_view) override {
    return net_.sim_.schedule_in(delay, EventKind::Timer, id_, std::move(fn));
  }
  bool cancel(EventHandle handle) override { return net_.sim_.cancel(handle); }

  void broadcast(Packet packet) override {
    if (packet.kind != PacketKind::Data) ++net_.tx_[packet.kind];
    for (NodeId n : net_.graph_[static_cast<std::size_t>(id_)]) {
      net_.sim_.schedule_in(net_.hop_delay_, EventKind::PacketDelivery, n,
                            [this, n, packet] { net_.arrive(n, packet, id_); });
    }
  }
  void unicast(Packet packet, NodeId next_hop) override {
    if (packet.kind != PacketKind::Data) ++net_.tx_[packet.kind];
    if (net_.linked(id_, next_hop)) {
      net_.sim_.schedule_in(net_.hop_delay_, EventKind::PacketDelivery, next_hop,
                            [this, next_hop, packet] { net_.arrive(next_hop, packet, id_); });
    } else {
      net_.sim_.schedule_in(net_.hop_delay_, EventKind::Timer, id_, [this, next_hop, packet] {
        if (auto* a = net_.agent(id_)) a->link_failed(packet, next_hop);
      });
    }
  }
  void deliver(Packet packet) override { net_.delivered_.push_back(std::move(packet)); }
  void drop(const Packet& packet, DropReason reason) override { net_.drops_.push_back({packet, reason}); }
  void count(std::string_view what) override { ++net_.counters_[std::string(what)]; }
  void log_transition(std::string_view from, std::string_view to, std::string_view trigger) override {
    net_.transitions_.push_back(
        TransitionRecord{now(), id_, std::string(from), std::string(to), std::string(trigger)});
  }

 private:
  IdealNetwork& net_;
  NodeId id_;
  RandomStream rng_;
};

IdealNetwork::IdealNetwork(DenseGraph graph, double hop_delay, std::uint64_t seed)
    : graph_(std::move(graph)), hop_delay_(hop_delay) {
  for (std::size_t i = 0; i < graph_.size(); ++i) {
    contexts_.push_back(std::make_unique<Context>(*this, static_cast<NodeId>(i), seed));
  }
  agents_.resize(graph_.size());
}

IdealNetwork::~IdealNetwork() = default;

NodeContext& IdealNetwork::context(NodeId node) { return *contexts_.at(static_cast<std::size_t>(node)); }

void IdealNetwork::set_agent(NodeId node, std::unique_ptr<RoutingAgent> agent) {
  agents_.at(static_cast<std::size_t>(node)) = std::move(agent);
}

RoutingAgent* IdealNetwork::agent(NodeId node) { return agents_.at(static_cast<std::size_t>(node)).get(); }

void IdealNetwork::start() {
  for (auto& a : agents_) {
    if (a) a->start();
  }
}

bool IdealNetwork::linked(NodeId a, NodeId b) const {
  const auto& adj = graph_[static_cast<std::size_t>(a)];
  return std::find(adj.begin(), adj.end(), b) != adj.end();
}

std::uint64_t IdealNetwork::counter(const std::string& name) const {
  auto it = counters_.find(name);
  return it == counters_.end() ? 0 : it->second;
}

std::uint64_t IdealNetwork::transmissions(PacketKind kind) const {
  auto it = tx_.find(kind);
  return it == tx_.end() ? 0 : it->second;
}

void IdealNetwork::send_data(NodeId src, NodeId dst, std::int32_t flow, std::uint32_t seq, std::uint32_t bytes) {
  Packet p;
  p.kind = PacketKind::Data;
  p.origin = src;
  p.destination = dst;
  p.bytes = bytes;
  p.ttl = 32;
  DataHeader h;
  h.flow = flow;
  h.seq = seq;
  h.send_time = sim_.now();
  p.body = std::move(h);
  if (auto* a = agent(src)) a->send_data(std::move(p));
}

void IdealNetwork::arrive(NodeId to, Packet packet, NodeId from) {
  auto* a = agent(to);
  if (packet.kind == PacketKind::Data) {
    ++packet.as<DataHeader>().hops;
    if (packet.destination == to) {
      delivered_.push_back(std::move(packet));
      return;
    }
    if (--packet.ttl <= 0) {
      drops_.push_back({packet, DropReason::TtlExpired});
      return;
    }
    if (a) a->send_data(std::move(packet));
    return;
  }
  if (a) a->receive(std::move(packet), from);
}

}  // namespace emanet
