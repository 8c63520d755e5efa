#include "emanet/network.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace emanet {

std::string format_transition(const TransitionRecord& t) {
  return fmt::format("{:.6f}\t{}\t{}\t{}\t{}", t.time, t.node, t.from, t.to, t.trigger);
}

class World::Node final : public NodeContext {
 public:
  Node(World& world, NodeId id, const RandomStream& root)
      : world_(world),
        id_(id),
        protocol_rng_(root.fork("protocol", static_cast<std::uint64_t>(id))),
        mac_rng_(root.fork("mac", static_cast<std::uint64_t>(id))),
        cw_(world.config_.mac.cw_min) {}

  NodeId id() const override { return id_; }
  double now() const override { return world_.sim_.now(); }
  RandomStream& rng() override { return protocol_rng_; }

  EventHandle timer(double delay, std::function<void()> fn, std::string_view label) override {
    std::string detail = world_.sim_.tracing() ? std::string(label) : std::string();
    return world_.sim_.schedule_in(delay, EventKind::Timer, id_, std::move(fn), std::move(detail));
  }
  bool cancel(EventHandle handle) override { return world_.sim_.cancel(handle); }

  void broadcast(Packet packet) override {
    packet.destination = packet.destination == kNoNode ? kBroadcast : packet.destination;
    const double jitter = mac_rng_.uniform(0.0, world_.config_.mac.broadcast_jitter);
    const NodeId self = id_;
    world_.sim_.schedule_in(
        jitter, EventKind::Timer, id_,
        [w = &world_, self, p = std::move(packet)]() mutable { w->enqueue(self, TxJob{std::move(p), kBroadcast, 0}); },
        world_.sim_.tracing() ? "broadcast-jitter" : "");
  }

  void unicast(Packet packet, NodeId next_hop) override {
    world_.enqueue(id_, TxJob{std::move(packet), next_hop, 0});
  }

  void deliver(Packet packet) override {
    const auto& h = packet.as<DataHeader>();
    world_.log_.record_delivery(h.flow, h.seq, h.send_time, now() + packet.crypto_delay, h.hops,
                                packet.crypto_delay);
    world_.data_done(packet);
  }

  void drop(const Packet& packet, DropReason reason) override {
    if (packet.kind != PacketKind::Data) {
      world_.bump(fmt::format("drop.{}.{}", to_string(packet.kind), to_string(reason)));
      return;
    }
    const auto& h = packet.as<DataHeader>();
    world_.log_.record_drop(h.flow, h.send_time, reason);
    world_.data_done(packet);
  }

  void count(std::string_view what) override { world_.bump(what); }

  void log_transition(std::string_view from, std::string_view to, std::string_view trigger) override {
    world_.record_transition(id_, from, to, trigger);
  }

  World& world_;
  NodeId id_;
  RandomStream protocol_rng_;
  RandomStream mac_rng_;
  std::unique_ptr<RoutingAgent> agent_;
  AdversaryBehavior adversary_ = AdversaryBehavior::None;
  std::deque<TxJob> control_q_;
  std::deque<TxJob> data_q_;
  bool mac_active_ = false;
  double busy_until_ = 0.0;
  int cw_;
};

World::World(WorldConfig config, std::vector<Point> positions, Simulator& sim, MetricLog& log)
    : config_(std::move(config)), sim_(sim), log_(log), positions_(std::move(positions)) {
  config_.area.validate();
  const RandomStream root(config_.seed);
  const std::size_t n = positions_.size();
  alive_.assign(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    nodes_.push_back(std::make_unique<Node>(*this, static_cast<NodeId>(i), root));
    mobility_rng_.push_back(root.fork("mobility", i));
    kinematics_.push_back(initial_kinematics(mobility_rng_.back(), config_.area, config_.mobility, positions_[i]));
  }
  refresh_graph();
}

World::~World() = default;

NodeContext& World::context(NodeId node) { return *nodes_[static_cast<std::size_t>(node)]; }

void World::set_agent(NodeId node, std::unique_ptr<RoutingAgent> agent) {
  nodes_[static_cast<std::size_t>(node)]->agent_ = std::move(agent);
}

RoutingAgent* World::agent(NodeId node) { return nodes_[static_cast<std::size_t>(node)]->agent_.get(); }

void World::set_adversary(NodeId node, AdversaryBehavior behavior) {
  nodes_[static_cast<std::size_t>(node)]->adversary_ = behavior;
}

AdversaryBehavior World::adversary(NodeId node) const {
  return nodes_[static_cast<std::size_t>(node)]->adversary_;
}

std::uint64_t World::counter(std::string_view name) const {
  auto it = counters_.find(name);
  return it == counters_.end() ? 0 : it->second;
}

void World::bump(std::string_view what) {
  auto it = counters_.find(what);
  if (it == counters_.end()) {
    counters_.emplace(std::string(what), 1);
  } else {
    ++it->second;
  }
}

void World::start() {
  if (started_) return;
  started_ = true;
  for (auto& node : nodes_) {
    if (node->agent_) node->agent_->start();
  }
  if (!config_.mobility.stationary()) {
    sim_.schedule_in(config_.mobility.tick, EventKind::MobilityTick, kNoNode, [this] { mobility_tick(); });
  }
}

void World::mobility_tick() {
  const double dt = config_.mobility.tick;
  const double t0 = sim_.now() - dt;
  for (std::size_t i = 0; i < kinematics_.size(); ++i) {
    kinematics_[i] = advance(kinematics_[i], t0, dt, mobility_rng_[i], config_.area, config_.mobility);
    positions_[i] = kinematics_[i].position;
  }
  refresh_graph();
  sim_.schedule_in(dt, EventKind::MobilityTick, kNoNode, [this] { mobility_tick(); });
}

void World::refresh_graph() {
  std::unique_ptr<bool[]> flags(new bool[alive_.size()]);
  for (std::size_t i = 0; i < alive_.size(); ++i) flags[i] = alive_[i];
  graph_ = neighbor_graph(positions_, config_.link, config_.area, std::span<const bool>(flags.get(), alive_.size()));
}

bool World::linked(NodeId a, NodeId b) const {
  const auto& adj = graph_[static_cast<std::size_t>(a)];
  return std::binary_search(adj.begin(), adj.end(), b);
}

void World::remove_link(NodeId a, NodeId b) {
  auto erase = [&](NodeId x, NodeId y) {
    auto& adj = graph_[static_cast<std::size_t>(x)];
    adj.erase(std::remove(adj.begin(), adj.end(), y), adj.end());
  };
  erase(a, b);
  erase(b, a);
}

void World::set_alive(NodeId node, bool alive) {
  auto& n = *nodes_[static_cast<std::size_t>(node)];
  alive_[static_cast<std::size_t>(node)] = alive;
  if (!alive) {
    for (auto* q : {&n.control_q_, &n.data_q_}) {
      for (auto& job : *q) {
        if (job.packet.kind == PacketKind::Data) n.drop(job.packet, DropReason::NodeDown);
      }
      q->clear();
    }
  }
  refresh_graph();
}

void World::send_data(NodeId src, NodeId dst, std::int32_t flow, std::uint32_t seq, std::uint32_t bytes) {
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
  log_.record_sent(flow, sim_.now());
  if (sim_.now() >= log_.warmup()) ++live_data_;
  auto& node = *nodes_[static_cast<std::size_t>(src)];
  if (!alive(src) || !node.agent_) {
    node.drop(p, DropReason::NodeDown);
    return;
  }
  node.agent_->send_data(std::move(p));
}

void World::data_done(const Packet& p) {
  if (p.as<DataHeader>().send_time >= log_.warmup() && live_data_ > 0) --live_data_;
}

void World::inject_broadcast(NodeId node, Packet packet) {
  packet.authentic = false;
  if (sim_.now() >= log_.warmup()) ++log_.security().adversary_injected;
  nodes_[static_cast<std::size_t>(node)]->broadcast(std::move(packet));
}

void World::record_transition(NodeId node, std::string_view from, std::string_view to,
                              std::string_view trigger) {
  transitions_.push_back(TransitionRecord{sim_.now(), node, std::string(from), std::string(to), std::string(trigger)});
}

double World::backoff(NodeId node) {
  auto& n = *nodes_[static_cast<std::size_t>(node)];
  const auto slots = n.mac_rng_.below(static_cast<std::uint64_t>(n.cw_) + 1);
  return config_.mac.difs + static_cast<double>(slots) * config_.mac.slot;
}

void World::enqueue(NodeId node, TxJob job) {
  auto& n = *nodes_[static_cast<std::size_t>(node)];
  if (!alive(node)) {
    if (job.packet.kind == PacketKind::Data) n.drop(job.packet, DropReason::NodeDown);
    return;
  }
  // Tamper hook: an adversary rewrites the hop budget of HCREQs it relays.
  if (n.adversary_ == AdversaryBehavior::TamperHcreq && job.packet.kind == PacketKind::HcReq &&
      job.packet.origin != node) {
    job.packet.as<HcReqPacket>().ttl = 0;
    job.packet.authentic = false;
    bump("adversary.tampered-hcreq");
  }
  // Adversaries hold no credentials for what they originate.
  if (n.adversary_ != AdversaryBehavior::None && job.packet.origin == node) job.packet.authentic = false;

  if (n.control_q_.size() + n.data_q_.size() >= config_.mac.queue_capacity) {
    n.drop(job.packet, DropReason::QueueOverflow);
    return;
  }
  if (is_control(job.packet.kind)) {
    n.control_q_.push_back(std::move(job));
  } else {
    n.data_q_.push_back(std::move(job));
  }
  if (!n.mac_active_) begin_access(node);
}

void World::begin_access(NodeId node) {
  auto& n = *nodes_[static_cast<std::size_t>(node)];
  n.mac_active_ = true;
  sim_.schedule_in(backoff(node), EventKind::Timer, node, [this, node] { attempt(node); },
                   sim_.tracing() ? "mac-attempt" : "");
}

void World::account_transmission(NodeId node, const TxJob& job) {
  const double t = sim_.now();
  const Packet& p = job.packet;
  const auto cost = apply_security(p.bytes, config_.security, config_.device);
  if (p.kind == PacketKind::Data) {
    log_.record_data_transmission(p.bytes + cost.size_delta, t);
    const auto route_bytes = source_route_bytes(p.as<DataHeader>());
    if (route_bytes > 0) log_.record_route_header(route_bytes, t);
  } else {
    log_.record_control(p.kind, p.bytes + cost.size_delta, t);
  }
  if (config_.security != SecurityMode::None && t >= log_.warmup()) {
    ++log_.security().secured_transmissions;
  }
  (void)node;
}

void World::attempt(NodeId node) {
  auto& n = *nodes_[static_cast<std::size_t>(node)];
  if (!alive(node) || (n.control_q_.empty() && n.data_q_.empty())) {
    n.mac_active_ = false;
    return;
  }
  const double now = sim_.now();
  if (n.busy_until_ > now) {
    sim_.schedule(n.busy_until_ + backoff(node), EventKind::Timer, node, [this, node] { attempt(node); },
                  sim_.tracing() ? "mac-defer" : "");
    return;
  }
  auto& queue = n.control_q_.empty() ? n.data_q_ : n.control_q_;
  TxJob& job = queue.front();
  const bool broadcast = job.next_hop == kBroadcast;
  const auto& mac = config_.mac;
  std::uint32_t frame = job.packet.bytes;
  if (job.packet.kind == PacketKind::Data) frame += source_route_bytes(job.packet.as<DataHeader>());
  const double on_air = mac.airtime(frame);
  const double duration = broadcast ? on_air : mac.unicast_exchange(frame);
  const double end = now + duration;

  n.busy_until_ = std::max(n.busy_until_, end);
  for (NodeId nb : graph_[static_cast<std::size_t>(node)]) {
    auto& other = *nodes_[static_cast<std::size_t>(nb)];
    other.busy_until_ = std::max(other.busy_until_, end);
  }
  if (job.retries == 0) account_transmission(node, job);

  // Per-hop crypto processing: sender side now, receiver side on delivery.
  const auto cost = apply_security(job.packet.bytes, config_.security, config_.device);
  if (config_.security != SecurityMode::None && now >= log_.warmup()) {
    log_.security().crypto_delay_total += cost.sender_delay;
  }

  auto schedule_delivery = [&](NodeId to, Packet copy) {
    copy.crypto_delay += cost.sender_delay + cost.receiver_delay;
    sim_.schedule(now + on_air, EventKind::PacketDelivery, to,
                  [this, to, from = node, p = std::move(copy)]() mutable { deliver_frame(to, std::move(p), from); },
                  sim_.tracing() ? fmt::format("{} from {}", to_string(job.packet.kind), node) : "");
  };

  if (broadcast) {
    for (NodeId nb : graph_[static_cast<std::size_t>(node)]) schedule_delivery(nb, job.packet);
    queue.pop_front();
    n.cw_ = mac.cw_min;
    sim_.schedule(end, EventKind::Timer, node, [this, node] { finish(node); }, sim_.tracing() ? "mac-done" : "");
    return;
  }

  if (linked(node, job.next_hop)) {
    schedule_delivery(job.next_hop, std::move(job.packet));
    queue.pop_front();
    n.cw_ = mac.cw_min;
    sim_.schedule(end, EventKind::Timer, node, [this, node] { finish(node); }, sim_.tracing() ? "mac-done" : "");
    return;
  }

  ++job.retries;
  if (job.retries > mac.retry_limit) {
    TxJob failed = std::move(job);
    queue.pop_front();
    n.cw_ = mac.cw_min;
    bump("mac.link-failures");
    sim_.schedule(end, EventKind::Timer, node,
                  [this, node, f = std::move(failed)]() mutable {
                    auto& self = *nodes_[static_cast<std::size_t>(node)];
                    if (self.agent_ && alive(node)) {
                      self.agent_->link_failed(std::move(f.packet), f.next_hop);
                    } else if (f.packet.kind == PacketKind::Data) {
                      self.drop(f.packet, DropReason::NodeDown);
                    }
                    finish(node);
                  },
                  sim_.tracing() ? "mac-give-up" : "");
    return;
  }
  n.cw_ = std::min(2 * n.cw_ + 1, mac.cw_max);
  sim_.schedule(end + backoff(node), EventKind::Timer, node, [this, node] { attempt(node); },
                sim_.tracing() ? "mac-retry" : "");
}

void World::finish(NodeId node) {
  auto& n = *nodes_[static_cast<std::size_t>(node)];
  n.mac_active_ = false;
  if (alive(node) && (!n.control_q_.empty() || !n.data_q_.empty())) begin_access(node);
}

void World::deliver_frame(NodeId to, Packet packet, NodeId from) {
  auto& n = *nodes_[static_cast<std::size_t>(to)];
  if (!alive(to)) {
    if (packet.kind == PacketKind::Data) n.drop(packet, DropReason::NodeDown);
    return;
  }
  if (config_.security != SecurityMode::None && sim_.now() >= log_.warmup()) {
    const auto cost = apply_security(packet.bytes, config_.security, config_.device);
    log_.security().crypto_delay_total += cost.receiver_delay;
  }
  if (!authenticate(packet, config_.security)) {
    if (sim_.now() >= log_.warmup()) ++log_.security().rejected;
    bump(fmt::format("rejected.{}", to_string(packet.kind)));
    if (packet.kind == PacketKind::Data) n.drop(packet, DropReason::NoRoute);
    return;
  }
  if (n.adversary_ == AdversaryBehavior::DropCp && packet.kind == PacketKind::Cp) {
    bump("adversary.dropped-cp");
    return;
  }
  if (packet.kind == PacketKind::Data) {
    auto& h = packet.as<DataHeader>();
    ++h.hops;
    if (packet.destination == to) {
      n.deliver(std::move(packet));
      return;
    }
    if (--packet.ttl <= 0) {
      n.drop(packet, DropReason::TtlExpired);
      return;
    }
  }
  if (!n.agent_) {
    if (packet.kind == PacketKind::Data) n.drop(packet, DropReason::NoRoute);
    return;
  }
  if (packet.kind == PacketKind::Data) {
    n.agent_->send_data(std::move(packet));
  } else {
    n.agent_->receive(std::move(packet), from);
  }
}

}  // namespace emanet
