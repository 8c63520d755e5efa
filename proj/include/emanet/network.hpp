#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "emanet/kernel.hpp"
#include "emanet/metrics.hpp"
#include "emanet/mobility.hpp"
#include "emanet/packet.hpp"
#include "emanet/random.hpp"
#include "emanet/security.hpp"

namespace emanet {

/// Channel access timing. Defaults approximate 802.11 DSSS at 2 Mb/s.
struct MacParams {
  double bitrate = 2e6;          // bits per second
  double phy_overhead = 192e-6;  // preamble + PLCP header, seconds
  std::uint32_t mac_header_bytes = 28;
  std::uint32_t ack_bytes = 14;
  double slot = 20e-6;
  double difs = 50e-6;
  double sifs = 10e-6;
  int cw_min = 31;
  int cw_max = 1023;
  int retry_limit = 7;
  std::size_t queue_capacity = 50;
  double broadcast_jitter = 0.01;  // uniform [0, jitter) before a broadcast is queued

  double airtime(std::uint32_t bytes) const {
    return phy_overhead + 8.0 * static_cast<double>(bytes + mac_header_bytes) / bitrate;
  }
  double unicast_exchange(std::uint32_t bytes) const {
    return airtime(bytes) + sifs + phy_overhead + 8.0 * ack_bytes / bitrate;
  }
};

/// What a protocol agent may do to the world around its node.
class NodeContext {
 public:
  virtual ~NodeContext() = default;
  virtual NodeId id() const = 0;
  virtual double now() const = 0;
  virtual RandomStream& rng() = 0;
  virtual EventHandle timer(double delay, std::function<void()> fn, std::string_view label) = 0;
  virtual bool cancel(EventHandle handle) = 0;
  virtual void broadcast(Packet packet) = 0;
  virtual void unicast(Packet packet, NodeId next_hop) = 0;
  /// Data packet reached its destination.
  virtual void deliver(Packet packet) = 0;
  /// Data packet discarded.
  virtual void drop(const Packet& packet, DropReason reason) = 0;
  /// Named event counter (control drops, rejected packets...).
  virtual void count(std::string_view what) = 0;
  virtual void log_transition(std::string_view from, std::string_view to, std::string_view trigger) = 0;
};

class RoutingAgent {
 public:
  virtual ~RoutingAgent() = default;
  virtual void start() = 0;
  /// A control packet (or a data packet in transit) arrived from neighbour `from`.
  virtual void receive(Packet packet, NodeId from) = 0;
  /// Route a data packet: originated here, or received for forwarding.
  virtual void send_data(Packet packet) = 0;
  /// The MAC gave up on `packet` toward `next_hop`.
  virtual void link_failed(Packet packet, NodeId next_hop) = 0;
  virtual std::string_view name() const = 0;
};

/// Wraps callbacks so they become no-ops once the owner is destroyed. Engines
/// replaced mid-run leave timers behind in the queue.
class CallbackGuard {
 public:
  /// Callbacks wrapped so far stop firing.
  void revoke() { token_ = std::make_shared<char>(); }
  std::function<void()> wrap(std::function<void()> fn) const {
    return [w = std::weak_ptr<char>(token_), fn = std::move(fn)] {
      if (!w.expired()) fn();
    };
  }

 private:
  std::shared_ptr<char> token_ = std::make_shared<char>();
};

struct TransitionRecord {
  double time = 0.0;
  NodeId node = kNoNode;
  std::string from;
  std::string to;
  std::string trigger;
};

std::string format_transition(const TransitionRecord& t);

struct WorldConfig {
  Area area;
  LinkModel link;
  MobilityParams mobility;
  MacParams mac;
  SecurityMode security = SecurityMode::None;
  DeviceProfile device;
  std::uint64_t seed = 1;
};

/// Shared wireless medium plus per-node MAC queues, mobility and the
/// security overlay.
///
/// Security is an analytic overlay: size deltas and crypto times are charged
/// to the byte counters and to each packet's accumulated delay, but do not
/// alter event timing. A secured run therefore follows the same trajectory
/// as the unsecured run with the same seed.
class World {
 public:
  World(WorldConfig config, std::vector<Point> positions, Simulator& sim, MetricLog& log);
  ~World();
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  std::size_t size() const { return nodes_.size(); }
  Simulator& sim() { return sim_; }
  MetricLog& metrics() { return log_; }
  const WorldConfig& config() const { return config_; }

  NodeContext& context(NodeId node);
  void set_agent(NodeId node, std::unique_ptr<RoutingAgent> agent);
  RoutingAgent* agent(NodeId node);
  void set_adversary(NodeId node, AdversaryBehavior behavior);
  AdversaryBehavior adversary(NodeId node) const;

  /// Starts agents and the mobility tick.
  void start();

  /// Application hands a data packet to `src`.
  void send_data(NodeId src, NodeId dst, std::int32_t flow, std::uint32_t seq, std::uint32_t bytes);
  /// Adversary-originated broadcast; always unauthentic.
  void inject_broadcast(NodeId node, Packet packet);

  void set_alive(NodeId node, bool alive);
  bool alive(NodeId node) const { return alive_[static_cast<std::size_t>(node)]; }

  const std::vector<Point>& positions() const { return positions_; }
  const std::vector<std::vector<NodeId>>& graph() const { return graph_; }
  bool linked(NodeId a, NodeId b) const;

  /// Overrides the computed neighbour graph until the next mobility tick
  /// (test hook for link breaks in static scenarios).
  void remove_link(NodeId a, NodeId b);

  const std::vector<TransitionRecord>& transitions() const { return transitions_; }
  const std::map<std::string, std::uint64_t, std::less<>>& counters() const { return counters_; }
  std::uint64_t counter(std::string_view name) const;
  /// Post-warmup data packets neither delivered nor dropped yet.
  std::uint64_t data_in_flight() const { return live_data_; }

 private:
  class Node;
  struct TxJob {
    Packet packet;
    NodeId next_hop = kBroadcast;
    int retries = 0;
  };

  friend class Node;

  void enqueue(NodeId node, TxJob job);
  void begin_access(NodeId node);
  void attempt(NodeId node);
  void finish(NodeId node);
  void deliver_frame(NodeId to, Packet packet, NodeId from);
  void account_transmission(NodeId node, const TxJob& job);
  void mobility_tick();
  void refresh_graph();
  void record_transition(NodeId node, std::string_view from, std::string_view to, std::string_view trigger);
  void data_done(const Packet& p);
  void bump(std::string_view what);
  double backoff(NodeId node);

  WorldConfig config_;
  Simulator& sim_;
  MetricLog& log_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::vector<Point> positions_;
  std::vector<NodeKinematics> kinematics_;
  std::vector<RandomStream> mobility_rng_;
  std::vector<bool> alive_;
  std::vector<std::vector<NodeId>> graph_;
  std::vector<TransitionRecord> transitions_;
  std::map<std::string, std::uint64_t, std::less<>> counters_;
  std::uint64_t live_data_ = 0;
  bool started_ = false;
};

}  // namespace emanet
