#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "emanet/network.hpp"
#include "emanet/olsr.hpp"

namespace emanet {

/// Lossless medium over a fixed graph where every transmission takes exactly
/// `hop_delay`. No MAC, no contention, no mobility. Used where a property
/// only holds under uniform per-hop delay (first RREQ copy arrives along a
/// shortest path) and by unit tests that need to drive agents by hand.
class IdealNetwork {
 public:
  IdealNetwork(DenseGraph graph, double hop_delay, std::uint64_t seed);
  ~IdealNetwork();
  IdealNetwork(const IdealNetwork&) = delete;
  IdealNetwork& operator=(const IdealNetwork&) = delete;

  std::size_t size() const { return graph_.size(); }
  Simulator& sim() { return sim_; }
  NodeContext& context(NodeId node);
  void set_agent(NodeId node, std::unique_ptr<RoutingAgent> agent);
  RoutingAgent* agent(NodeId node);
  void start();
  void run_until(double t) { sim_.run_until(t); }

  void send_data(NodeId src, NodeId dst, std::int32_t flow, std::uint32_t seq, std::uint32_t bytes = 512);
  /// Replaces the link set; takes effect for transmissions after the call.
  void set_graph(DenseGraph graph) { graph_ = std::move(graph); }
  const DenseGraph& graph() const { return graph_; }
  bool linked(NodeId a, NodeId b) const;

  struct Drop {
    Packet packet;
    DropReason reason;
  };
  const std::vector<Packet>& delivered() const { return delivered_; }
  const std::vector<Drop>& drops() const { return drops_; }
  const std::vector<TransitionRecord>& transitions() const { return transitions_; }
  std::uint64_t counter(const std::string& name) const;
  /// Control transmissions of `kind` (each relay counts).
  std::uint64_t transmissions(PacketKind kind) const;

 private:
  class Context;
  friend class Context;
  void arrive(NodeId to, Packet packet, NodeId from);

  DenseGraph graph_;
  double hop_delay_;
  Simulator sim_;
  std::vector<std::unique_ptr<Context>> contexts_;
  std::vector<std::unique_ptr<RoutingAgent>> agents_;
  std::vector<Packet> delivered_;
  std::vector<Drop> drops_;
  std::vector<TransitionRecord> transitions_;
  std::map<std::string, std::uint64_t> counters_;
  std::map<PacketKind, std::uint64_t> tx_;
};

}  // namespace emanet
