#pragma once

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "emanet/network.hpp"

namespace emanet {

struct AodvParams {
  double node_traversal_time = 0.04;
  int net_diameter = 35;
  double active_route_timeout = 10.0;
  int rreq_retries = 2;
  std::size_t buffer_capacity = 64;
};

/// 2 x node_traversal_time x net_diameter.
double net_traversal_time(const AodvParams& params);

/// round(k * h^2).
int estimate_size_from_hops(int max_hop_count, double k);

class AodvAgent final : public RoutingAgent {
 public:
  struct Route {
    NodeId next_hop = kNoNode;
    int hops = 0;
    std::uint32_t dest_sequence = 0;
    double expires = 0.0;
  };

  AodvAgent(NodeContext& ctx, AodvParams params);

  void start() override {}
  void receive(Packet packet, NodeId from) override;
  void send_data(Packet packet) override;
  void link_failed(Packet packet, NodeId next_hop) override;
  std::string_view name() const override { return "aodv"; }

  /// Silences pending timers; the object stays valid.
  void retire() { guard_.revoke(); }

  /// RREP reached the node that asked; argument is the installed hop count.
  std::function<void(int)> on_source_rrep;
  /// Hop count carried by any RREQ or RREP this node processes.
  std::function<void(int)> on_hops_seen;

  /// Valid (unexpired) route, if any.
  const Route* route(NodeId destination) const;
  /// Data waiting for discovery, removed from the engine.
  std::vector<Packet> take_buffered();
  std::uint32_t discoveries() const { return rreq_id_; }

 private:
  struct Pending {
    int retries_left = 0;
    int attempt = 0;
    std::vector<Packet> buffer;
    EventHandle timer;
  };

  void discover(NodeId destination);
  void send_rreq(NodeId destination);
  void discovery_timeout(NodeId destination);
  void process_rreq(Packet packet, NodeId from);
  void process_rrep(Packet packet, NodeId from);
  void install(NodeId destination, NodeId next_hop, int hops, std::uint32_t seq);
  void flush(NodeId destination);

  NodeContext& ctx_;
  AodvParams params_;
  CallbackGuard guard_;
  std::map<NodeId, Route> table_;
  std::map<std::pair<NodeId, std::uint32_t>, double> seen_;
  std::map<NodeId, Pending> pending_;
  std::uint32_t own_sequence_ = 0;
  std::uint32_t rreq_id_ = 0;
};

}  // namespace emanet
