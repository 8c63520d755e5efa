#pragma once

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "emanet/network.hpp"

namespace emanet {

struct OlsrParams {
  double hello_interval = 2.0;
  double tc_interval = 5.0;
  double hold_factor = 3.0;  // entry validity = hold_factor x emission interval
  int tc_ttl = 255;
};

struct RouteEntry {
  NodeId next_hop = kNoNode;
  int hops = 0;
};

using RoutingTable = std::map<NodeId, RouteEntry>;
using Adjacency = std::map<NodeId, std::set<NodeId>>;
/// Adjacency lists indexed by node id.
using DenseGraph = std::vector<std::vector<NodeId>>;

/// Greedy MPR cover of `two_hop` (neighbor -> its neighbors). Neighbors that
/// are the sole link to some two-hop node go first, then the one covering the
/// most uncovered nodes, lowest id on ties.
std::set<NodeId> select_mprs(NodeId self, const std::set<NodeId>& one_hop,
                             const std::map<NodeId, std::set<NodeId>>& two_hop);

/// Hop-count shortest paths from `self` over an undirected edge set. Among
/// equal-length paths the lowest next-hop id wins.
RoutingTable compute_routes(NodeId self, const Adjacency& edges);
RoutingTable compute_routes(NodeId self, const DenseGraph& graph);

/// Destinations in the table plus self.
inline int reachable_count(const RoutingTable& table) { return static_cast<int>(table.size()) + 1; }

class OlsrAgent final : public RoutingAgent {
 public:
  OlsrAgent(NodeContext& ctx, OlsrParams params);

  void start() override;
  void receive(Packet packet, NodeId from) override;
  void send_data(Packet packet) override;
  void link_failed(Packet packet, NodeId next_hop) override;
  std::string_view name() const override { return "olsr"; }

  /// Silences pending timers; the object stays valid.
  void retire() { guard_.revoke(); }

  /// Called after each new (non-duplicate) TC has been processed.
  std::function<void()> on_tc;

  const RoutingTable& routes();
  int reachable();
  std::set<NodeId> one_hop();
  const std::set<NodeId>& mprs();
  std::set<NodeId> mpr_selectors();
  /// Origins currently present in the topology database.
  std::set<NodeId> topology_origins();
  const OlsrParams& params() const { return params_; }

 private:
  struct Neighbor {
    double expires = 0.0;
    std::set<NodeId> neighbors;
  };
  struct TopologyEntry {
    std::uint32_t sequence = 0;
    std::set<NodeId> advertised;
    double expires = 0.0;
  };

  void emit_hello();
  void emit_tc();
  void process_hello(const Packet& packet, NodeId from);
  void process_tc(Packet packet, NodeId from);
  void purge();
  void recompute();

  NodeContext& ctx_;
  OlsrParams params_;
  CallbackGuard guard_;
  std::map<NodeId, Neighbor> one_hop_;
  std::map<NodeId, double> selectors_;
  std::set<NodeId> mprs_;
  std::map<NodeId, TopologyEntry> topology_;
  std::set<std::pair<NodeId, std::uint32_t>> seen_tc_;
  std::uint32_t tc_sequence_ = 0;
  RoutingTable table_;
  bool dirty_ = true;
  bool mprs_dirty_ = true;
};

}  // namespace emanet
