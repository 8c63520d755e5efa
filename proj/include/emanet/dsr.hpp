#pragma once

#include <map>
#include <set>
#include <vector>

#include "emanet/network.hpp"

namespace emanet {

struct DsrParams {
  std::size_t paths_per_destination = 3;
  double cache_lifetime = 30.0;
  double discovery_backoff = 0.5;
  double discovery_backoff_max = 10.0;
  double buffer_timeout = 30.0;
  std::size_t buffer_capacity = 64;
  int rreq_ttl = 35;
};

using Path = std::vector<NodeId>;

class DsrAgent final : public RoutingAgent {
 public:
  DsrAgent(NodeContext& ctx, DsrParams params);

  void start() override {}
  void receive(Packet packet, NodeId from) override;
  void send_data(Packet packet) override;
  void link_failed(Packet packet, NodeId next_hop) override;
  std::string_view name() const override { return "dsr"; }

  /// Shortest unexpired cached path to `destination`, starting at self.
  const Path* best_path(NodeId destination);
  std::size_t cached_paths(NodeId destination);
  std::uint32_t discoveries() const { return rreq_id_; }

 private:
  struct Cached {
    Path path;
    double expires = 0.0;
  };
  struct Buffered {
    Packet packet;
    double expires = 0.0;
  };
  struct Discovery {
    double backoff = 0.0;
    EventHandle timer;
  };

  void cache(Path path);
  void purge_link(NodeId a, NodeId b);
  void expire_cache();
  void discover(NodeId destination);
  void retry_discovery(NodeId destination);
  void flush(NodeId destination);
  void forward(Packet packet);
  void process_rreq(Packet packet);
  void process_rrep(Packet packet);
  void process_rerr(Packet packet);

  NodeContext& ctx_;
  DsrParams params_;
  CallbackGuard guard_;
  std::map<NodeId, std::vector<Cached>> cache_;
  std::set<std::pair<NodeId, std::uint32_t>> seen_;
  std::map<NodeId, std::vector<Buffered>> buffer_;
  std::map<NodeId, Discovery> discovery_;
  std::uint32_t rreq_id_ = 0;
};

}  // namespace emanet
