#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "emanet/aodv.hpp"
#include "emanet/olsr.hpp"

namespace emanet {

struct CmlParams {
  int nst = 10;
  int x = 2;
  double t_osc = 30.0;
  double k = 1.0;
  /// Phase the node boots in.
  Phase initial_phase = Phase::Proactive;
  OlsrParams olsr;
  AodvParams aodv;
};

/// ceil(sqrt(nst_effective / k)).
int derive_nht(int nst_effective, double k);

enum class CmlState : std::uint8_t { Proactive, Reactive, TowardReactive, TowardProactive };
std::string_view to_string(CmlState s);

inline Phase stable_phase(CmlState s) {
  return (s == CmlState::Proactive || s == CmlState::TowardReactive) ? Phase::Proactive : Phase::Reactive;
}

/// True for log lines that commit a node to a new stable phase.
bool is_confirmed_shift(const TransitionRecord& t);

class CmlAgent final : public RoutingAgent {
 public:
  CmlAgent(NodeContext& ctx, CmlParams params);
  ~CmlAgent() override;

  void start() override;
  void receive(Packet packet, NodeId from) override;
  void send_data(Packet packet) override;
  void link_failed(Packet packet, NodeId next_hop) override;
  std::string_view name() const override { return "cml"; }

  CmlState state() const { return state_; }
  Phase phase() const { return stable_phase(state_); }
  bool timer_active() const;
  OlsrAgent* olsr() { return olsr_.get(); }
  AodvAgent* aodv() { return aodv_.get(); }
  const CmlParams& params() const { return params_; }

  /// Hop threshold used by toward-p probes.
  int probe_ttl() const { return derive_nht(params_.nst - params_.x, params_.k); }
  /// Largest hop count seen inside the recent window.
  int window_max_hops();

 private:
  void boot_engine(Phase phase);
  void enter(CmlState next, std::string_view trigger);
  void commit(Phase target, std::string_view trigger, bool announce);

  void on_tc();
  void on_source_rrep(int hops);
  void on_hops_seen(int hops);
  void to_r_timeout();
  void send_probe();
  void probe_window_closed(std::uint32_t probe_id);

  void process_cp(Packet packet);
  void process_hcreq(Packet packet, NodeId from);
  void process_hcrep(Packet packet);

  NodeContext& ctx_;
  CmlParams params_;
  CallbackGuard guard_;
  CmlState state_;
  double osc_until_ = -1.0;
  std::unique_ptr<OlsrAgent> olsr_;
  std::unique_ptr<AodvAgent> aodv_;
  // Engines replaced while one of their callbacks is still on the stack.
  std::vector<std::unique_ptr<RoutingAgent>> retired_;

  // toward-r confirmation
  int checks_done_ = 0;
  bool over_threshold_ = false;
  EventHandle guard_timer_;
  std::uint64_t attempt_ = 0;

  // toward-p confirmation
  int probes_sent_ = 0;
  bool silent_probe_ = false;
  std::uint32_t current_probe_ = 0;
  bool current_replied_ = false;
  std::deque<std::pair<double, int>> hop_window_;

  std::uint32_t cp_sequence_ = 0;
  std::set<std::pair<NodeId, std::uint32_t>> seen_cp_;
  std::uint32_t probe_counter_ = 0;
  std::set<std::pair<NodeId, std::uint32_t>> seen_hcreq_;
  std::map<NodeId, NodeId> hc_reverse_;
  std::map<std::uint32_t, std::pair<NodeId, std::uint32_t>> echo_parents_;
};

}  // namespace emanet
