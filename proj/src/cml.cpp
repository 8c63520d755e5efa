#include "emanet/cml.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace emanet {

int derive_nht(int nst_effective, double k) {
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(nst_effective) / k) - 1e-12));
}

std::string_view to_string(CmlState s) {
  switch (s) {
    case CmlState::Proactive: return "p-phase";
    case CmlState::Reactive: return "r-phase";
    case CmlState::TowardReactive: return "o-phase(toward-r)";
    case CmlState::TowardProactive: return "o-phase(toward-p)";
  }
  return "?";
}

bool is_confirmed_shift(const TransitionRecord& t) {
  return (t.from == "o-phase(toward-r)" && t.to == "r-phase") ||
         (t.from == "o-phase(toward-p)" && t.to == "p-phase");
}

CmlAgent::CmlAgent(NodeContext& ctx, CmlParams params)
    : ctx_(ctx),
      params_(params),
      state_(params.initial_phase == Phase::Proactive ? CmlState::Proactive : CmlState::Reactive) {}

CmlAgent::~CmlAgent() = default;

bool CmlAgent::timer_active() const { return ctx_.now() < osc_until_; }

void CmlAgent::start() { boot_engine(phase()); }

void CmlAgent::boot_engine(Phase phase) {
  std::vector<Packet> carried;
  retired_.clear();
  if (aodv_) {
    carried = aodv_->take_buffered();
    aodv_->retire();
    retired_.push_back(std::move(aodv_));
  }
  if (olsr_) {
    olsr_->retire();
    retired_.push_back(std::move(olsr_));
  }
  if (phase == Phase::Proactive) {
    olsr_ = std::make_unique<OlsrAgent>(ctx_, params_.olsr);
    olsr_->on_tc = [this] { on_tc(); };
    olsr_->start();
  } else {
    aodv_ = std::make_unique<AodvAgent>(ctx_, params_.aodv);
    aodv_->on_source_rrep = [this](int h) { on_source_rrep(h); };
    aodv_->on_hops_seen = [this](int h) { on_hops_seen(h); };
    aodv_->start();
  }
  for (auto& p : carried) send_data(std::move(p));
}

void CmlAgent::enter(CmlState next, std::string_view trigger) {
  ctx_.log_transition(to_string(state_), to_string(next), trigger);
  state_ = next;
  ++attempt_;
}

void CmlAgent::commit(Phase target, std::string_view trigger, bool announce) {
  ctx_.cancel(guard_timer_);
  enter(target == Phase::Proactive ? CmlState::Proactive : CmlState::Reactive, trigger);
  osc_until_ = ctx_.now() + params_.t_osc;
  hop_window_.clear();
  boot_engine(target);
  if (announce) {
    CpPacket cp{target, ++cp_sequence_};
    seen_cp_.emplace(ctx_.id(), cp.sequence);
    ctx_.broadcast(make_cp(ctx_.id(), cp));
  }
}

void CmlAgent::on_tc() {
  if (!olsr_) return;
  const int count = olsr_->reachable();
  if (state_ == CmlState::Proactive) {
    if (count > params_.nst && !timer_active()) {
      enter(CmlState::TowardReactive, fmt::format("tc-count:{}", count));
      checks_done_ = 0;
      over_threshold_ = false;
      const auto attempt = attempt_;
      guard_timer_ = ctx_.timer(3.0 * params_.olsr.tc_interval, guard_.wrap([this, attempt] {
                                  if (attempt == attempt_) to_r_timeout();
                                }),
                                "cml-o-guard");
    }
    return;
  }
  if (state_ != CmlState::TowardReactive) return;
  ++checks_done_;
  if (count > params_.nst + params_.x) over_threshold_ = true;
  if (checks_done_ < 2) return;
  if (over_threshold_) {
    commit(Phase::Reactive, fmt::format("confirmed:tc-count:{}", count), true);
  } else {
    ctx_.cancel(guard_timer_);
    enter(CmlState::Proactive, "resumed:tc-count");
  }
}

void CmlAgent::to_r_timeout() {
  if (state_ == CmlState::TowardReactive) enter(CmlState::Proactive, "resumed:tc-timeout");
}

void CmlAgent::on_hops_seen(int hops) { hop_window_.emplace_back(ctx_.now(), hops); }

int CmlAgent::window_max_hops() {
  const double horizon = ctx_.now() - params_.t_osc;
  while (!hop_window_.empty() && hop_window_.front().first < horizon) hop_window_.pop_front();
  int h = 0;
  for (const auto& [t, v] : hop_window_) h = std::max(h, v);
  return h;
}

void CmlAgent::on_source_rrep(int /*hops*/) {
  if (state_ != CmlState::Reactive || timer_active()) return;
  const int estimate = estimate_size_from_hops(window_max_hops(), params_.k);
  if (estimate > params_.nst) return;
  enter(CmlState::TowardProactive, fmt::format("rrep-estimate:{}", estimate));
  probes_sent_ = 0;
  silent_probe_ = false;
  send_probe();
}

void CmlAgent::send_probe() {
  const int ttl = probe_ttl();
  HcReqPacket msg;
  msg.probe_id = ++probe_counter_;
  msg.ttl = ttl;
  msg.initial_ttl = ttl;
  current_probe_ = msg.probe_id;
  current_replied_ = false;
  ++probes_sent_;
  seen_hcreq_.emplace(ctx_.id(), msg.probe_id);
  ctx_.broadcast(make_hcreq(ctx_.id(), msg));
  const auto id = msg.probe_id;
  ctx_.timer(4.0 * net_traversal_time(params_.aodv), guard_.wrap([this, id] { probe_window_closed(id); }),
             "cml-probe-window");
}

void CmlAgent::probe_window_closed(std::uint32_t probe_id) {
  if (state_ != CmlState::TowardProactive || probe_id != current_probe_) return;
  if (!current_replied_) silent_probe_ = true;
  if (probes_sent_ < 2) {
    send_probe();
    return;
  }
  if (silent_probe_) {
    commit(Phase::Proactive, "confirmed:probe-silent", true);
  } else {
    enter(CmlState::Reactive, "resumed:probe-answered");
  }
}

void CmlAgent::process_cp(Packet packet) {
  const auto cp = packet.as<CpPacket>();
  const NodeId origin = packet.origin;
  if (!seen_cp_.emplace(origin, cp.sequence).second) return;
  if (origin == ctx_.id()) return;
  ctx_.broadcast(packet);
  if (phase() == cp.target_phase || timer_active()) return;
  const std::string trigger = fmt::format("cp:{}", origin);
  if (state_ == CmlState::Proactive) enter(CmlState::TowardReactive, trigger);
  if (state_ == CmlState::Reactive) enter(CmlState::TowardProactive, trigger);
  commit(cp.target_phase, trigger, false);
}

void CmlAgent::process_hcreq(Packet packet, NodeId from) {
  const NodeId self = ctx_.id();
  const NodeId origin = packet.origin;
  const auto msg = packet.as<HcReqPacket>();
  if (origin == self) return;
  if (!seen_hcreq_.emplace(origin, msg.probe_id).second) return;
  hc_reverse_[origin] = from;
  if (msg.ttl <= 0) {
    HcRepPacket rep{self, origin, msg.probe_id, false};
    ctx_.unicast(make_hcrep(self, rep), from);
    return;
  }
  packet.as<HcReqPacket>().ttl = msg.ttl - 1;
  ctx_.broadcast(std::move(packet));
  if (msg.is_echo) return;
  HcReqPacket echo;
  echo.probe_id = ++probe_counter_;
  echo.ttl = msg.initial_ttl;
  echo.initial_ttl = msg.initial_ttl;
  echo.is_echo = true;
  echo.echo_parent_origin = origin;
  echo.echo_parent_probe = msg.probe_id;
  echo_parents_[echo.probe_id] = {origin, msg.probe_id};
  seen_hcreq_.emplace(self, echo.probe_id);
  ctx_.broadcast(make_hcreq(self, echo));
}

void CmlAgent::process_hcrep(Packet packet) {
  const NodeId self = ctx_.id();
  const auto msg = packet.as<HcRepPacket>();
  if (msg.probe_origin != self) {
    auto it = hc_reverse_.find(msg.probe_origin);
    if (it == hc_reverse_.end()) {
      ctx_.count("cml.hcrep-no-reverse-route");
      return;
    }
    ctx_.unicast(std::move(packet), it->second);
    return;
  }
  if (auto parent = echo_parents_.find(msg.probe_id); parent != echo_parents_.end()) {
    const auto [parent_origin, parent_probe] = parent->second;
    auto it = hc_reverse_.find(parent_origin);
    if (it == hc_reverse_.end()) {
      ctx_.count("cml.echo-parent-unknown");
      return;
    }
    HcRepPacket fwd{msg.responder, parent_origin, parent_probe, true};
    ctx_.unicast(make_hcrep(self, fwd), it->second);
    return;
  }
  if (state_ == CmlState::TowardProactive && msg.probe_id == current_probe_) current_replied_ = true;
}

void CmlAgent::receive(Packet packet, NodeId from) {
  switch (packet.kind) {
    case PacketKind::Cp: process_cp(std::move(packet)); break;
    case PacketKind::HcReq: process_hcreq(std::move(packet), from); break;
    case PacketKind::HcRep: process_hcrep(std::move(packet)); break;
    case PacketKind::Hello:
    case PacketKind::Tc:
      if (olsr_) olsr_->receive(std::move(packet), from);
      break;
    case PacketKind::Rreq:
    case PacketKind::Rrep:
      if (aodv_) aodv_->receive(std::move(packet), from);
      break;
    default: ctx_.count("cml.ignored-packet"); break;
  }
}

void CmlAgent::send_data(Packet packet) {
  if (olsr_) {
    olsr_->send_data(std::move(packet));
  } else {
    aodv_->send_data(std::move(packet));
  }
}

void CmlAgent::link_failed(Packet packet, NodeId next_hop) {
  if (packet.kind == PacketKind::HcRep || packet.kind == PacketKind::HcReq || packet.kind == PacketKind::Cp) {
    ctx_.count("cml.control-link-failure");
    return;
  }
  if (olsr_) {
    olsr_->link_failed(std::move(packet), next_hop);
  } else {
    aodv_->link_failed(std::move(packet), next_hop);
  }
}

}  // namespace emanet
