#include "emanet/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace emanet {

std::vector<Point> place_nodes(const ScenarioConfig& config) {
  RandomStream stream = RandomStream(config.seed).fork("placement", 0);
  const auto n = static_cast<std::size_t>(config.nodes);
  const int attempts = config.placement == Placement::Connected ? 1000 : 1;
  for (int a = 0; a < attempts; ++a) {
    std::vector<Point> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(sample_waypoint(stream, config.area));
    if (config.placement == Placement::Uniform) return pts;
    if (connected(neighbor_graph(pts, config.link, config.area))) return pts;
  }
  throw ConfigError(fmt::format("scenario.placement: no connected layout for N={} after {} draws", config.nodes,
                                attempts));
}

std::vector<Flow> plan_flows(const ScenarioConfig& config) {
  std::vector<NodeId> legit;
  for (NodeId i = 0; i < config.nodes; ++i) {
    // Listed nodes stay out of the traffic plan even when their behavior is
    // none, so an attacked run and its clean baseline carry the same flows.
    const auto& adv = config.adversary.nodes;
    if (std::find(adv.begin(), adv.end(), i) != adv.end()) continue;
    legit.push_back(i);
  }
  RandomStream stream = RandomStream(config.seed).fork("traffic", 0);
  const int count = std::min(config.traffic.flows, static_cast<int>(legit.size()) - 1);
  std::vector<Flow> flows;
  for (int f = 0; f < count; ++f) {
    Flow flow;
    flow.id = f;
    const auto s = stream.below(legit.size());
    auto d = stream.below(legit.size() - 1);
    if (d >= s) ++d;
    flow.source = legit[s];
    flow.destination = legit[d];
    flow.start = stream.uniform(config.traffic.start_min, config.traffic.start_max);
    flows.push_back(flow);
  }
  return flows;
}

Scenario::Scenario(ScenarioConfig config, std::ostream* trace) : config_(std::move(config)), log_(config_.warmup) {
  config_.validate();
  sim_.set_trace(trace);
  WorldConfig wc;
  wc.area = config_.area;
  wc.link = config_.link;
  wc.mobility = config_.mobility;
  wc.mac = config_.mac;
  wc.security = config_.security;
  wc.device = config_.device;
  wc.seed = config_.seed;
  world_ = std::make_unique<World>(wc, place_nodes(config_), sim_, log_);

  for (NodeId i = 0; i < config_.nodes; ++i) {
    NodeContext& ctx = world_->context(i);
    std::unique_ptr<RoutingAgent> agent;
    switch (config_.protocol) {
      case ProtocolKind::Olsr: agent = std::make_unique<OlsrAgent>(ctx, config_.olsr); break;
      case ProtocolKind::Aodv: agent = std::make_unique<AodvAgent>(ctx, config_.aodv); break;
      case ProtocolKind::Dsr: agent = std::make_unique<DsrAgent>(ctx, config_.dsr); break;
      case ProtocolKind::Cml: {
        CmlParams p = config_.cml;
        p.olsr = config_.olsr;
        p.aodv = config_.aodv;
        agent = std::make_unique<CmlAgent>(ctx, p);
        break;
      }
    }
    world_->set_agent(i, std::move(agent));
  }
  if (config_.adversary.behavior != AdversaryBehavior::None) {
    for (NodeId n : config_.adversary.nodes) world_->set_adversary(n, config_.adversary.behavior);
  }
  flows_ = plan_flows(config_);
  world_->start();
  schedule_traffic();
  schedule_adversary();
}

Scenario::~Scenario() = default;

bool Scenario::is_adversary(NodeId n) const {
  const auto& adv = config_.adversary.nodes;
  return config_.adversary.behavior != AdversaryBehavior::None && std::find(adv.begin(), adv.end(), n) != adv.end();
}

CmlAgent* Scenario::cml(NodeId n) { return dynamic_cast<CmlAgent*>(world_->agent(n)); }

void Scenario::send(const Flow& flow, std::uint32_t seq) {
  world_->send_data(flow.source, flow.destination, flow.id, seq, config_.traffic.packet_bytes);
  const double next = sim_.now() + 1.0 / config_.traffic.rate;
  if (next > config_.duration) return;
  sim_.schedule(next, EventKind::TrafficSend, flow.source, [this, flow, seq] { send(flow, seq + 1); },
                sim_.tracing() ? fmt::format("flow {} seq {}", flow.id, seq + 1) : "");
}

void Scenario::schedule_traffic() {
  for (const auto& flow : flows_) {
    if (flow.start > config_.duration) continue;
    sim_.schedule(flow.start, EventKind::TrafficSend, flow.source, [this, flow] { send(flow, 0); },
                  sim_.tracing() ? fmt::format("flow {} seq 0", flow.id) : "");
  }
}

void Scenario::schedule_adversary() {
  const auto& role = config_.adversary;
  if (role.behavior != AdversaryBehavior::ForgeCp && role.behavior != AdversaryBehavior::Oscillate) return;
  for (double t = role.start; t <= config_.duration; t += role.period) {
    if (role.behavior == AdversaryBehavior::ForgeCp) {
      const NodeId attacker = role.nodes.front();
      sim_.schedule(t, EventKind::Timer, attacker, [this, attacker] {
        if (!world_->alive(attacker)) return;
        world_->inject_broadcast(attacker, make_cp(attacker, CpPacket{config_.adversary.target_phase, ++forged_sequence_}));
      }, sim_.tracing() ? "adversary-forge-cp" : "");
    } else {
      sim_.schedule(t, EventKind::Timer, kNoNode, [this] {
        for (NodeId n : config_.adversary.nodes) world_->set_alive(n, !world_->alive(n));
      }, sim_.tracing() ? "adversary-oscillate" : "");
    }
  }
}

void Scenario::run_until(double t) { sim_.run_until(std::min(t, config_.duration)); }

int confirmed_shifts(const std::vector<TransitionRecord>& log) {
  return static_cast<int>(std::count_if(log.begin(), log.end(), is_confirmed_shift));
}

RunSummary Scenario::summary() const {
  RunSummary s = summarize(log_, config_.nodes, config_.traffic.packet_bytes);
  s.protocol = std::string(to_string(config_.protocol));
  s.security_mode = std::string(to_string(config_.security));
  s.seed = config_.seed;
  s.phase_shifts = confirmed_shifts(world_->transitions());
  return s;
}

RunResult run_scenario(const ScenarioConfig& config, std::ostream* trace) {
  Scenario sc(config, trace);
  sc.run();
  return RunResult{sc.summary(), sc.world().transitions(), sc.log().security()};
}

}  // namespace emanet
