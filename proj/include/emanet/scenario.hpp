#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "emanet/config.hpp"

namespace emanet {

struct Flow {
  std::int32_t id = 0;
  NodeId source = kNoNode;
  NodeId destination = kNoNode;
  double start = 0.0;
};

/// Initial positions for `config`. Connected placement redraws up to 1000
/// times and throws ConfigError if no connected layout turns up.
std::vector<Point> place_nodes(const ScenarioConfig& config);

/// Flow endpoints drawn among nodes not listed in the adversary role.
std::vector<Flow> plan_flows(const ScenarioConfig& config);

/// One simulation: world, agents, traffic and adversaries, built from a
/// config and driven by run().
class Scenario {
 public:
  explicit Scenario(ScenarioConfig config, std::ostream* trace = nullptr);
  ~Scenario();

  /// Advances the clock to `t` (at most the configured duration).
  void run_until(double t);
  void run() { run_until(config_.duration); }

  const ScenarioConfig& config() const { return config_; }
  Simulator& sim() { return sim_; }
  World& world() { return *world_; }
  MetricLog& log() { return log_; }
  const std::vector<Flow>& flows() const { return flows_; }
  bool is_adversary(NodeId n) const;

  RoutingAgent* agent(NodeId n) { return world_->agent(n); }
  /// nullptr unless the protocol is CML.
  CmlAgent* cml(NodeId n);

  RunSummary summary() const;

 private:
  void schedule_traffic();
  void schedule_adversary();
  void send(const Flow& flow, std::uint32_t seq);

  ScenarioConfig config_;
  Simulator sim_;
  MetricLog log_;
  std::unique_ptr<World> world_;
  std::vector<Flow> flows_;
  std::uint32_t forged_sequence_ = 0;
};

/// Runs `config` to completion.
struct RunResult {
  RunSummary summary;
  std::vector<TransitionRecord> transitions;
  SecurityCounters security;
};
RunResult run_scenario(const ScenarioConfig& config, std::ostream* trace = nullptr);

/// Number of log lines that commit a node to a new stable phase.
int confirmed_shifts(const std::vector<TransitionRecord>& log);

}  // namespace emanet
