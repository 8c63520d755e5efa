#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "emanet/sweep.hpp"

namespace emanet {

/// Static connected 8-node CML network, stable in p-phase, with node 7 as
/// the adversary. The oscillate preset uses 12 nodes with group {10, 11};
/// tamper-hcreq boots in r-phase so toward-p probing happens.
ScenarioConfig attack_preset(AdversaryBehavior behavior, SecurityMode mode, std::uint64_t seed);

/// Confirmed shifts whose trigger names a CP from one of `adversaries`.
int adversary_triggered_shifts(const std::vector<TransitionRecord>& log, const std::vector<NodeId>& adversaries);

/// Smallest gap between two confirmed shifts of the same node, or +inf.
double min_confirmed_gap(const std::vector<TransitionRecord>& log);

/// Per-node CML state after replaying `log` up to and including time `t`,
/// starting everyone in `initial`.
std::vector<CmlState> replay_states(const std::vector<TransitionRecord>& log, int nodes, Phase initial, double t);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  /// Failed only in a sub-check the model cannot satisfy by construction.
  bool expected = false;
};

struct AcceptanceOptions {
  int parallel = 1;
  std::vector<int> only;  // empty: all ten
};

/// Runs the acceptance criteria, printing one PASS/FAIL line per criterion
/// to `out` as each finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out);

}  // namespace emanet
