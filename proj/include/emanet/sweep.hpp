#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "emanet/scenario.hpp"

namespace emanet {

struct SweepSpec {
  ScenarioConfig base = default_config();
  std::vector<int> sizes = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::vector<ProtocolKind> protocols = {ProtocolKind::Olsr, ProtocolKind::Aodv, ProtocolKind::Dsr,
                                         ProtocolKind::Cml};
  std::vector<SecurityMode> modes = {SecurityMode::None};
  int parallel = 1;
};

struct SweepCell {
  ProtocolKind protocol = ProtocolKind::Olsr;
  SecurityMode mode = SecurityMode::None;
  int nodes = 0;
  std::uint64_t seed = 0;
};

/// Cross product in (protocol, mode, size, seed) order.
std::vector<SweepCell> enumerate(const SweepSpec& spec);
ScenarioConfig cell_config(const SweepSpec& spec, const SweepCell& cell);

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<RunResult> runs;  // parallel to cells

  /// Seed means per (protocol, mode, size), in enumeration order.
  std::vector<MeanSummary> means() const;
  const MeanSummary* mean(ProtocolKind p, SecurityMode m, int n) const;
  /// Runs of one (protocol, mode, size) cell, in seed order.
  std::vector<const RunResult*> runs_of(ProtocolKind p, SecurityMode m, int n) const;

 private:
  mutable std::vector<MeanSummary> means_cache_;
};

/// Runs every cell. Results do not depend on `spec.parallel`. A failing cell
/// aborts the sweep with a SweepError naming it.
SweepResult run_sweep(const SweepSpec& spec, const std::function<void(const SweepCell&)>& progress = {});

class SweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// summary.csv, comparison.csv, cumulative.csv, transitions.log, manifest.ini
/// and plot_figures.py under `dir`.
void write_outputs(const std::filesystem::path& dir, const SweepSpec& spec, const SweepResult& result);

std::string plot_script();

struct CalibrationSample {
  int nodes = 0;
  std::uint64_t seed = 0;
  int diameter = 0;  // of the largest connected component
  double mean_eccentricity = 0.0;
};
struct Calibration {
  double k = 0.0;
  std::vector<CalibrationSample> samples;
};

/// Least-squares fit of N = k h^2 through the origin over static uniform
/// placements, one sample per node with h its eccentricity (the largest hop
/// count it can observe): k = sum(N h^2) / sum(h^4).
Calibration calibrate_k(const ScenarioConfig& base, const std::vector<int>& sizes,
                        const std::vector<std::uint64_t>& seeds);

/// Diameter (in hops) of the largest connected component.
int largest_component_diameter(const std::vector<std::vector<NodeId>>& graph);

}  // namespace emanet
