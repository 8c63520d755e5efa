#include "emanet/sweep.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ranges>
#include <thread>

namespace emanet {

std::vector<SweepCell> enumerate(const SweepSpec& spec) {
  std::vector<SweepCell> cells;
  for (auto p : spec.protocols) {
    for (auto m : spec.modes) {
      for (int n : spec.sizes) {
        for (auto s : spec.seeds) cells.push_back(SweepCell{p, m, n, s});
      }
    }
  }
  return cells;
}

ScenarioConfig cell_config(const SweepSpec& spec, const SweepCell& cell) {
  ScenarioConfig c = spec.base;
  c.protocol = cell.protocol;
  c.security = cell.mode;
  c.nodes = cell.nodes;
  c.seed = cell.seed;
  return c;
}

namespace {
std::string cell_name(const SweepCell& c) {
  return fmt::format("{}/{}/N={}/seed={}", to_string(c.protocol), to_string(c.mode), c.nodes, c.seed);
}
}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const std::function<void(const SweepCell&)>& progress) {
  SweepResult result;
  result.cells = enumerate(spec);
  result.runs.resize(result.cells.size());
  std::vector<std::exception_ptr> errors(result.cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= result.cells.size()) return;
      try {
        result.runs[i] = run_scenario(cell_config(spec, result.cells[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(result.cells[i]);
      }
    }
  };
  const int threads = std::max(1, spec.parallel);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw SweepError(fmt::format("sweep cell {} failed: {}", cell_name(result.cells[i]), e.what()));
    }
  }
  return result;
}

std::vector<MeanSummary> SweepResult::means() const {
  if (!means_cache_.empty() || cells.empty()) return means_cache_;
  std::size_t i = 0;
  while (i < cells.size()) {
    std::size_t j = i;
    std::vector<RunSummary> group;
    while (j < cells.size() && cells[j].protocol == cells[i].protocol && cells[j].mode == cells[i].mode &&
           cells[j].nodes == cells[i].nodes) {
      group.push_back(runs[j].summary);
      ++j;
    }
    means_cache_.push_back(mean_of(group));
    i = j;
  }
  return means_cache_;
}

const MeanSummary* SweepResult::mean(ProtocolKind p, SecurityMode m, int n) const {
  means();
  for (const auto& s : means_cache_) {
    if (s.protocol == to_string(p) && s.security_mode == to_string(m) && s.network_size == n) return &s;
  }
  return nullptr;
}

std::vector<const RunResult*> SweepResult::runs_of(ProtocolKind p, SecurityMode m, int n) const {
  std::vector<const RunResult*> out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].protocol == p && cells[i].mode == m && cells[i].nodes == n) out.push_back(&runs[i]);
  }
  return out;
}

void write_outputs(const std::filesystem::path& dir, const SweepSpec& spec, const SweepResult& result) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw SweepError(fmt::format("cannot write {}", (dir / name).string()));
    return out;
  };
  {
    auto out = open("summary.csv");
    out << kSummaryCsvHeader << "\n";
    for (const auto& r : result.runs) out << summary_csv_row(r.summary) << "\n";
  }
  const auto means = result.means();
  {
    auto out = open("comparison.csv");
    out << kSummaryCsvHeader << "\n";
    for (const auto& m : means) out << mean_csv_row(m) << "\n";
  }
  {
    auto out = open("cumulative.csv");
    out << kCumulativeCsvHeader << "\n";
    std::map<std::pair<std::string, std::string>, std::vector<MeanSummary>> series;
    std::vector<std::pair<std::string, std::string>> order;
    for (const auto& m : means) {
      auto key = std::make_pair(m.protocol, m.security_mode);
      if (!series.count(key)) order.push_back(key);
      series[key].push_back(m);
    }
    for (const auto& key : order) {
      auto& v = series[key];
      std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.network_size < b.network_size; });
      for (const auto& p : cumulate(v)) out << cumulative_csv_row(key.first, key.second, p) << "\n";
    }
  }
  {
    auto out = open("transitions.log");
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
      const auto& c = result.cells[i];
      if (result.runs[i].transitions.empty()) continue;
      out << "# " << cell_name(c) << "\n";
      for (const auto& t : result.runs[i].transitions) out << format_transition(t) << "\n";
    }
  }
  {
    auto out = open("manifest.ini");
    out << "; sweep\n";
    out << "; protocols = " << fmt::format("{}", fmt::join(spec.protocols | std::views::transform([](auto p) {
                                                               return to_string(p);
                                                             }),
                                                             ","))
        << "\n";
    out << "; security = "
        << fmt::format("{}", fmt::join(spec.modes | std::views::transform([](auto m) { return to_string(m); }), ","))
        << "\n";
    out << "; sizes = " << fmt::format("{}", fmt::join(spec.sizes, ",")) << "\n";
    out << "; seeds = " << fmt::format("{}", fmt::join(spec.seeds, ",")) << "\n\n";
    out << to_ini(spec.base);
  }
  {
    auto out = open("plot_figures.py");
    out << plot_script();
  }
}

std::string plot_script() {
  return R"PY(#!/usr/bin/env python3
"""Figures from comparison.csv and cumulative.csv (run inside the output directory)."""
import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def series(rows, column):
    out = defaultdict(list)
    for r in rows:
        v = r[column]
        if v == "NA":
            continue
        out[(r["protocol"], r["security_mode"])].append((int(r["N"]), float(v)))
    return {k: sorted(v) for k, v in out.items()}


def figure(rows, column, ylabel, name):
    plt.figure(figsize=(6, 4))
    for (proto, mode), pts in sorted(series(rows, column).items()):
        label = proto if mode == "none" else f"{proto} ({mode})"
        plt.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=label)
    plt.xlabel("network size (nodes)")
    plt.ylabel(ylabel)
    plt.grid(True, alpha=0.3)
    plt.legend()
    plt.tight_layout()
    plt.savefig(name, dpi=150)
    plt.close()


def main():
    comp = load("comparison.csv")
    cum = load("cumulative.csv")
    figure(comp, "avg_delay_s", "average end-to-end delay (s)", "delay.png")
    figure(cum, "cum_delay_s", "cumulative delay (s)", "cumulative_delay.png")
    figure(comp, "avg_jitter_s", "average jitter (s)", "jitter.png")
    figure(cum, "cum_jitter_s", "cumulative jitter (s)", "cumulative_jitter.png")
    figure(comp, "ctl_packets", "routing load (packets)", "routing_load_packets.png")
    figure(comp, "ctl_bytes", "routing load (bytes)", "routing_load_bytes.png")
    figure(cum, "cum_ctl_bytes", "cumulative routing load (bytes)", "cumulative_routing_load.png")
    figure(cum, "cum_goodput_bytes_ratio", "cumulative goodput (data bytes / control bytes)", "cumulative_goodput.png")
    return 0


if __name__ == "__main__":
    sys.exit(main())
)PY";
}

int largest_component_diameter(const std::vector<std::vector<NodeId>>& graph) {
  const auto n = graph.size();
  std::vector<int> comp(n, -1);
  std::vector<int> sizes;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    auto hops = bfs_hops(graph, static_cast<NodeId>(s));
    int count = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (hops[v] >= 0) {
        comp[v] = id;
        ++count;
      }
    }
    sizes.push_back(count);
  }
  if (sizes.empty()) return 0;
  const int big = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  int diameter = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != big) continue;
    for (int h : bfs_hops(graph, static_cast<NodeId>(s))) diameter = std::max(diameter, h);
  }
  return diameter;
}

Calibration calibrate_k(const ScenarioConfig& base, const std::vector<int>& sizes,
                        const std::vector<std::uint64_t>& seeds) {
  Calibration cal;
  double num = 0.0, den = 0.0;
  for (int n : sizes) {
    for (auto seed : seeds) {
      ScenarioConfig c = base;
      c.nodes = n;
      c.seed = seed;
      c.placement = Placement::Uniform;
      const auto graph = neighbor_graph(place_nodes(c), c.link, c.area);
      CalibrationSample sample{n, seed, largest_component_diameter(graph), 0.0};
      // A node can only observe hop counts up to its own eccentricity, so
      // that is what the fit uses.
      for (std::size_t v = 0; v < graph.size(); ++v) {
        int ecc = 0;
        for (int h : bfs_hops(graph, static_cast<NodeId>(v))) ecc = std::max(ecc, h);
        sample.mean_eccentricity += ecc;
        const double h2 = static_cast<double>(ecc) * ecc;
        num += n * h2;
        den += h2 * h2;
      }
      sample.mean_eccentricity /= static_cast<double>(graph.size());
      cal.samples.push_back(sample);
    }
  }
  cal.k = den > 0 ? num / den : 0.0;
  return cal;
}

}  // namespace emanet
