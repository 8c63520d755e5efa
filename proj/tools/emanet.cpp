#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "emanet/acceptance.hpp"

namespace fs = std::filesystem;
using namespace emanet;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find(',', start);
    auto item = text.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    if (!item.empty()) out.push_back(item);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<ProtocolKind> protocols_of(const std::string& text) {
  std::vector<ProtocolKind> out;
  for (const auto& s : split_list(text)) {
    auto p = parse_protocol(s);
    if (!p) throw ConfigError(fmt::format("--protocols: unknown protocol '{}'", s));
    out.push_back(*p);
  }
  if (out.empty()) throw ConfigError("--protocols: empty list");
  return out;
}

std::vector<SecurityMode> modes_of(const std::string& text) {
  std::vector<SecurityMode> out;
  for (const auto& s : split_list(text)) {
    auto m = parse_security_mode(s);
    if (!m) throw ConfigError(fmt::format("--security: unknown mode '{}'", s));
    out.push_back(*m);
  }
  if (out.empty()) throw ConfigError("--security: empty list");
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  return out;
}

RunResult write_run(const fs::path& dir, const ScenarioConfig& config, bool trace) {
  fs::create_directories(dir);
  std::optional<std::ofstream> trace_file;
  if (trace) trace_file = open_out(dir / "trace.log");
  const auto result = run_scenario(config, trace_file ? &*trace_file : nullptr);
  {
    auto out = open_out(dir / "summary.csv");
    out << kSummaryCsvHeader << "\n" << summary_csv_row(result.summary) << "\n";
  }
  {
    auto out = open_out(dir / "transitions.log");
    for (const auto& t : result.transitions) out << format_transition(t) << "\n";
  }
  {
    auto out = open_out(dir / "manifest.ini");
    out << to_ini(config);
  }
  std::cout << kSummaryCsvHeader << "\n" << summary_csv_row(result.summary) << "\n";
  if (config.security != SecurityMode::None) {
    const auto& s = result.security;
    fmt::print("security: crypto delay {:.9f} s, secured transmissions {}, rejected {}\n", s.crypto_delay_total,
               s.secured_transmissions, s.rejected);
  }
  return result;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event MANET simulator with CML hybrid routing"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::string protocols_text;
  std::string security_text;
  bool trace = false;

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--config", config_path, "Scenario INI file")->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the seed");
  run->add_option("--protocols", protocols_text, "Override the protocol");
  run->add_option("--security", security_text, "Override the security mode");
  run->add_flag("--trace", trace, "Write an event trace");

  std::string sizes_text = "5:50:5";
  int seed_count = 5;
  int parallel = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a (protocol, mode, size, seed) cross product");
  sweep->add_option("--config", config_path, "Base scenario INI file")->check(CLI::ExistingFile);
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--seed", seed, "First seed (default 1)");
  sweep->add_option("--seeds", seed_count, "Number of consecutive seeds")->check(CLI::PositiveNumber);
  sweep->add_option("--sizes", sizes_text, "start:stop:step or a comma list");
  sweep->add_option("--protocols", protocols_text, "Comma list (default olsr,aodv,dsr,cml)");
  sweep->add_option("--security", security_text, "Comma list (default none)");
  sweep->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);

  auto* calib = app.add_subcommand("calibrate-k", "Fit N = k h^2 over static uniform placements");
  calib->add_option("--config", config_path, "Base scenario INI file")->check(CLI::ExistingFile);
  calib->add_option("--sizes", sizes_text, "start:stop:step or a comma list");
  calib->add_option("--seeds", seed_count, "Placements per size")->check(CLI::PositiveNumber);
  calib->add_option("--out", out_dir, "Directory for calibration.csv");

  std::string preset;
  auto* attack = app.add_subcommand("attack", "Run an adversary preset on a stable 8-node CML network");
  attack->add_option("preset", preset, "forge-cp | oscillate | tamper-hcreq | drop-cp")
      ->required()
      ->check(CLI::IsMember({"forge-cp", "oscillate", "tamper-hcreq", "drop-cp"}));
  attack->add_option("--security", security_text, "Security mode (default none)");
  attack->add_option("--seed", seed, "Seed (default 1)");
  attack->add_option("--out", out_dir, "Output directory");
  attack->add_flag("--trace", trace, "Write an event trace");

  std::vector<int> only;
  auto* accept = app.add_subcommand("accept", "Run the acceptance suite");
  accept->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
  accept->add_option("--only", only, "Criterion ids to run")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    ScenarioConfig base = config_path.empty() ? default_config() : load_config(config_path);

    if (*run) {
      if (seed) base.seed = *seed;
      if (!protocols_text.empty()) base.protocol = protocols_of(protocols_text).front();
      if (!security_text.empty()) base.security = modes_of(security_text).front();
      base.validate();
      write_run(out_dir, base, trace);
      return 0;
    }

    if (*sweep) {
      SweepSpec spec;
      spec.base = base;
      spec.sizes = parse_sizes(sizes_text);
      spec.seeds.clear();
      for (int i = 0; i < seed_count; ++i) spec.seeds.push_back(seed.value_or(1) + static_cast<std::uint64_t>(i));
      if (!protocols_text.empty()) spec.protocols = protocols_of(protocols_text);
      if (!security_text.empty()) spec.modes = modes_of(security_text);
      spec.parallel = parallel;
      const auto total = enumerate(spec).size();
      std::size_t done = 0;
      auto result = run_sweep(spec, [&](const SweepCell& c) {
        ++done;
        fmt::print(stderr, "\r[{}/{}] {} {} N={} seed={}   ", done, total, to_string(c.protocol), to_string(c.mode),
                   c.nodes, c.seed);
      });
      fmt::print(stderr, "\n");
      write_outputs(out_dir, spec, result);
      std::cout << kSummaryCsvHeader << "\n";
      for (const auto& m : result.means()) std::cout << mean_csv_row(m) << "\n";
      return 0;
    }

    if (*calib) {
      std::vector<std::uint64_t> seeds;
      for (int i = 1; i <= seed_count; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
      const auto cal = calibrate_k(base, parse_sizes(sizes_text), seeds);
      if (calib->count("--out")) {
        fs::create_directories(out_dir);
        auto out = open_out(fs::path(out_dir) / "calibration.csv");
        out << "N,seed,diameter,mean_eccentricity\n";
        for (const auto& s : cal.samples) out << fmt::format("{},{},{},{:.4f}\n", s.nodes, s.seed, s.diameter, s.mean_eccentricity);
      }
      fmt::print("k = {:.4f} over {} placements\n", cal.k, cal.samples.size());
      return 0;
    }

    if (*attack) {
      AdversaryBehavior behavior = AdversaryBehavior::ForgeCp;
      if (preset == "oscillate") behavior = AdversaryBehavior::Oscillate;
      if (preset == "tamper-hcreq") behavior = AdversaryBehavior::TamperHcreq;
      if (preset == "drop-cp") behavior = AdversaryBehavior::DropCp;
      const auto mode = security_text.empty() ? SecurityMode::None : modes_of(security_text).front();
      auto config = attack_preset(behavior, mode, seed.value_or(1));
      const auto result = write_run(out_dir, config, trace);
      fmt::print("adversary-triggered confirmed shifts: {}\n",
                 adversary_triggered_shifts(result.transitions, config.adversary.nodes));
      return 0;
    }

    if (*accept) {
      AcceptanceOptions opts;
      opts.parallel = parallel;
      opts.only = only;
      const auto results = run_acceptance(opts, std::cout);
      for (const auto& r : results) {
        if (!r.pass && !r.expected) return 1;
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
