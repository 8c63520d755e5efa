#include "emanet/acceptance.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <thread>
#include <tuple>

#include "emanet/ideal.hpp"

namespace emanet {

ScenarioConfig attack_preset(AdversaryBehavior behavior, SecurityMode mode, std::uint64_t seed) {
  ScenarioConfig c = default_config();
  c.protocol = ProtocolKind::Cml;
  c.security = mode;
  c.nodes = 8;
  c.seed = seed;
  c.placement = Placement::Connected;
  c.mobility.v_min = 0.0;
  c.mobility.v_max = 0.0;
  c.adversary.behavior = behavior;
  c.adversary.nodes = {7};
  if (behavior == AdversaryBehavior::Oscillate) {
    // Ten legitimate nodes plus a group of x that drifts the live count
    // between nst and nst + x.
    c.nodes = 12;
    c.adversary.nodes = {10, 11};
  }
  if (behavior == AdversaryBehavior::TamperHcreq) c.cml.initial_phase = Phase::Reactive;
  c.adversary.target_phase = Phase::Reactive;
  c.adversary.start = 60.0;
  c.adversary.period = 20.0;
  return c;
}

int adversary_triggered_shifts(const std::vector<TransitionRecord>& log, const std::vector<NodeId>& adversaries) {
  int n = 0;
  for (const auto& t : log) {
    if (!is_confirmed_shift(t)) continue;
    for (NodeId a : adversaries) {
      if (t.trigger == fmt::format("cp:{}", a)) ++n;
    }
  }
  return n;
}

double min_confirmed_gap(const std::vector<TransitionRecord>& log) {
  std::map<NodeId, double> last;
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& t : log) {
    if (!is_confirmed_shift(t)) continue;
    auto it = last.find(t.node);
    if (it != last.end()) gap = std::min(gap, t.time - it->second);
    last[t.node] = t.time;
  }
  return gap;
}


std::vector<CmlState> replay_states(const std::vector<TransitionRecord>& log, int nodes, Phase initial, double t) {
  const CmlState start = initial == Phase::Proactive ? CmlState::Proactive : CmlState::Reactive;
  std::vector<CmlState> states(static_cast<std::size_t>(nodes), start);
  const CmlState all[] = {CmlState::Proactive, CmlState::Reactive, CmlState::TowardReactive,
                          CmlState::TowardProactive};
  for (const auto& r : log) {
    if (r.time > t) break;
    for (auto s : all) {
      if (r.to == to_string(s)) states.at(static_cast<std::size_t>(r.node)) = s;
    }
  }
  return states;
}

namespace {

constexpr double kEnvelope = 1.10;   // CML delay and jitter vs the better baseline
constexpr double kLoadSlack = 1.15;  // CML load vs its stable-phase protocol
constexpr double kIdentityTol = 1e-12;
constexpr double kAesTol = 0.1e-6;
constexpr int kMinSeedWins = 4;
constexpr int kMinDsrWorstSizes = 7;

// Runs fn(0..n-1) on `threads` workers. fn must only touch its own slot.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ScenarioConfig static_config(ProtocolKind p, int nodes, std::uint64_t seed) {
  ScenarioConfig c = default_config();
  c.protocol = p;
  c.nodes = nodes;
  c.seed = seed;
  c.mobility.v_min = 0.0;
  c.mobility.v_max = 0.0;
  return c;
}

bool uniform_phase(const std::vector<CmlState>& states, CmlState* phase) {
  if (states.empty()) return false;
  for (auto s : states) {
    if (s != states.front()) return false;
  }
  if (states.front() != CmlState::Proactive && states.front() != CmlState::Reactive) return false;
  *phase = states.front();
  return true;
}

int confirmed_after(const std::vector<TransitionRecord>& log, double t) {
  return static_cast<int>(
      std::count_if(log.begin(), log.end(), [t](const auto& r) { return r.time > t && is_confirmed_shift(r); }));
}

constexpr const char* kTitles[] = {
    "OLSR/AODV delay crossover",     "CML delay envelope", "DSR worst",       "jitter ordering", "routing load",
    "SCML analytic overheads",       "security overhead composition", "phase machine", "adversary suite",
    "oracle suites"};

class Suite {
 public:
  Suite(const AcceptanceOptions& options, std::ostream& out) : opts_(options), out_(out) {}

  std::vector<CriterionResult> run() {
    const std::vector<std::pair<int, std::function<CriterionResult()>>> all = {
        {1, [this] { return crossover(); }},      {2, [this] { return cml_envelope(); }},
        {3, [this] { return dsr_worst(); }},      {4, [this] { return jitter(); }},
        {5, [this] { return routing_load(); }},   {6, [this] { return analytic(); }},
        {7, [this] { return composition(); }},    {8, [this] { return phase_machine(); }},
        {9, [this] { return adversaries(); }},    {10, [this] { return oracles(); }},
    };
    std::vector<CriterionResult> results;
    for (const auto& [id, fn] : all) {
      if (!opts_.only.empty() && std::find(opts_.only.begin(), opts_.only.end(), id) == opts_.only.end()) continue;
      CriterionResult r;
      try {
        r = fn();
      } catch (const std::exception& e) {
        r.pass = false;
        r.expected = false;
        r.title = kTitles[id - 1];
        r.detail = fmt::format("error: {}", e.what());
      }
      r.id = id;
      if (r.expected) r.detail += "; expected failure, unattainable under the model";
      out_ << fmt::format("Criterion {}: {} - {}: {}", id, r.pass ? "PASS" : "FAIL", r.title, r.detail) << std::endl;
      results.push_back(r);
    }
    return results;
  }

 private:
  const SweepResult& sweep() {
    if (!sweep_) {
      SweepSpec spec;
      spec.parallel = opts_.parallel;
      sweep_ = run_sweep(spec);
      sizes_ = spec.sizes;
      seeds_ = spec.seeds;
      note_gaps(sweep_->runs);
    }
    return *sweep_;
  }

  double mean_delay(ProtocolKind p, int n) { return sweep().mean(p, SecurityMode::None, n)->avg_delay.value_or(NAN); }
  double mean_jitter(ProtocolKind p, int n) {
    return sweep().mean(p, SecurityMode::None, n)->avg_jitter.value_or(NAN);
  }
  const MeanSummary& m(ProtocolKind p, int n) { return *sweep().mean(p, SecurityMode::None, n); }

  void note_gaps(const std::vector<RunResult>& runs) {
    std::lock_guard lock(gap_mutex_);
    for (const auto& r : runs) {
      if (r.summary.protocol == "cml") note_gap(r.transitions);
    }
  }
  void note_gap(const std::vector<TransitionRecord>& log) {
    min_gap_ = std::min(min_gap_, min_confirmed_gap(log));
    ++cml_runs_seen_;
  }

  CriterionResult crossover() {
    CriterionResult r{0, kTitles[0], true, ""};
    const auto& s = sweep();
    std::vector<std::string> parts;
    for (int n : {5, 10, 20, 30, 40, 50}) {
      const auto olsr = s.runs_of(ProtocolKind::Olsr, SecurityMode::None, n);
      const auto aodv = s.runs_of(ProtocolKind::Aodv, SecurityMode::None, n);
      int wins = 0;
      for (std::size_t i = 0; i < olsr.size(); ++i) {
        const auto a = olsr[i]->summary.avg_delay, b = aodv[i]->summary.avg_delay;
        if (!a || !b) continue;
        if (n <= 10 ? *a < *b : *b < *a) ++wins;
      }
      const bool ok = wins >= kMinSeedWins;
      r.pass = r.pass && ok;
      parts.push_back(fmt::format("N={} {} wins {}/{}", n, n <= 10 ? "olsr" : "aodv", wins, olsr.size()));
    }
    r.detail = fmt::format("{}", fmt::join(parts, ", "));
    return r;
  }

  CriterionResult cml_envelope() {
    CriterionResult r{0, kTitles[1], true, ""};
    double worst = 0.0;
    std::vector<std::string> bad;
    sweep();
    for (int n : sizes_) {
      const double cml = mean_delay(ProtocolKind::Cml, n);
      const double best = std::min(mean_delay(ProtocolKind::Olsr, n), mean_delay(ProtocolKind::Aodv, n));
      const double dsr = mean_delay(ProtocolKind::Dsr, n);
      worst = std::max(worst, cml / best);
      if (!(cml <= kEnvelope * best) || !(cml <= dsr)) bad.push_back(fmt::format("N={}", n));
    }
    r.pass = bad.empty();
    r.detail = fmt::format("max cml/min(olsr,aodv) = {:.3f} (limit {:.2f}){}", worst, kEnvelope,
                           bad.empty() ? "" : fmt::format("; violated at {}", fmt::join(bad, " ")));
    return r;
  }

  CriterionResult dsr_worst() {
    CriterionResult r{0, kTitles[2], false, ""};
    sweep();
    int worst_sizes = 0;
    for (int n : sizes_) {
      const double dsr = mean_delay(ProtocolKind::Dsr, n);
      bool strictly = true;
      for (auto p : {ProtocolKind::Olsr, ProtocolKind::Aodv, ProtocolKind::Cml}) strictly = strictly && dsr > mean_delay(p, n);
      if (strictly) ++worst_sizes;
    }
    const double dsr_bytes = m(ProtocolKind::Dsr, 50).routing_load_bytes;
    bool bytes_greatest = true;
    for (auto p : {ProtocolKind::Olsr, ProtocolKind::Aodv, ProtocolKind::Cml}) {
      bytes_greatest = bytes_greatest && dsr_bytes > m(p, 50).routing_load_bytes;
    }
    r.pass = worst_sizes >= kMinDsrWorstSizes && bytes_greatest;
    r.detail = fmt::format("dsr delay greatest at {}/{} sizes (need {}), dsr load bytes greatest at N=50: {}",
                           worst_sizes, sizes_.size(), kMinDsrWorstSizes, bytes_greatest ? "yes" : "no");
    return r;
  }

  CriterionResult jitter() {
    CriterionResult r{0, kTitles[3], true, ""};
    sweep();
    std::vector<std::string> bad;
    double worst = 0.0;
    for (int n : sizes_) {
      const double o = mean_jitter(ProtocolKind::Olsr, n), a = mean_jitter(ProtocolKind::Aodv, n);
      const double c = mean_jitter(ProtocolKind::Cml, n);
      if (n <= 10 && !(o <= a)) bad.push_back(fmt::format("N={} olsr>aodv", n));
      if (n >= 20 && !(a <= o)) bad.push_back(fmt::format("N={} aodv>olsr", n));
      worst = std::max(worst, c / std::min(o, a));
      if (!(c <= kEnvelope * std::min(o, a))) bad.push_back(fmt::format("N={} cml", n));
    }
    r.pass = bad.empty();
    r.detail = fmt::format("max cml/min(olsr,aodv) = {:.3f}{}", worst,
                           bad.empty() ? "" : fmt::format("; violated: {}", fmt::join(bad, ", ")));
    return r;
  }

  CriterionResult routing_load() {
    CriterionResult r{0, kTitles[4], true, ""};
    const auto& s = sweep();
    std::vector<std::string> parts;

    const auto& olsr50 = m(ProtocolKind::Olsr, 50);
    bool least = true;
    for (auto p : {ProtocolKind::Aodv, ProtocolKind::Dsr, ProtocolKind::Cml}) {
      least = least && olsr50.routing_load_packets < m(p, 50).routing_load_packets &&
              olsr50.routing_load_bytes < m(p, 50).routing_load_bytes;
    }
    r.pass = r.pass && least;
    parts.push_back(fmt::format("olsr least at N=50 (packets and bytes): {}", least ? "yes" : "no"));

    // A size is stable when every seed sits in one stable phase at warmup
    // and no node confirms a shift afterwards.
    std::vector<std::string> stable;
    double worst = 0.0;
    bool within = true;
    for (int n : sizes_) {
      const auto cml = s.runs_of(ProtocolKind::Cml, SecurityMode::None, n);
      const auto olsr = s.runs_of(ProtocolKind::Olsr, SecurityMode::None, n);
      const auto aodv = s.runs_of(ProtocolKind::Aodv, SecurityMode::None, n);
      double cml_pk = 0, cml_b = 0, ref_pk = 0, ref_b = 0;
      bool is_stable = true;
      char tag = 0;
      for (std::size_t i = 0; i < cml.size() && is_stable; ++i) {
        const auto& cfg = sweep_base_;
        CmlState phase{};
        const auto states = replay_states(cml[i]->transitions, n, cfg.cml.initial_phase, cfg.warmup);
        if (!uniform_phase(states, &phase) || confirmed_after(cml[i]->transitions, cfg.warmup) > 0) {
          is_stable = false;
          break;
        }
        const auto* ref = phase == CmlState::Proactive ? olsr[i] : aodv[i];
        tag |= phase == CmlState::Proactive ? 1 : 2;
        cml_pk += static_cast<double>(cml[i]->summary.routing_load_packets);
        cml_b += static_cast<double>(cml[i]->summary.routing_load_bytes);
        ref_pk += static_cast<double>(ref->summary.routing_load_packets);
        ref_b += static_cast<double>(ref->summary.routing_load_bytes);
      }
      if (!is_stable) continue;
      stable.push_back(fmt::format("{}{}", n, tag == 1 ? "p" : tag == 2 ? "r" : "m"));
      const double ratio = std::max(cml_pk / ref_pk, cml_b / ref_b);
      worst = std::max(worst, ratio);
      if (!(ratio <= kLoadSlack)) within = false;
    }
    r.pass = r.pass && within && !stable.empty();
    parts.push_back(fmt::format("stable sizes [{}], max cml/reference load {:.3f} (limit {:.2f})",
                                fmt::join(stable, " "), worst, kLoadSlack));

    const auto cml5 = s.runs_of(ProtocolKind::Cml, SecurityMode::None, 5);
    const auto olsr5 = s.runs_of(ProtocolKind::Olsr, SecurityMode::None, 5);
    int equal = 0;
    for (std::size_t i = 0; i < cml5.size(); ++i) {
      if (cml5[i]->summary.routing_load_bytes == olsr5[i]->summary.routing_load_bytes) ++equal;
    }
    r.pass = r.pass && equal == static_cast<int>(cml5.size());
    parts.push_back(fmt::format("N=5 cml bytes == olsr bytes in {}/{} seeds", equal, cml5.size()));
    r.detail = fmt::format("{}", fmt::join(parts, "; "));
    return r;
  }

  CriterionResult analytic() {
    CriterionResult r{0, kTitles[5], true, ""};
    DeviceProfile dev;  // AES-128 at 450 MIPS
    const auto aes = aes_times(dev);
    const bool enc = aes.encrypt == 6168.0 / 450e6 && std::abs(aes.encrypt - 13.7e-6) <= kAesTol;
    const bool dec = aes.decrypt == 10992.0 / 450e6 && std::abs(aes.decrypt - 24.4e-6) <= kAesTol;
    const bool space = space_overhead(SecurityMode::Hybrid) == 34;
    const double h = hmac_time(1, dev);
    const bool hmac = h == 778.0 / 450e6;
    // Expected discrepancy: the closed form gives 1.7289 us per block, the
    // published figure is 1.68 us (about 3% lower). The formula is kept.
    const double deviation = (h - 1.68e-6) / 1.68e-6;
    r.pass = enc && dec && space && hmac;
    r.detail = fmt::format(
        "aes enc {:.4f} us, dec {:.4f} us, hybrid space {} B, hmac(1) {:.4f} us "
        "(expected discrepancy {:+.1f}% vs 1.68 us)",
        aes.encrypt * 1e6, aes.decrypt * 1e6, space_overhead(SecurityMode::Hybrid), h * 1e6, deviation * 100.0);
    return r;
  }

  CriterionResult composition() {
    CriterionResult r{0, kTitles[6], true, ""};
    sweep();
    const SecurityMode modes[] = {SecurityMode::None, SecurityMode::AhOnly, SecurityMode::EspOnly,
                                  SecurityMode::Hybrid};
    // Independent per-hop hybrid cost for a 512-byte data packet at 450 MIPS:
    // AES both ends plus one HMAC-MD5 each end over the expanded packet.
    const double blocks = std::ceil((512.0 + 24.0 + 10.0) * 8.0 / 512.0);
    const double per_hop = (6168.0 + 10992.0 + 2.0 * (32.0 + 2.0 + 744.0 * blocks)) / 450e6;

    struct Cell {
      std::array<RunSummary, 4> summary;
      double max_error = 0.0;
      std::size_t matched = 0;
      std::size_t unmatched = 0;
      std::vector<TransitionRecord> log;
    };
    std::vector<std::pair<int, std::uint64_t>> jobs;
    for (int n : sizes_) {
      for (auto seed : seeds_) jobs.emplace_back(n, seed);
    }
    std::vector<Cell> cells(jobs.size());
    parallel_for(jobs.size(), opts_.parallel, [&](std::size_t j) {
      auto& cell = cells[j];
      std::map<std::pair<std::int32_t, std::uint32_t>, DeliveryRecord> plain;
      for (int k = 0; k < 4; ++k) {
        ScenarioConfig c = sweep_base_;
        c.protocol = ProtocolKind::Cml;
        c.nodes = jobs[j].first;
        c.seed = jobs[j].second;
        c.security = modes[k];
        Scenario sc(c);
        sc.run();
        cell.summary[static_cast<std::size_t>(k)] = sc.summary();
        if (k == 0) {
          for (const auto& d : sc.log().records()) plain[{d.flow, d.seq}] = d;
        }
        if (modes[k] == SecurityMode::Hybrid) {
          for (const auto& d : sc.log().records()) {
            auto it = plain.find({d.flow, d.seq});
            if (it == plain.end() || it->second.hops != d.hops) {
              ++cell.unmatched;
              continue;
            }
            ++cell.matched;
            const double err = std::abs((d.delay() - it->second.delay()) - d.hops * per_hop);
            cell.max_error = std::max(cell.max_error, err);
          }
          cell.unmatched += plain.size() > sc.log().records().size() ? plain.size() - sc.log().records().size() : 0;
        }
        cell.log = sc.world().transitions();
      }
    });

    double max_error = 0.0;
    std::size_t matched = 0, unmatched = 0;
    std::array<std::vector<MeanSummary>, 4> by_mode;
    for (std::size_t k = 0; k < 4; ++k) {
      for (std::size_t si = 0; si < sizes_.size(); ++si) {
        std::vector<RunSummary> group;
        for (std::size_t j = 0; j < jobs.size(); ++j) {
          if (jobs[j].first == sizes_[si]) group.push_back(cells[j].summary[k]);
        }
        by_mode[k].push_back(mean_of(group));
      }
    }
    for (const auto& c : cells) {
      max_error = std::max(max_error, c.max_error);
      matched += c.matched;
      unmatched += c.unmatched;
      note_gap(c.log);
    }
    const bool identity = max_error <= kIdentityTol && unmatched == 0 && matched > 0;

    std::array<std::vector<CumulativePoint>, 4> cum;
    for (std::size_t k = 0; k < 4; ++k) cum[k] = cumulate(by_mode[k]);
    bool ordered = true;
    std::vector<int> gap_bad;
    bool goodput = true;
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      const double dn = cum[0][i].delay, da = cum[1][i].delay, de = cum[2][i].delay, dh = cum[3][i].delay;
      ordered = ordered && dn < da && da < de && de < dh;
      if (!(dh - de < da - dn)) gap_bad.push_back(sizes_[i]);
      for (std::size_t k = 1; k < 4; ++k) {
        goodput = goodput && by_mode[0][i].goodput_bytes_ratio > by_mode[k][i].goodput_bytes_ratio;
      }
    }
    const auto last = sizes_.size() - 1;
    const double gap_he = cum[3][last].delay - cum[2][last].delay;
    const double gap_an = cum[1][last].delay - cum[0][last].delay;
    r.pass = identity && ordered && gap_bad.empty() && goodput;
    // hybrid - esp and ah - none both equal the per-hop HMAC cost, so the
    // strict gap ordering cannot hold in this model.
    r.expected = identity && ordered && goodput && !gap_bad.empty();
    r.detail = fmt::format(
        "per-packet identity over {} deliveries max err {:.2e} s ({} unmatched); cumulative none<ah<esp<hybrid: {}; "
        "hybrid-esp < ah-none at {}/{} sizes (at N={}: {:.3e} s vs {:.3e} s); none goodput (bytes) highest: {}",
        matched, max_error, unmatched, ordered ? "yes" : "no", sizes_.size() - gap_bad.size(), sizes_.size(),
        sizes_[last], gap_he, gap_an, goodput ? "yes" : "no");
    return r;
  }

  CriterionResult phase_machine() {
    CriterionResult r{0, kTitles[7], true, ""};
    std::vector<std::string> parts;

    // Static convergence with x = 0.
    const std::vector<int> sizes = {5, 10, 15, 20, 30, 40, 50};
    std::vector<std::pair<int, std::uint64_t>> jobs;
    for (int n : sizes) {
      for (std::uint64_t seed = 1; seed <= 10; ++seed) jobs.emplace_back(n, seed);
    }
    std::vector<int> ok(jobs.size(), 0);
    std::vector<std::vector<TransitionRecord>> logs(jobs.size());
    parallel_for(jobs.size(), opts_.parallel, [&](std::size_t j) {
      auto c = static_config(ProtocolKind::Cml, jobs[j].first, jobs[j].second);
      c.placement = Placement::Connected;
      c.cml.x = 0;
      const auto res = run_scenario(c);
      // A node probing toward p still routes reactively, so compare phases.
      const Phase want = jobs[j].first <= c.cml.nst ? Phase::Proactive : Phase::Reactive;
      bool good = true;
      for (double t : {c.warmup, c.duration}) {
        for (auto s : replay_states(res.transitions, c.nodes, c.cml.initial_phase, t)) {
          good = good && stable_phase(s) == want;
        }
      }
      ok[j] = good;
      logs[j] = res.transitions;
    });
    for (const auto& l : logs) note_gap(l);
    std::vector<std::string> conv;
    bool converged = true;
    for (int n : sizes) {
      int pass = 0, total = 0;
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (jobs[j].first != n) continue;
        ++total;
        pass += ok[j];
      }
      converged = converged && pass == total;
      conv.push_back(fmt::format("{}:{}/{}", n, pass, total));
    }
    r.pass = r.pass && converged;
    parts.push_back(fmt::format("static convergence (x=0) {}", fmt::join(conv, " ")));

    // Hysteresis: a group of x nodes toggling the live count across the threshold.
    int shifts = 0;
    const int seeds = 5;
    std::vector<int> per_seed(seeds, 0);
    std::vector<std::vector<TransitionRecord>> hlogs(seeds);
    parallel_for(seeds, opts_.parallel, [&](std::size_t i) {
      const auto c = attack_preset(AdversaryBehavior::Oscillate, SecurityMode::None, i + 1);
      const auto res = run_scenario(c);
      per_seed[i] = confirmed_shifts(res.transitions);
      hlogs[i] = res.transitions;
    });
    for (std::size_t i = 0; i < hlogs.size(); ++i) {
      shifts += per_seed[i];
      note_gap(hlogs[i]);
    }
    r.pass = r.pass && shifts == 0;
    parts.push_back(fmt::format("hysteresis: {} confirmed shifts over {} seeds", shifts, seeds));

    // Rate limit, over every CML run this suite has made so far.
    sweep();
    const double t_osc = default_config().cml.t_osc;
    r.pass = r.pass && min_gap_ >= t_osc;
    parts.push_back(fmt::format("min gap between confirmed shifts {} s over {} cml runs (t_osc {} s)",
                                std::isinf(min_gap_) ? std::string("inf") : fmt::format("{:.2f}", min_gap_),
                                cml_runs_seen_, t_osc));
    r.detail = fmt::format("{}", fmt::join(parts, "; "));
    return r;
  }

  CriterionResult adversaries() {
    CriterionResult r{0, kTitles[8], true, ""};
    const int seeds = 5;
    struct Out {
      int forge_none = 0, forge_hybrid = 0, oscillate = 0;
      bool tamper_same = false;
      std::vector<std::vector<TransitionRecord>> logs;
    };
    std::vector<Out> outs(seeds);
    parallel_for(seeds, opts_.parallel, [&](std::size_t i) {
      const auto seed = static_cast<std::uint64_t>(i + 1);
      auto& o = outs[i];
      auto run = [&](const ScenarioConfig& c) {
        auto res = run_scenario(c);
        o.logs.push_back(res.transitions);
        return res;
      };
      auto cfg = attack_preset(AdversaryBehavior::ForgeCp, SecurityMode::None, seed);
      o.forge_none = adversary_triggered_shifts(run(cfg).transitions, cfg.adversary.nodes);
      cfg = attack_preset(AdversaryBehavior::ForgeCp, SecurityMode::Hybrid, seed);
      o.forge_hybrid = adversary_triggered_shifts(run(cfg).transitions, cfg.adversary.nodes);
      cfg = attack_preset(AdversaryBehavior::Oscillate, SecurityMode::None, seed);
      o.oscillate = confirmed_shifts(run(cfg).transitions);

      // Toward-p behaviour of the legitimate nodes, attacked vs not attacked.
      const auto attacked_cfg = attack_preset(AdversaryBehavior::TamperHcreq, SecurityMode::Hybrid, seed);
      auto clean_cfg = attacked_cfg;
      clean_cfg.adversary.behavior = AdversaryBehavior::None;
      const auto attacked = run(attacked_cfg);
      const auto clean = run(clean_cfg);
      // Per legitimate node: the toward-p decisions it reached, in order with
      // repeats collapsed, then its final stable phase. Episode counts are left out
      // since they depend on MAC timing near the end of the run.
      auto signature = [&](const RunResult& res) {
        const NodeId adversary = attacked_cfg.adversary.nodes.front();
        const std::string tp(to_string(CmlState::TowardProactive));
        std::map<NodeId, std::vector<std::string>> sig;
        for (const auto& t : res.transitions) {
          if (t.node == adversary || t.from != tp) continue;
          auto& v = sig[t.node];
          if (v.empty() || v.back() != t.to) v.push_back(t.to);
        }
        const auto final_states = replay_states(res.transitions, attacked_cfg.nodes, attacked_cfg.cml.initial_phase,
                                                attacked_cfg.duration);
        for (std::size_t n = 0; n < final_states.size(); ++n) {
          if (static_cast<NodeId>(n) != adversary) sig[static_cast<NodeId>(n)].push_back(stable_phase(final_states[n]) == Phase::Proactive ? "final:p" : "final:r");
        }
        return sig;
      };
      o.tamper_same = signature(attacked) == signature(clean);
    });
    int none_hits = 0, hybrid_total = 0, osc_total = 0, tamper_same = 0;
    for (const auto& o : outs) {
      none_hits += o.forge_none >= 1;
      hybrid_total += o.forge_hybrid;
      osc_total += o.oscillate;
      tamper_same += o.tamper_same;
      for (const auto& l : o.logs) note_gap(l);
    }
    r.pass = none_hits == seeds && hybrid_total == 0 && osc_total == 0 && tamper_same == seeds;
    r.detail = fmt::format(
        "forge-cp/none shifted in {}/{} seeds; forge-cp/hybrid adversary shifts {}; oscillate shifts {}; "
        "tamper-hcreq/hybrid toward-p decisions match the clean run in {}/{} seeds",
        none_hits, seeds, hybrid_total, osc_total, tamper_same, seeds);
    return r;
  }

  CriterionResult oracles() {
    CriterionResult r{0, kTitles[9], true, ""};
    constexpr int graphs = 100;
    struct Out {
      bool routes = false, mprs = false;
      int aodv_pairs = 0, aodv_ok = 0;
    };
    std::vector<Out> outs(graphs);
    parallel_for(graphs, opts_.parallel, [&](std::size_t g) {
      auto& o = outs[g];
      const int n = 10 + static_cast<int>(g % 5) * 10;
      auto c = static_config(ProtocolKind::Olsr, n, 1000 + g);
      c.traffic.flows = 0;
      c.duration = 60.0;
      Scenario sc(c);
      sc.run();
      const auto& graph = sc.world().graph();
      o.routes = o.mprs = true;
      for (NodeId v = 0; v < n; ++v) {
        auto* agent = dynamic_cast<OlsrAgent*>(sc.agent(v));
        const auto hops = bfs_hops(graph, v);
        const auto& table = agent->routes();
        for (NodeId d = 0; d < n; ++d) {
          if (d == v) continue;
          const auto du = static_cast<std::size_t>(d);
          auto it = table.find(d);
          if (hops[du] < 0) {
            o.routes = o.routes && it == table.end();
            continue;
          }
          if (it == table.end() || it->second.hops != hops[du]) {
            o.routes = false;
            continue;
          }
          // The next hop must be a neighbour one step closer.
          const auto& adj = graph[static_cast<std::size_t>(v)];
          const bool adjacent = std::find(adj.begin(), adj.end(), it->second.next_hop) != adj.end();
          const auto from_next = bfs_hops(graph, it->second.next_hop);
          o.routes = o.routes && adjacent && from_next[du] == hops[du] - 1;
        }
        const auto& relays = agent->mprs();
        for (NodeId w = 0; w < n; ++w) {
          if (hops[static_cast<std::size_t>(w)] != 2) continue;
          const auto& wn = graph[static_cast<std::size_t>(w)];
          const bool covered = std::any_of(wn.begin(), wn.end(), [&](NodeId u) { return relays.count(u) > 0; });
          o.mprs = o.mprs && covered;
        }
      }

      // AODV discovery under uniform per-hop delay, one isolated discovery
      // per pair (concurrent floods legitimately bend reverse routes).
      for (NodeId src = 0; src < 3; ++src) {
        const auto hops = bfs_hops(graph, src);
        for (NodeId d = 0; d < n; ++d) {
          if (d == src || hops[static_cast<std::size_t>(d)] <= 0) continue;
          IdealNetwork net(graph, 1e-3, 1000 + g);
          for (NodeId v = 0; v < n; ++v) {
            net.set_agent(v, std::make_unique<AodvAgent>(net.context(v), c.aodv));
          }
          net.start();
          net.send_data(src, d, 0, 0);
          net.run_until(1.0);
          ++o.aodv_pairs;
          const auto* route = dynamic_cast<AodvAgent*>(net.agent(src))->route(d);
          if (route && route->hops == hops[static_cast<std::size_t>(d)] && net.delivered().size() == 1) ++o.aodv_ok;
        }
      }
    });
    int routes = 0, mprs = 0, pairs = 0, aodv_ok = 0;
    for (const auto& o : outs) {
      routes += o.routes;
      mprs += o.mprs;
      pairs += o.aodv_pairs;
      aodv_ok += o.aodv_ok;
    }

    // Determinism: repeated runs, compared as the files they would write.
    int identical = 0;
    const std::vector<ScenarioConfig> configs = [] {
      std::vector<ScenarioConfig> v;
      auto a = default_config();
      a.protocol = ProtocolKind::Cml;
      a.nodes = 25;
      a.seed = 7;
      v.push_back(a);
      a.security = SecurityMode::Hybrid;
      a.nodes = 15;
      v.push_back(a);
      auto b = default_config();
      b.protocol = ProtocolKind::Dsr;
      b.nodes = 20;
      b.seed = 3;
      v.push_back(b);
      return v;
    }();
    for (const auto& c : configs) {
      auto files = [](const RunResult& res) {
        std::string out = summary_csv_row(res.summary) + "\n";
        for (const auto& t : res.transitions) out += format_transition(t) + "\n";
        return out;
      };
      identical += files(run_scenario(c)) == files(run_scenario(c));
    }
    r.pass = routes == graphs && mprs == graphs && aodv_ok == pairs && pairs > 0 &&
             identical == static_cast<int>(configs.size());
    r.detail = fmt::format(
        "olsr routes = bfs on {}/{} graphs; mpr two-hop coverage {}/{}; aodv hop counts = bfs {}/{} pairs "
        "(uniform per-hop delay); byte-identical reruns {}/{}",
        routes, graphs, mprs, graphs, aodv_ok, pairs, identical, configs.size());
    return r;
  }

  const AcceptanceOptions& opts_;
  std::ostream& out_;
  const ScenarioConfig sweep_base_ = SweepSpec{}.base;
  std::optional<SweepResult> sweep_;
  std::vector<int> sizes_;
  std::vector<std::uint64_t> seeds_;
  std::mutex gap_mutex_;
  double min_gap_ = std::numeric_limits<double>::infinity();
  int cml_runs_seen_ = 0;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out) {
  Suite suite(options, out);
  return suite.run();
}

}  // namespace emanet
