#include "emanet/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace emanet {

std::string_view to_string(ProtocolKind p) {
  switch (p) {
    case ProtocolKind::Olsr: return "olsr";
    case ProtocolKind::Aodv: return "aodv";
    case ProtocolKind::Dsr: return "dsr";
    case ProtocolKind::Cml: return "cml";
  }
  return "?";
}

std::optional<ProtocolKind> parse_protocol(std::string_view text) {
  if (text == "olsr") return ProtocolKind::Olsr;
  if (text == "aodv") return ProtocolKind::Aodv;
  if (text == "dsr") return ProtocolKind::Dsr;
  if (text == "cml") return ProtocolKind::Cml;
  return std::nullopt;
}

Area default_area() {
  Area a;
  a.obstacles = {Rect{300, 300, 400, 450}, Rect{600, 550, 700, 700}};
  return a;
}

ScenarioConfig default_config() {
  ScenarioConfig c;
  c.area = default_area();
  c.cml.k = 0.67;  // calibrate-k --seeds 100
  return c;
}

namespace {

[[noreturn]] void fail(std::string_view key, std::string_view what) {
  throw ConfigError(fmt::format("{}: {}", key, what));
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(sep, start);
    const auto piece = s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    auto t = trim(piece);
    if (!t.empty()) out.push_back(std::move(t));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T number(std::string_view key, const std::string& text) {
  T v{};
  const auto t = trim(text);
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(key, fmt::format("'{}' is not a valid number", text));
  return v;
}

std::string fmt_num(double v) { return fmt::format("{}", v); }

std::string obstacles_text(const std::vector<Rect>& obs) {
  std::string out;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (i) out += "; ";
    out += fmt::format("{},{},{},{}", obs[i].x0, obs[i].y0, obs[i].x1, obs[i].y1);
  }
  return out;
}

std::vector<Rect> parse_obstacles(std::string_view key, const std::string& text) {
  std::vector<Rect> out;
  for (const auto& item : split(text, ';')) {
    auto parts = split(item, ',');
    if (parts.size() != 4) fail(key, fmt::format("obstacle '{}' needs x0,y0,x1,y1", item));
    out.push_back(Rect{number<double>(key, parts[0]), number<double>(key, parts[1]), number<double>(key, parts[2]),
                       number<double>(key, parts[3])});
  }
  return out;
}

std::string phase_text(Phase p) { return std::string(to_string(p)); }
Phase parse_phase(std::string_view key, const std::string& text) {
  const auto t = trim(text);
  if (t == "p-phase" || t == "proactive") return Phase::Proactive;
  if (t == "r-phase" || t == "reactive") return Phase::Reactive;
  fail(key, fmt::format("unknown phase '{}'", text));
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define EMANET_NUM(sec, name, member, T)                                                              \
  Field {                                                                                            \
    sec, name, [](ScenarioConfig& c, const std::string& v) { c.member = number<T>(sec "." name, v); }, \
        [](const ScenarioConfig& c) { return fmt_num(static_cast<double>(c.member)); }                \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      Field{"scenario", "protocol",
            [](ScenarioConfig& c, const std::string& v) {
              auto p = parse_protocol(trim(v));
              if (!p) fail("scenario.protocol", fmt::format("unknown protocol '{}'", v));
              c.protocol = *p;
            },
            [](const ScenarioConfig& c) { return std::string(to_string(c.protocol)); }},
      EMANET_NUM("scenario", "nodes", nodes, int),
      EMANET_NUM("scenario", "duration", duration, double),
      EMANET_NUM("scenario", "warmup", warmup, double),
      Field{"scenario", "seed",
            [](ScenarioConfig& c, const std::string& v) { c.seed = number<std::uint64_t>("scenario.seed", v); },
            [](const ScenarioConfig& c) { return std::to_string(c.seed); }},
      Field{"scenario", "placement",
            [](ScenarioConfig& c, const std::string& v) {
              const auto t = trim(v);
              if (t == "uniform") {
                c.placement = Placement::Uniform;
              } else if (t == "connected") {
                c.placement = Placement::Connected;
              } else {
                fail("scenario.placement", fmt::format("unknown placement '{}'", v));
              }
            },
            [](const ScenarioConfig& c) {
              return std::string(c.placement == Placement::Uniform ? "uniform" : "connected");
            }},
      EMANET_NUM("area", "width", area.width, double),
      EMANET_NUM("area", "height", area.height, double),
      Field{"area", "obstacles",
            [](ScenarioConfig& c, const std::string& v) { c.area.obstacles = parse_obstacles("area.obstacles", v); },
            [](const ScenarioConfig& c) { return obstacles_text(c.area.obstacles); }},
      EMANET_NUM("mobility", "v_min", mobility.v_min, double),
      EMANET_NUM("mobility", "v_max", mobility.v_max, double),
      EMANET_NUM("mobility", "pause_min", mobility.pause_min, double),
      EMANET_NUM("mobility", "pause_max", mobility.pause_max, double),
      EMANET_NUM("mobility", "tick", mobility.tick, double),
      EMANET_NUM("link", "radius", link.radius, double),
      EMANET_NUM("traffic", "flows", traffic.flows, int),
      EMANET_NUM("traffic", "rate", traffic.rate, double),
      EMANET_NUM("traffic", "packet_bytes", traffic.packet_bytes, std::uint32_t),
      EMANET_NUM("traffic", "start_min", traffic.start_min, double),
      EMANET_NUM("traffic", "start_max", traffic.start_max, double),
      EMANET_NUM("cml", "nst", cml.nst, int),
      EMANET_NUM("cml", "x", cml.x, int),
      EMANET_NUM("cml", "t_osc", cml.t_osc, double),
      EMANET_NUM("cml", "k", cml.k, double),
      Field{"cml", "initial_phase",
            [](ScenarioConfig& c, const std::string& v) { c.cml.initial_phase = parse_phase("cml.initial_phase", v); },
            [](const ScenarioConfig& c) { return phase_text(c.cml.initial_phase); }},
      EMANET_NUM("olsr", "hello_interval", olsr.hello_interval, double),
      EMANET_NUM("olsr", "tc_interval", olsr.tc_interval, double),
      EMANET_NUM("olsr", "hold_factor", olsr.hold_factor, double),
      EMANET_NUM("aodv", "node_traversal_time", aodv.node_traversal_time, double),
      EMANET_NUM("aodv", "net_diameter", aodv.net_diameter, int),
      EMANET_NUM("aodv", "active_route_timeout", aodv.active_route_timeout, double),
      EMANET_NUM("aodv", "rreq_retries", aodv.rreq_retries, int),
      EMANET_NUM("aodv", "buffer_capacity", aodv.buffer_capacity, std::size_t),
      EMANET_NUM("dsr", "paths_per_destination", dsr.paths_per_destination, std::size_t),
      EMANET_NUM("dsr", "cache_lifetime", dsr.cache_lifetime, double),
      EMANET_NUM("dsr", "discovery_backoff", dsr.discovery_backoff, double),
      EMANET_NUM("dsr", "discovery_backoff_max", dsr.discovery_backoff_max, double),
      EMANET_NUM("dsr", "buffer_timeout", dsr.buffer_timeout, double),
      EMANET_NUM("dsr", "buffer_capacity", dsr.buffer_capacity, std::size_t),
      EMANET_NUM("mac", "bitrate", mac.bitrate, double),
      EMANET_NUM("mac", "slot", mac.slot, double),
      EMANET_NUM("mac", "difs", mac.difs, double),
      EMANET_NUM("mac", "sifs", mac.sifs, double),
      EMANET_NUM("mac", "cw_min", mac.cw_min, int),
      EMANET_NUM("mac", "cw_max", mac.cw_max, int),
      EMANET_NUM("mac", "retry_limit", mac.retry_limit, int),
      EMANET_NUM("mac", "queue_capacity", mac.queue_capacity, std::size_t),
      EMANET_NUM("mac", "broadcast_jitter", mac.broadcast_jitter, double),
      Field{"security", "mode",
            [](ScenarioConfig& c, const std::string& v) {
              auto m = parse_security_mode(trim(v));
              if (!m) fail("security.mode", fmt::format("unknown mode '{}'", v));
              c.security = *m;
            },
            [](const ScenarioConfig& c) { return std::string(to_string(c.security)); }},
      EMANET_NUM("security", "c_p", device.c_p, double),
      Field{"security", "cipher",
            [](ScenarioConfig& c, const std::string& v) {
              const auto t = trim(v);
              if (t == "aes-128") {
                c.device.cipher = aes128_profile();
              } else if (t == "des") {
                c.device.cipher = des_profile();
              } else if (t == "3des") {
                c.device.cipher = triple_des_profile();
              } else {
                fail("security.cipher", fmt::format("unknown cipher '{}'", v));
              }
            },
            [](const ScenarioConfig& c) { return c.device.cipher.name; }},
      Field{"adversary", "behavior",
            [](ScenarioConfig& c, const std::string& v) {
              const auto t = trim(v);
              for (auto b : {AdversaryBehavior::None, AdversaryBehavior::ForgeCp, AdversaryBehavior::Oscillate,
                             AdversaryBehavior::TamperHcreq, AdversaryBehavior::DropCp}) {
                if (t == to_string(b)) {
                  c.adversary.behavior = b;
                  return;
                }
              }
              fail("adversary.behavior", fmt::format("unknown behavior '{}'", v));
            },
            [](const ScenarioConfig& c) { return std::string(to_string(c.adversary.behavior)); }},
      Field{"adversary", "nodes",
            [](ScenarioConfig& c, const std::string& v) {
              c.adversary.nodes.clear();
              for (const auto& s : split(v, ',')) c.adversary.nodes.push_back(number<NodeId>("adversary.nodes", s));
            },
            [](const ScenarioConfig& c) { return fmt::format("{}", fmt::join(c.adversary.nodes, ",")); }},
      Field{"adversary", "target_phase",
            [](ScenarioConfig& c, const std::string& v) {
              c.adversary.target_phase = parse_phase("adversary.target_phase", v);
            },
            [](const ScenarioConfig& c) { return phase_text(c.adversary.target_phase); }},
      EMANET_NUM("adversary", "period", adversary.period, double),
      EMANET_NUM("adversary", "start", adversary.start, double),
  };
  return table;
}

#undef EMANET_NUM

}  // namespace

void ScenarioConfig::validate() const {
  if (nodes < 2) fail("scenario.nodes", fmt::format("N must be at least 2 (got {})", nodes));
  if (!(warmup >= 0)) fail("scenario.warmup", "must be >= 0");
  if (!(duration > warmup)) fail("scenario.duration", "must exceed warmup");
  try {
    area.validate();
  } catch (const MobilityError& e) {
    fail("area.obstacles", e.what());
  }
  if (mobility.v_min < 0 || mobility.v_max < mobility.v_min) fail("mobility.v_max", "need 0 <= v_min <= v_max");
  if (mobility.v_max > 0 && mobility.v_min <= 0) fail("mobility.v_min", "moving nodes need v_min > 0");
  if (mobility.pause_min < 0 || mobility.pause_max < mobility.pause_min) {
    fail("mobility.pause_max", "need 0 <= pause_min <= pause_max");
  }
  if (!(mobility.tick > 0)) fail("mobility.tick", "must be > 0");
  if (!(link.radius > 0)) fail("link.radius", "must be > 0");
  if (traffic.flows < 0) fail("traffic.flows", "must be >= 0");
  if (!(traffic.rate > 0)) fail("traffic.rate", "must be > 0");
  if (traffic.packet_bytes == 0) fail("traffic.packet_bytes", "must be > 0");
  if (traffic.start_min < 0 || traffic.start_max < traffic.start_min) {
    fail("traffic.start_max", "need 0 <= start_min <= start_max");
  }
  if (cml.nst < 1) fail("cml.nst", "must be >= 1");
  if (cml.x < 0 || cml.x >= cml.nst) fail("cml.x", fmt::format("need 0 <= x < nst (x={}, nst={})", cml.x, cml.nst));
  if (!(cml.t_osc > 0)) fail("cml.t_osc", "must be > 0");
  if (!(cml.k > 0)) fail("cml.k", "must be > 0");
  if (!(olsr.hello_interval > 0)) fail("olsr.hello_interval", "must be > 0");
  if (!(olsr.tc_interval > 0)) fail("olsr.tc_interval", "must be > 0");
  if (!(olsr.hold_factor >= 1)) fail("olsr.hold_factor", "must be >= 1");
  if (!(aodv.node_traversal_time > 0)) fail("aodv.node_traversal_time", "must be > 0");
  if (aodv.net_diameter < 1) fail("aodv.net_diameter", "must be >= 1");
  if (!(aodv.active_route_timeout > 0)) fail("aodv.active_route_timeout", "must be > 0");
  if (aodv.rreq_retries < 0) fail("aodv.rreq_retries", "must be >= 0");
  if (dsr.paths_per_destination < 1) fail("dsr.paths_per_destination", "must be >= 1");
  if (!(dsr.discovery_backoff > 0) || dsr.discovery_backoff_max < dsr.discovery_backoff) {
    fail("dsr.discovery_backoff_max", "need 0 < discovery_backoff <= discovery_backoff_max");
  }
  if (!(mac.bitrate > 0)) fail("mac.bitrate", "must be > 0");
  if (mac.cw_min < 1 || mac.cw_max < mac.cw_min) fail("mac.cw_max", "need 1 <= cw_min <= cw_max");
  if (mac.retry_limit < 0) fail("mac.retry_limit", "must be >= 0");
  if (mac.queue_capacity < 1) fail("mac.queue_capacity", "must be >= 1");
  if (!(device.c_p > 0)) fail("security.c_p", "must be > 0");
  for (NodeId n : adversary.nodes) {
    if (n < 0 || n >= nodes) fail("adversary.nodes", fmt::format("node {} outside 0..{}", n, nodes - 1));
  }
  if (adversary.behavior != AdversaryBehavior::None) {
    if (adversary.nodes.empty()) fail("adversary.nodes", "behavior set but no adversary nodes");
    if (static_cast<int>(adversary.nodes.size()) > nodes - 2) {
      fail("adversary.nodes", "at least two legitimate nodes are required");
    }
    if (!(adversary.period > 0)) fail("adversary.period", "must be > 0");
  }
}

ScenarioConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("parse error: {}", e.message()));
  }
  std::map<std::string, std::map<std::string, const Field*>> index;
  for (const auto& f : fields()) index[f.section][f.key] = &f;

  ScenarioConfig config = default_config();
  for (const auto& [section, body] : tree) {
    auto sec = index.find(section);
    if (sec == index.end()) throw ConfigError(fmt::format("{}: unknown section", section));
    if (!body.data().empty()) throw ConfigError(fmt::format("{}: key outside any section", section));
    for (const auto& [key, value] : body) {
      auto f = sec->second.find(key);
      if (f == sec->second.end()) throw ConfigError(fmt::format("{}.{}: unknown key", section, key));
      f->second->set(config, value.data());
    }
  }
  config.validate();
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open config file", path));
  return parse_config(in);
}

std::string to_ini(const ScenarioConfig& config) {
  std::string out;
  std::string current;
  for (const auto& f : fields()) {
    if (f.section != current) {
      if (!current.empty()) out += "\n";
      out += fmt::format("[{}]\n", f.section);
      current = f.section;
    }
    out += fmt::format("{} = {}\n", f.key, f.get(config));
  }
  return out;
}

std::vector<int> parse_sizes(std::string_view text) {
  std::vector<int> out;
  if (text.find(':') != std::string_view::npos) {
    auto parts = split(text, ':');
    if (parts.size() != 3) fail("--sizes", "expected start:stop:step");
    const int a = number<int>("--sizes", parts[0]);
    const int b = number<int>("--sizes", parts[1]);
    const int s = number<int>("--sizes", parts[2]);
    if (s <= 0 || b < a) fail("--sizes", "need start <= stop and step > 0");
    for (int v = a; v <= b; v += s) out.push_back(v);
  } else {
    for (const auto& p : split(text, ',')) out.push_back(number<int>("--sizes", p));
  }
  if (out.empty()) fail("--sizes", "no sizes given");
  return out;
}

}  // namespace emanet
