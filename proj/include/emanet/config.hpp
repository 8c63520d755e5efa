#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "emanet/cml.hpp"
#include "emanet/dsr.hpp"
#include "emanet/network.hpp"

namespace emanet {

enum class ProtocolKind : std::uint8_t { Olsr, Aodv, Dsr, Cml };
std::string_view to_string(ProtocolKind p);
std::optional<ProtocolKind> parse_protocol(std::string_view text);

enum class Placement : std::uint8_t {
  Uniform,    // uniform over free space
  Connected,  // uniform, redrawn until the neighbor graph is connected
};

struct TrafficParams {
  int flows = 49;  // capped at (legitimate nodes - 1)
  double rate = 12.0;  // packets per second per flow
  std::uint32_t packet_bytes = 512;
  double start_min = 5.0;
  double start_max = 15.0;
};

struct ScenarioConfig {
  ProtocolKind protocol = ProtocolKind::Olsr;
  SecurityMode security = SecurityMode::None;
  int nodes = 20;
  double duration = 300.0;
  double warmup = 50.0;
  std::uint64_t seed = 1;
  Placement placement = Placement::Uniform;

  Area area;
  MobilityParams mobility;
  LinkModel link;
  MacParams mac;
  DeviceProfile device;
  TrafficParams traffic;
  CmlParams cml;
  OlsrParams olsr;
  AodvParams aodv;
  DsrParams dsr;
  AdversaryRole adversary;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Area with the two default obstacles.
Area default_area();
ScenarioConfig default_config();

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// INI text with sections [scenario] [area] [mobility] [link] [traffic] [cml]
/// [olsr] [aodv] [dsr] [mac] [security] [adversary]. Missing keys keep their
/// defaults; unknown sections or keys are errors.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

/// Fully resolved config in the same INI syntax.
std::string to_ini(const ScenarioConfig& config);

/// Parses "5:50:5" or "5,10,20".
std::vector<int> parse_sizes(std::string_view text);

}  // namespace emanet
