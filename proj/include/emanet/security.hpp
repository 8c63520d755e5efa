#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emanet/kernel.hpp"
#include "emanet/packet.hpp"

namespace emanet {

enum class SecurityMode : std::uint8_t { None, AhOnly, EspOnly, Hybrid };

std::string_view to_string(SecurityMode mode);
std::optional<SecurityMode> parse_security_mode(std::string_view text);

inline bool uses_ah(SecurityMode m) { return m == SecurityMode::AhOnly || m == SecurityMode::Hybrid; }
inline bool uses_esp(SecurityMode m) { return m == SecurityMode::EspOnly || m == SecurityMode::Hybrid; }

/// Cipher cycle counts per packet. AES-128 is the exercised profile; the DES
/// and 3DES slots only carry the encryption cost and reuse it for decryption.
struct CipherProfile {
  std::string name;
  double encrypt_cycles = 0.0;
  double decrypt_cycles = 0.0;
};

CipherProfile aes128_profile();
CipherProfile des_profile();
CipherProfile triple_des_profile();

struct DeviceProfile {
  double c_p = 450e6;  // instructions per second
  CipherProfile cipher = aes128_profile();
};

inline constexpr std::uint32_t kAhSpaceBytes = 24;
inline constexpr std::uint32_t kEspSpaceBytes = 10;

/// HMAC-MD5 time over `n_k` 512-bit blocks: (32 + (2 + 744 n_k)) / c_p.
double hmac_time(std::uint64_t n_k, const DeviceProfile& profile);

struct AesTimes {
  double encrypt = 0.0;
  double decrypt = 0.0;
};
AesTimes aes_times(const DeviceProfile& profile);

std::uint32_t space_overhead(SecurityMode mode);

/// 512-bit MD5 blocks covering `bytes`.
inline std::uint64_t md5_blocks(std::uint64_t bytes) { return (8 * bytes + 511) / 512; }

struct SecurityCost {
  std::uint32_t size_delta = 0;
  double sender_delay = 0.0;
  double receiver_delay = 0.0;
};

/// Per-hop overhead of protecting a packet of `packet_bytes` under `mode`.
/// The HMAC covers the packet after ESP expansion.
SecurityCost apply_security(std::uint32_t packet_bytes, SecurityMode mode, const DeviceProfile& profile);

/// Authentication gate: under AH-bearing modes only authentic packets pass.
inline bool authenticate(const Packet& packet, SecurityMode mode) {
  return !uses_ah(mode) || packet.authentic;
}

enum class AdversaryBehavior : std::uint8_t { None, ForgeCp, Oscillate, TamperHcreq, DropCp };
std::string_view to_string(AdversaryBehavior b);

/// Malicious role of one or more nodes. Adversaries never hold credentials:
/// everything they originate is unauthentic.
struct AdversaryRole {
  AdversaryBehavior behavior = AdversaryBehavior::None;
  std::vector<NodeId> nodes;        // forge-cp uses nodes[0]; oscillate toggles the whole group
  Phase target_phase = Phase::Reactive;  // forge-cp
  double period = 20.0;             // forge-cp, oscillate
  double start = 0.0;               // first action time
};

}  // namespace emanet
