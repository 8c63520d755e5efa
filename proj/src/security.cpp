#include "emanet/security.hpp"

namespace emanet {

std::string_view to_string(SecurityMode mode) {
  switch (mode) {
    case SecurityMode::None: return "none";
    case SecurityMode::AhOnly: return "ah-only";
    case SecurityMode::EspOnly: return "esp-only";
    case SecurityMode::Hybrid: return "hybrid";
  }
  return "?";
}

std::optional<SecurityMode> parse_security_mode(std::string_view text) {
  if (text == "none") return SecurityMode::None;
  if (text == "ah-only" || text == "ah") return SecurityMode::AhOnly;
  if (text == "esp-only" || text == "esp") return SecurityMode::EspOnly;
  if (text == "hybrid" || text == "scml") return SecurityMode::Hybrid;
  return std::nullopt;
}

std::string_view to_string(AdversaryBehavior b) {
  switch (b) {
    case AdversaryBehavior::None: return "none";
    case AdversaryBehavior::ForgeCp: return "forge-cp";
    case AdversaryBehavior::Oscillate: return "oscillate";
    case AdversaryBehavior::TamperHcreq: return "tamper-hcreq";
    case AdversaryBehavior::DropCp: return "drop-cp";
  }
  return "?";
}

CipherProfile aes128_profile() { return {"aes-128", 6168.0, 10992.0}; }
CipherProfile des_profile() { return {"des", 2697.0, 2697.0}; }
CipherProfile triple_des_profile() { return {"3des", 8091.0, 8091.0}; }

double hmac_time(std::uint64_t n_k, const DeviceProfile& profile) {
  return (32.0 + (2.0 + 744.0 * static_cast<double>(n_k))) / profile.c_p;
}

AesTimes aes_times(const DeviceProfile& profile) {
  return {profile.cipher.encrypt_cycles / profile.c_p, profile.cipher.decrypt_cycles / profile.c_p};
}

std::uint32_t space_overhead(SecurityMode mode) {
  switch (mode) {
    case SecurityMode::None: return 0;
    case SecurityMode::AhOnly: return kAhSpaceBytes;
    case SecurityMode::EspOnly: return kEspSpaceBytes;
    case SecurityMode::Hybrid: return kAhSpaceBytes + kEspSpaceBytes;
  }
  return 0;
}

SecurityCost apply_security(std::uint32_t packet_bytes, SecurityMode mode, const DeviceProfile& profile) {
  SecurityCost cost;
  if (mode == SecurityMode::None) return cost;
  cost.size_delta = space_overhead(mode);
  if (uses_esp(mode)) {
    const auto aes = aes_times(profile);
    cost.sender_delay += aes.encrypt;
    cost.receiver_delay += aes.decrypt;
  }
  if (uses_ah(mode)) {
    const double auth = hmac_time(md5_blocks(packet_bytes + cost.size_delta), profile);
    cost.sender_delay += auth;
    cost.receiver_delay += auth;
  }
  return cost;
}

}  // namespace emanet
