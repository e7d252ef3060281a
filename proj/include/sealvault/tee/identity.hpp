#pragma once

#include <cstdint>

#include "sealvault/common/bytes.hpp"

namespace sealvault::tee {

/// A simulated machine. `platform_key` plays the role of the fused CPU root
/// secret: every sealing and report key is derived from it and it is never
/// written into any serialized structure.
struct PlatformIdentity {
  Key256 platform_key;
  ByteArray<16> cpu_svn{};
  Id16 platform_id{};
};

struct EnclaveIdentity {
  Digest256 measurement{};
  Digest256 signer{};
  std::uint16_t product_id = 0;
  std::uint16_t isv_svn = 0;

  friend bool operator==(const EnclaveIdentity&, const EnclaveIdentity&) = default;
};

enum class SealingPolicy : std::uint16_t {
  kMrEnclave = 1,
  kMrSigner = 2,
};

/// Derives a deterministic platform from a 32-byte seed (HMAC-SHA-256 keyed by
/// the seed, one label per field).
PlatformIdentity create_platform(const ByteArray<32>& seed);

/// measurement = SHA-256(code_blob), signer = SHA-256(signer_identity).
EnclaveIdentity measure_enclave(ByteView code_blob, ByteView signer_identity,
                                std::uint16_t product_id, std::uint16_t isv_svn);

}  // namespace sealvault::tee
