#pragma once

#include <optional>
#include <string>
#include <variant>

#include "sealvault/common/bytes.hpp"
#include "sealvault/modes/block.hpp"
#include "sealvault/modes/kdf.hpp"

namespace sealvault::vault {

inline constexpr std::uint32_t kConfigFormatVersion = 1;
inline constexpr std::size_t kSealedContentKeySize = tee::kSealedHeaderSize + 32;

struct WrappedContentKey {
  ByteArray<modes::kWrappedKeySize> wrapped{};
};

struct SealedContentKey {
  Bytes blob;  // SealedBlob of the 32-byte content key, 592 bytes
};

struct EnclaveDescriptor {
  Digest256 code_digest{};
  Digest256 signer_digest{};
};

/// Contents of `vault.cfg`. Holds only protected secrets.
struct VaultConfig {
  std::uint32_t format_version = kConfigFormatVersion;
  Id16 vault_id{};
  modes::ModeId mode = modes::ModeId::kV1;
  ByteArray<modes::kSaltSize> kdf_salt{};
  std::uint32_t kdf_iterations = modes::kDefaultKdfIterations;
  ByteArray<modes::kWrappedKeySize> wrapped_name_key{};
  std::variant<WrappedContentKey, SealedContentKey> content_key;
  std::optional<EnclaveDescriptor> enclave;
};

/// Canonical binary form: "SVCF" ‖ version u32 ‖ TLV records (tag u16,
/// length u32, value) in fixed tag order ‖ checksum record (tag 0xFFFF,
/// SHA-256 of all preceding bytes).
Bytes serialize_config(const VaultConfig& config);

/// Strict parse; any deviation from the canonical form is CorruptConfig.
VaultConfig parse_config(ByteView bytes);

/// Human-readable rendering for diagnostics. Prints no secret material
/// beyond the already-protected blobs' sizes.
std::string dump_config(const VaultConfig& config);

}  // namespace sealvault::vault
