#pragma once

#include <cstdint>
#include <string_view>

#include "sealvault/common/bytes.hpp"

namespace sealvault::modes {

inline constexpr std::size_t kSaltSize = 16;
inline constexpr std::size_t kWrappedKeySize = 12 + 32 + 16;
inline constexpr std::uint32_t kDefaultKdfIterations = 600000;

/// Key-encryption key derived from the user's password. Never persisted.
struct Kek {
  Key256 key;
};

/// PBKDF2-HMAC-SHA-256, 32-byte output.
Kek derive_kek(std::string_view password, const ByteArray<kSaltSize>& salt,
               std::uint32_t iterations);

/// AES-256-GCM under the KEK with `label` as associated data.
/// Layout: IV 12 ‖ ciphertext 32 ‖ tag 16.
ByteArray<kWrappedKeySize> wrap_key(const Kek& kek, const Key256& key, ByteView label);

Key256 unwrap_key(const Kek& kek, ByteView wrapped, ByteView label);

}  // namespace sealvault::modes
