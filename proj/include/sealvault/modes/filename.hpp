#pragma once

#include <string>
#include <string_view>

#include "sealvault/common/bytes.hpp"

namespace sealvault::modes {

inline constexpr std::size_t kMaxNameBytes = 160;
inline constexpr std::size_t kMaxEncodedNameLength = 255;
inline constexpr std::string_view kEncryptedNameSuffix = ".sc";

/// Throws NameTooLong for > 160 bytes; InvalidName for empty names, "." and
/// "..", names containing '/' or NUL, or invalid UTF-8.
void validate_name(std::string_view name);

/// Deterministic AES-SIV with the directory id as associated data, encoded as
/// base64url-nopad(tag ‖ ciphertext) + ".sc". At most 238 characters.
std::string encrypt_filename(const Key256& name_key, const Id16& dir_id, std::string_view name);

std::string decrypt_filename(const Key256& name_key, const Id16& dir_id, std::string_view encoded);

/// Length of the encoded form of a name of `name_bytes` bytes.
constexpr std::size_t encoded_name_length(std::size_t name_bytes) {
  std::size_t n = name_bytes + 16;
  return n / 3 * 4 + (n % 3 == 0 ? 0 : n % 3 + 1) + kEncryptedNameSuffix.size();
}

}  // namespace sealvault::modes
