#pragma once

// Thin RAII wrappers over libcrypto. Everything here is stateless and safe to
// call from multiple threads.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sealvault/common/bytes.hpp"

namespace sealvault::crypto {

inline constexpr std::size_t kGcmIvSize = 12;
inline constexpr std::size_t kGcmTagSize = 16;
inline constexpr std::size_t kSivTagSize = 16;

void random_bytes(std::span<std::uint8_t> out);

template <std::size_t N>
ByteArray<N> random_array() {
  ByteArray<N> out;
  random_bytes(out);
  return out;
}

Digest256 sha256(ByteView data);

/// Incremental SHA-256 for streamed content.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(ByteView data);
  Digest256 finish();

 private:
  void* ctx_;
};

Digest256 hmac_sha256(ByteView key, ByteView message);

/// AES-CMAC; key must be 16 or 32 bytes (AES-128 / AES-256).
ByteArray<16> aes_cmac(ByteView key, ByteView message);

/// PBKDF2 with HMAC-SHA-256.
Bytes pbkdf2_hmac_sha256(std::string_view password, ByteView salt, std::uint32_t iterations,
                         std::size_t out_len);

/// AES-GCM (key 16 or 32 bytes). Writes ciphertext of plaintext.size() and a 16-byte tag.
void gcm_encrypt(ByteView key, ByteView iv, ByteView aad, ByteView plaintext,
                 std::span<std::uint8_t> ciphertext, std::span<std::uint8_t, kGcmTagSize> tag);

/// Returns false on tag mismatch; plaintext contents are then unspecified (zeroed).
[[nodiscard]] bool gcm_decrypt(ByteView key, ByteView iv, ByteView aad, ByteView ciphertext,
                               ByteView tag, std::span<std::uint8_t> plaintext);

/// Deterministic AES-SIV (RFC 5297) with a single associated-data component.
/// Key is 32 bytes (AES-128-SIV). Output is tag ‖ ciphertext.
Bytes siv_encrypt(ByteView key, ByteView aad, ByteView plaintext);
std::optional<Bytes> siv_decrypt(ByteView key, ByteView aad, ByteView tag_and_ciphertext);

std::string base64url_encode(ByteView data);
/// Unpadded URL-safe base64; nullopt on any character or length error.
std::optional<Bytes> base64url_decode(std::string_view text);

}  // namespace sealvault::crypto
