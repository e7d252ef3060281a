#include "sealvault/modes/kdf.hpp"

#include "sealvault/common/error.hpp"
#include "sealvault/crypto/primitives.hpp"

namespace sealvault::modes {

Kek derive_kek(std::string_view password, const ByteArray<kSaltSize>& salt,
               std::uint32_t iterations) {
  if (password.empty()) throw Error(ErrorCode::kEmptyPassword);
  if (iterations == 0) throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 1");
  Bytes raw = crypto::pbkdf2_hmac_sha256(password, salt, iterations, 32);
  Kek kek{Key256(raw)};
  secure_wipe(raw.data(), raw.size());
  return kek;
}

ByteArray<kWrappedKeySize> wrap_key(const Kek& kek, const Key256& key, ByteView label) {
  ByteArray<kWrappedKeySize> out{};
  crypto::random_bytes(std::span(out).first(crypto::kGcmIvSize));
  crypto::gcm_encrypt(kek.key.view(), std::span(out).first(crypto::kGcmIvSize), label, key.view(),
                      std::span(out).subspan(12, 32), std::span(out).subspan<44, 16>());
  return out;
}

Key256 unwrap_key(const Kek& kek, ByteView wrapped, ByteView label) {
  if (wrapped.size() != kWrappedKeySize) {
    throw Error(ErrorCode::kMalformedBlock, "wrapped key must be 60 bytes");
  }
  Key256 key;
  if (!crypto::gcm_decrypt(kek.key.view(), wrapped.first(12), label, wrapped.subspan(12, 32),
                           wrapped.subspan(44, 16), key.mutable_span())) {
    throw Error(ErrorCode::kAuthenticationFailure, "key unwrap failed");
  }
  return key;
}

}  // namespace sealvault::modes
