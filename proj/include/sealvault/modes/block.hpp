#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "sealvault/common/bytes.hpp"
#include "sealvault/modes/enclave_session.hpp"

namespace sealvault::modes {

enum class ModeId : std::uint8_t {
  kV1 = 1,
  kSealed = 2,
};

std::string_view mode_name(ModeId mode);
std::optional<ModeId> parse_mode(std::string_view name);

inline constexpr std::size_t kBlockSize = 32768;
inline constexpr std::size_t kV1BlockOverhead = 12 + 16;
inline constexpr std::size_t kSealedBlockOverhead = tee::kSealedHeaderSize;

constexpr std::size_t block_overhead(ModeId mode) {
  return mode == ModeId::kV1 ? kV1BlockOverhead : kSealedBlockOverhead;
}

struct MasterKeys {
  Key256 content_key;
  Key256 name_key;
};

/// file_id ‖ index (u64 big-endian).
ByteArray<24> block_aad(const Id16& file_id, std::uint64_t index);

// v1: AES-256-GCM, IV 12 ‖ ciphertext ‖ tag 16.
Bytes encrypt_block(const Key256& key, const Id16& file_id, std::uint64_t index,
                    ByteView cleartext);
Bytes decrypt_block(const Key256& key, const Id16& file_id, std::uint64_t index, ByteView block);

// sealed: one SealedBlob per block, block AAD authenticated by the seal.
Bytes encrypt_block(const EnclaveSession& session, const Id16& file_id, std::uint64_t index,
                    ByteView cleartext);
Bytes decrypt_block(const EnclaveSession& session, const Id16& file_id, std::uint64_t index,
                    ByteView block);

/// Common contract every storage mode implements. The vault only talks to
/// this interface; adding a mode means adding an implementation here.
class ContentCryptor {
 public:
  virtual ~ContentCryptor() = default;

  virtual ModeId mode() const = 0;
  std::size_t block_overhead() const { return modes::block_overhead(mode()); }

  /// Size of a protected 32-byte per-file key (60 for v1, 592 for sealed).
  virtual std::size_t protected_key_size() const = 0;
  virtual Bytes protect_file_key(const Key256& file_key, ByteView label) const = 0;
  virtual Key256 unprotect_file_key(ByteView protected_key, ByteView label) const = 0;

  virtual Bytes encrypt_block(const Key256& file_key, const Id16& file_id, std::uint64_t index,
                              ByteView cleartext) const = 0;
  virtual Bytes decrypt_block(const Key256& file_key, const Id16& file_id, std::uint64_t index,
                              ByteView block) const = 0;
};

std::unique_ptr<ContentCryptor> make_v1_cryptor(const Key256& content_key);
std::unique_ptr<ContentCryptor> make_sealed_cryptor(std::shared_ptr<const EnclaveSession> session);

}  // namespace sealvault::modes
