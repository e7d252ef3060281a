#include "sealvault/modes/block.hpp"

#include "sealvault/common/error.hpp"
#include "sealvault/crypto/primitives.hpp"
#include "sealvault/modes/kdf.hpp"

namespace sealvault::modes {
namespace {

void check_cleartext(ByteView cleartext) {
  if (cleartext.empty()) throw Error(ErrorCode::kEmptyBlock);
  if (cleartext.size() > kBlockSize) throw Error(ErrorCode::kBlockTooLarge);
}

}  // namespace

std::string_view mode_name(ModeId mode) {
  return mode == ModeId::kV1 ? "v1" : "sealed";
}

std::optional<ModeId> parse_mode(std::string_view name) {
  if (name == "v1") return ModeId::kV1;
  if (name == "sealed") return ModeId::kSealed;
  return std::nullopt;
}

ByteArray<24> block_aad(const Id16& file_id, std::uint64_t index) {
  ByteArray<24> aad{};
  std::copy(file_id.begin(), file_id.end(), aad.begin());
  for (int i = 0; i < 8; ++i) aad[16 + i] = static_cast<std::uint8_t>(index >> (56 - 8 * i));
  return aad;
}

Bytes encrypt_block(const Key256& key, const Id16& file_id, std::uint64_t index,
                    ByteView cleartext) {
  check_cleartext(cleartext);
  Bytes out(kV1BlockOverhead + cleartext.size());
  std::span<std::uint8_t> view(out);
  crypto::random_bytes(view.first(crypto::kGcmIvSize));
  auto aad = block_aad(file_id, index);
  crypto::gcm_encrypt(key.view(), view.first(crypto::kGcmIvSize), aad, cleartext,
                      view.subspan(crypto::kGcmIvSize, cleartext.size()),
                      view.last<crypto::kGcmTagSize>());
  return out;
}

Bytes decrypt_block(const Key256& key, const Id16& file_id, std::uint64_t index, ByteView block) {
  if (block.size() <= kV1BlockOverhead || block.size() > kV1BlockOverhead + kBlockSize) {
    throw Error(ErrorCode::kMalformedBlock, "v1 block has invalid length");
  }
  Bytes out(block.size() - kV1BlockOverhead);
  auto aad = block_aad(file_id, index);
  if (!crypto::gcm_decrypt(key.view(), block.first(crypto::kGcmIvSize), aad,
                           block.subspan(crypto::kGcmIvSize, out.size()),
                           block.last(crypto::kGcmTagSize), out)) {
    throw Error(ErrorCode::kAuthenticationFailure, "block failed authentication");
  }
  return out;
}

Bytes encrypt_block(const EnclaveSession& session, const Id16& file_id, std::uint64_t index,
                    ByteView cleartext) {
  check_cleartext(cleartext);
  auto aad = block_aad(file_id, index);
  return session.encrypt_bytes(cleartext, aad).bytes();
}

Bytes decrypt_block(const EnclaveSession& session, const Id16& file_id, std::uint64_t index,
                    ByteView block) {
  if (block.size() <= kSealedBlockOverhead || block.size() > kSealedBlockOverhead + kBlockSize) {
    throw Error(ErrorCode::kMalformedBlock, "sealed block has invalid length");
  }
  auto aad = block_aad(file_id, index);
  try {
    return session.decrypt_bytes(block, aad);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedBlob) throw Error(ErrorCode::kMalformedBlock, e.what());
    throw;
  }
}

namespace {

class V1Cryptor final : public ContentCryptor {
 public:
  explicit V1Cryptor(const Key256& content_key) : kek_{content_key} {}

  ModeId mode() const override { return ModeId::kV1; }
  std::size_t protected_key_size() const override { return kWrappedKeySize; }

  Bytes protect_file_key(const Key256& file_key, ByteView label) const override {
    auto wrapped = wrap_key(kek_, file_key, label);
    return Bytes(wrapped.begin(), wrapped.end());
  }

  Key256 unprotect_file_key(ByteView protected_key, ByteView label) const override {
    return unwrap_key(kek_, protected_key, label);
  }

  Bytes encrypt_block(const Key256& file_key, const Id16& file_id, std::uint64_t index,
                      ByteView cleartext) const override {
    return modes::encrypt_block(file_key, file_id, index, cleartext);
  }

  Bytes decrypt_block(const Key256& file_key, const Id16& file_id, std::uint64_t index,
                      ByteView block) const override {
    return modes::decrypt_block(file_key, file_id, index, block);
  }

 private:
  Kek kek_;  // the master content key acts as KEK for per-file keys
};

class SealedCryptor final : public ContentCryptor {
 public:
  explicit SealedCryptor(std::shared_ptr<const EnclaveSession> session)
      : session_(std::move(session)) {}

  ModeId mode() const override { return ModeId::kSealed; }
  std::size_t protected_key_size() const override { return tee::kSealedHeaderSize + 32; }

  Bytes protect_file_key(const Key256& file_key, ByteView label) const override {
    return session_->encrypt_bytes(file_key.view(), label).bytes();
  }

  Key256 unprotect_file_key(ByteView protected_key, ByteView label) const override {
    if (protected_key.size() != protected_key_size()) {
      throw Error(ErrorCode::kMalformedBlock, "sealed file key has invalid length");
    }
    Bytes raw;
    try {
      raw = session_->decrypt_bytes(protected_key, label);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kMalformedBlob) throw Error(ErrorCode::kMalformedBlock, e.what());
      throw;
    }
    Key256 key(raw);
    secure_wipe(raw.data(), raw.size());
    return key;
  }

  // Blocks are sealed directly inside the enclave; the per-file key only
  // binds the header to this enclave and platform.
  Bytes encrypt_block(const Key256&, const Id16& file_id, std::uint64_t index,
                      ByteView cleartext) const override {
    return modes::encrypt_block(*session_, file_id, index, cleartext);
  }

  Bytes decrypt_block(const Key256&, const Id16& file_id, std::uint64_t index,
                      ByteView block) const override {
    return modes::decrypt_block(*session_, file_id, index, block);
  }

 private:
  std::shared_ptr<const EnclaveSession> session_;
};

}  // namespace

std::unique_ptr<ContentCryptor> make_v1_cryptor(const Key256& content_key) {
  return std::make_unique<V1Cryptor>(content_key);
}

std::unique_ptr<ContentCryptor> make_sealed_cryptor(std::shared_ptr<const EnclaveSession> session) {
  if (!session) throw Error(ErrorCode::kInvalidArgument, "null enclave session");
  return std::make_unique<SealedCryptor>(std::move(session));
}

}  // namespace sealvault::modes
