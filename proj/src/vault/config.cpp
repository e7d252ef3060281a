#include "sealvault/vault/config.hpp"

#include <openssl/crypto.h>

#include <sstream>

#include "sealvault/common/error.hpp"
#include "sealvault/crypto/primitives.hpp"

namespace sealvault::vault {
namespace {

constexpr std::string_view kMagic = "SVCF";

enum Tag : std::uint16_t {
  kTagVaultId = 1,
  kTagMode = 2,
  kTagSalt = 3,
  kTagIterations = 4,
  kTagWrappedNameKey = 5,
  kTagWrappedContentKey = 6,
  kTagSealedContentKey = 7,
  kTagEnclaveCode = 8,
  kTagEnclaveSigner = 9,
  kTagChecksum = 0xFFFF,
};

void put_record(Bytes& out, std::uint16_t tag, ByteView value) {
  put_u16_le(out, tag);
  put_u32_le(out, static_cast<std::uint32_t>(value.size()));
  append(out, value);
}

[[noreturn]] void corrupt(const std::string& why) { throw Error(ErrorCode::kCorruptConfig, why); }

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  ByteView take(std::size_t n) {
    if (data_.size() - pos_ < n) corrupt("truncated");
    ByteView out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  ByteView record(std::uint16_t expected_tag, std::size_t expected_len) {
    ByteView head = take(6);
    if (get_u16_le(head, 0) != expected_tag) corrupt("unexpected record tag");
    if (get_u32_le(head, 2) != expected_len) corrupt("bad record length");
    return take(expected_len);
  }

  std::uint16_t peek_tag() const {
    if (data_.size() - pos_ < 2) corrupt("truncated");
    return get_u16_le(data_, pos_);
  }

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace

Bytes serialize_config(const VaultConfig& c) {
  bool sealed = c.mode == modes::ModeId::kSealed;
  if (sealed != std::holds_alternative<SealedContentKey>(c.content_key) ||
      sealed != c.enclave.has_value()) {
    throw Error(ErrorCode::kInvalidArgument, "content key protection does not match mode");
  }
  if (sealed && std::get<SealedContentKey>(c.content_key).blob.size() != kSealedContentKeySize) {
    throw Error(ErrorCode::kInvalidArgument, "sealed content key has wrong size");
  }
  Bytes out;
  append(out, kMagic);
  put_u32_le(out, c.format_version);
  put_record(out, kTagVaultId, c.vault_id);
  std::uint8_t mode = static_cast<std::uint8_t>(c.mode);
  put_record(out, kTagMode, ByteView(&mode, 1));
  put_record(out, kTagSalt, c.kdf_salt);
  Bytes iters;
  put_u32_le(iters, c.kdf_iterations);
  put_record(out, kTagIterations, iters);
  put_record(out, kTagWrappedNameKey, c.wrapped_name_key);
  if (const auto* w = std::get_if<WrappedContentKey>(&c.content_key)) {
    put_record(out, kTagWrappedContentKey, w->wrapped);
  } else {
    put_record(out, kTagSealedContentKey, std::get<SealedContentKey>(c.content_key).blob);
  }
  if (c.enclave) {
    put_record(out, kTagEnclaveCode, c.enclave->code_digest);
    put_record(out, kTagEnclaveSigner, c.enclave->signer_digest);
  }
  Digest256 sum = crypto::sha256(out);
  put_record(out, kTagChecksum, sum);
  return out;
}

VaultConfig parse_config(ByteView bytes) {
  Reader r(bytes);
  if (as_chars(r.take(4)) != kMagic) corrupt("bad magic");
  VaultConfig c;
  c.format_version = get_u32_le(r.take(4), 0);
  if (c.format_version != kConfigFormatVersion) corrupt("unsupported format version");
  c.vault_id = to_array<16>(r.record(kTagVaultId, 16));
  std::uint8_t mode = r.record(kTagMode, 1)[0];
  if (mode != static_cast<std::uint8_t>(modes::ModeId::kV1) &&
      mode != static_cast<std::uint8_t>(modes::ModeId::kSealed)) {
    corrupt("unknown mode");
  }
  c.mode = static_cast<modes::ModeId>(mode);
  c.kdf_salt = to_array<modes::kSaltSize>(r.record(kTagSalt, modes::kSaltSize));
  c.kdf_iterations = get_u32_le(r.record(kTagIterations, 4), 0);
  if (c.kdf_iterations == 0) corrupt("zero kdf iterations");
  c.wrapped_name_key =
      to_array<modes::kWrappedKeySize>(r.record(kTagWrappedNameKey, modes::kWrappedKeySize));
  if (c.mode == modes::ModeId::kV1) {
    c.content_key = WrappedContentKey{
        to_array<modes::kWrappedKeySize>(r.record(kTagWrappedContentKey, modes::kWrappedKeySize))};
  } else {
    ByteView blob = r.record(kTagSealedContentKey, kSealedContentKeySize);
    c.content_key = SealedContentKey{Bytes(blob.begin(), blob.end())};
    EnclaveDescriptor d;
    d.code_digest = to_array<32>(r.record(kTagEnclaveCode, 32));
    d.signer_digest = to_array<32>(r.record(kTagEnclaveSigner, 32));
    c.enclave = d;
  }
  std::size_t body_len = r.pos();
  ByteView sum = r.record(kTagChecksum, 32);
  if (!r.done()) corrupt("trailing bytes");
  Digest256 expected = crypto::sha256(bytes.first(body_len));
  if (CRYPTO_memcmp(expected.data(), sum.data(), 32) != 0) corrupt("checksum mismatch");
  return c;
}

std::string dump_config(const VaultConfig& c) {
  std::ostringstream os;
  os << "format_version: " << c.format_version << "\n"
     << "vault_id: " << to_hex(c.vault_id) << "\n"
     << "mode: " << modes::mode_name(c.mode) << "\n"
     << "kdf: PBKDF2-HMAC-SHA256\n"
     << "kdf_salt: " << to_hex(c.kdf_salt) << "\n"
     << "kdf_iterations: " << c.kdf_iterations << "\n"
     << "wrapped_name_key: " << c.wrapped_name_key.size() << " bytes\n";
  if (std::holds_alternative<WrappedContentKey>(c.content_key)) {
    os << "content_key: wrapped, " << modes::kWrappedKeySize << " bytes\n";
  } else {
    os << "content_key: sealed, " << std::get<SealedContentKey>(c.content_key).blob.size()
       << " bytes\n";
  }
  if (c.enclave) {
    os << "enclave_code_digest: " << to_hex(c.enclave->code_digest) << "\n"
       << "enclave_signer_digest: " << to_hex(c.enclave->signer_digest) << "\n";
  }
  return os.str();
}

}  // namespace sealvault::vault
