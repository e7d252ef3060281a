#include "sealvault/tee/sealing.hpp"

#include <algorithm>

#include "sealvault/common/error.hpp"
#include "sealvault/crypto/primitives.hpp"

namespace sealvault::tee {
namespace {

namespace off = blob_offsets;

constexpr std::string_view kMagic = "SSB1";

bool all_zero(ByteView b) {
  return std::all_of(b.begin(), b.end(), [](std::uint8_t c) { return c == 0; });
}

template <std::size_t N>
ByteArray<N> read_array(ByteView b, std::size_t offset) {
  return to_array<N>(b.subspan(offset, N));
}

template <std::size_t N>
void write_at(Bytes& out, std::size_t offset, const ByteArray<N>& value) {
  std::copy(value.begin(), value.end(), out.begin() + static_cast<std::ptrdiff_t>(offset));
}

void write_u16(Bytes& out, std::size_t offset, std::uint16_t v) {
  out[offset] = static_cast<std::uint8_t>(v);
  out[offset + 1] = static_cast<std::uint8_t>(v >> 8);
}

void write_u32(Bytes& out, std::size_t offset, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[offset + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

}  // namespace

SealedBlob SealedBlob::parse(Bytes bytes) {
  ByteView b(bytes);
  if (b.size() < kSealedHeaderSize) throw Error(ErrorCode::kMalformedBlob, "blob shorter than header");
  if (as_chars(b.subspan(off::kMagic, 4)) != kMagic) throw Error(ErrorCode::kMalformedBlob, "bad magic");
  if (get_u32_le(b, off::kVersion) != kSealedFormatVersion) {
    throw Error(ErrorCode::kMalformedBlob, "unsupported version");
  }
  std::uint16_t policy = get_u16_le(b, off::kPolicy);
  if (policy != static_cast<std::uint16_t>(SealingPolicy::kMrEnclave) &&
      policy != static_cast<std::uint16_t>(SealingPolicy::kMrSigner)) {
    throw Error(ErrorCode::kMalformedBlob, "unknown policy");
  }
  if (!all_zero(b.subspan(off::kReserved0, 2)) ||
      !all_zero(b.subspan(off::kReserved1, off::kIv - off::kReserved1))) {
    throw Error(ErrorCode::kMalformedBlob, "reserved bytes not zero");
  }
  if (get_u32_le(b, off::kAadLen) != 0) throw Error(ErrorCode::kMalformedBlob, "aad_len must be 0");
  if (get_u32_le(b, off::kPayloadLen) != b.size() - kSealedHeaderSize) {
    throw Error(ErrorCode::kMalformedBlob, "payload length mismatch");
  }
  return SealedBlob(std::move(bytes));
}

SealedHeader SealedBlob::header() const {
  ByteView b(bytes_);
  SealedHeader h;
  h.policy = static_cast<SealingPolicy>(get_u16_le(b, off::kPolicy));
  h.isv_svn = get_u16_le(b, off::kIsvSvn);
  h.cpu_svn = read_array<16>(b, off::kCpuSvn);
  h.key_id = read_array<32>(b, off::kKeyId);
  h.measurement = read_array<32>(b, off::kMeasurement);
  h.signer = read_array<32>(b, off::kSigner);
  h.product_id = get_u16_le(b, off::kProductId);
  h.payload_len = get_u32_le(b, off::kPayloadLen);
  h.iv = read_array<12>(b, off::kIv);
  h.tag = read_array<16>(b, off::kTag);
  return h;
}

Key128 derive_sealing_key(const PlatformIdentity& platform, const EnclaveIdentity& enclave,
                          SealingPolicy policy, const ByteArray<32>& key_id,
                          std::uint16_t isv_svn_request, const ByteArray<16>& cpu_svn_request) {
  if (isv_svn_request > enclave.isv_svn) {
    throw Error(ErrorCode::kSvnViolation, "requested isv_svn exceeds enclave isv_svn");
  }
  Bytes request;
  request.reserve(9 + 2 + 32 + 2 + 16 + 34);
  append(request, "SEALKEYv1");
  put_u16_le(request, static_cast<std::uint16_t>(policy));
  append(request, key_id);
  put_u16_le(request, isv_svn_request);
  append(request, cpu_svn_request);
  if (policy == SealingPolicy::kMrEnclave) {
    append(request, enclave.measurement);
  } else {
    append(request, enclave.signer);
    put_u16_le(request, enclave.product_id);
  }
  return Key128(crypto::aes_cmac(platform.platform_key.view(), request));
}

SealedBlob seal(const PlatformIdentity& platform, const EnclaveIdentity& enclave,
                SealingPolicy policy, ByteView payload, ByteView aad) {
  if (payload.size() > kMaxSealedPayload) throw Error(ErrorCode::kPayloadTooLarge);

  Bytes out(kSealedHeaderSize + payload.size(), 0);
  std::copy(kMagic.begin(), kMagic.end(), out.begin());
  write_u32(out, off::kVersion, kSealedFormatVersion);
  write_u16(out, off::kPolicy, static_cast<std::uint16_t>(policy));
  write_u16(out, off::kIsvSvn, enclave.isv_svn);
  write_at(out, off::kCpuSvn, platform.cpu_svn);
  auto key_id = crypto::random_array<32>();
  write_at(out, off::kKeyId, key_id);
  write_at(out, off::kMeasurement, enclave.measurement);
  write_at(out, off::kSigner, enclave.signer);
  write_u16(out, off::kProductId, enclave.product_id);
  write_u32(out, off::kPayloadLen, static_cast<std::uint32_t>(payload.size()));
  auto iv = crypto::random_array<12>();
  write_at(out, off::kIv, iv);

  Key128 key = derive_sealing_key(platform, enclave, policy, key_id, enclave.isv_svn,
                                  platform.cpu_svn);
  Bytes full_aad(out.begin(), out.begin() + kSealedAuthenticatedPrefix);
  append(full_aad, aad);
  std::span<std::uint8_t> body(out.data() + kSealedHeaderSize, payload.size());
  std::span<std::uint8_t, crypto::kGcmTagSize> tag(out.data() + off::kTag, crypto::kGcmTagSize);
  crypto::gcm_encrypt(key.view(), iv, full_aad, payload, body, tag);
  return SealedBlob(std::move(out));
}

Bytes unseal(const PlatformIdentity& platform, const EnclaveIdentity& enclave,
             const SealedBlob& blob, ByteView aad) {
  SealedHeader h = blob.header();
  if (enclave.isv_svn < h.isv_svn) {
    throw Error(ErrorCode::kSvnViolation, "blob sealed by a newer enclave version");
  }
  Key128 key = derive_sealing_key(platform, enclave, h.policy, h.key_id, h.isv_svn, h.cpu_svn);
  ByteView bytes(blob.bytes());
  Bytes full_aad(bytes.begin(), bytes.begin() + kSealedAuthenticatedPrefix);
  append(full_aad, aad);
  Bytes plain(h.payload_len);
  if (!crypto::gcm_decrypt(key.view(), h.iv, full_aad, blob.ciphertext(), h.tag, plain)) {
    throw Error(ErrorCode::kAuthenticationFailure, "sealed blob failed authentication");
  }
  return plain;
}

}  // namespace sealvault::tee
