#pragma once

#include <cstdint>

#include "sealvault/common/bytes.hpp"
#include "sealvault/tee/identity.hpp"

namespace sealvault::tee {

/// Sealed blob layout (little-endian integers):
///
///   [0..4)     magic "SSB1"
///   [4..8)     format version (1)
///   [8..10)    policy (1 = MRENCLAVE, 2 = MRSIGNER)
///   [10..12)   isv_svn of the sealing enclave
///   [12..28)   cpu_svn
///   [28..60)   key_id (random per blob)
///   [60..92)   measurement
///   [92..124)  signer
///   [124..126) product_id
///   [126..128) reserved, zero
///   [128..132) payload_len
///   [132..136) aad_len, always 0 (caller AAD is authenticated, not stored)
///   [136..532) reserved, zero
///   [532..544) GCM IV
///   [544..560) GCM tag
///   [560..)    ciphertext
///
/// Bytes [0..532) are authenticated as associated data ahead of the caller's AAD.
inline constexpr std::size_t kSealedHeaderSize = 560;
inline constexpr std::size_t kSealedAuthenticatedPrefix = 532;
inline constexpr std::uint32_t kSealedFormatVersion = 1;
inline constexpr std::uint64_t kMaxSealedPayload = (std::uint64_t{1} << 32) - kSealedHeaderSize - 1;

namespace blob_offsets {
inline constexpr std::size_t kMagic = 0;
inline constexpr std::size_t kVersion = 4;
inline constexpr std::size_t kPolicy = 8;
inline constexpr std::size_t kIsvSvn = 10;
inline constexpr std::size_t kCpuSvn = 12;
inline constexpr std::size_t kKeyId = 28;
inline constexpr std::size_t kMeasurement = 60;
inline constexpr std::size_t kSigner = 92;
inline constexpr std::size_t kProductId = 124;
inline constexpr std::size_t kReserved0 = 126;
inline constexpr std::size_t kPayloadLen = 128;
inline constexpr std::size_t kAadLen = 132;
inline constexpr std::size_t kReserved1 = 136;
inline constexpr std::size_t kIv = 532;
inline constexpr std::size_t kTag = 544;
}  // namespace blob_offsets

struct SealedHeader {
  SealingPolicy policy = SealingPolicy::kMrEnclave;
  std::uint16_t isv_svn = 0;
  ByteArray<16> cpu_svn{};
  ByteArray<32> key_id{};
  Digest256 measurement{};
  Digest256 signer{};
  std::uint16_t product_id = 0;
  std::uint32_t payload_len = 0;
  ByteArray<12> iv{};
  ByteArray<16> tag{};
};

/// A structurally valid sealed blob. Construction goes through `parse`, so a
/// SealedBlob value always has a good magic, version, policy, zero reserved
/// regions and a consistent length.
class SealedBlob {
 public:
  static SealedBlob parse(Bytes bytes);
  static SealedBlob parse(ByteView bytes) { return parse(Bytes(bytes.begin(), bytes.end())); }

  const Bytes& bytes() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }
  SealedHeader header() const;
  ByteView ciphertext() const { return ByteView(bytes_).subspan(kSealedHeaderSize); }

 private:
  explicit SealedBlob(Bytes bytes) : bytes_(std::move(bytes)) {}
  friend SealedBlob seal(const PlatformIdentity&, const EnclaveIdentity&, SealingPolicy, ByteView,
                         ByteView);

  Bytes bytes_;
};

/// AES-CMAC (256-bit platform key, 128-bit output) over
/// "SEALKEYv1" ‖ policy u16 ‖ key_id ‖ isv_svn u16 ‖ cpu_svn ‖ identity,
/// where identity is the measurement (MRENCLAVE) or signer ‖ product_id u16
/// (MRSIGNER). Throws SvnViolation if isv_svn_request > enclave.isv_svn.
Key128 derive_sealing_key(const PlatformIdentity& platform, const EnclaveIdentity& enclave,
                          SealingPolicy policy, const ByteArray<32>& key_id,
                          std::uint16_t isv_svn_request, const ByteArray<16>& cpu_svn_request);

SealedBlob seal(const PlatformIdentity& platform, const EnclaveIdentity& enclave,
                SealingPolicy policy, ByteView payload, ByteView aad);

Bytes unseal(const PlatformIdentity& platform, const EnclaveIdentity& enclave,
             const SealedBlob& blob, ByteView aad);

}  // namespace sealvault::tee
