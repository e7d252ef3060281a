#include "sealvault/tee/identity.hpp"

#include "sealvault/crypto/primitives.hpp"

namespace sealvault::tee {

PlatformIdentity create_platform(const ByteArray<32>& seed) {
  PlatformIdentity p;
  Digest256 key = crypto::hmac_sha256(seed, as_bytes("sealvault/platform-key"));
  p.platform_key = Key256(key);
  secure_wipe(key.data(), key.size());
  p.cpu_svn = to_array<16>(crypto::hmac_sha256(seed, as_bytes("sealvault/cpu-svn")));
  p.platform_id = to_array<16>(crypto::hmac_sha256(seed, as_bytes("sealvault/platform-id")));
  return p;
}

EnclaveIdentity measure_enclave(ByteView code_blob, ByteView signer_identity,
                                std::uint16_t product_id, std::uint16_t isv_svn) {
  return EnclaveIdentity{
      .measurement = crypto::sha256(code_blob),
      .signer = crypto::sha256(signer_identity),
      .product_id = product_id,
      .isv_svn = isv_svn,
  };
}

}  // namespace sealvault::tee
