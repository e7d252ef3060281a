#pragma once

#include <memory>
#include <optional>
#include <shared_mutex>

#include "sealvault/common/bytes.hpp"
#include "sealvault/tee/identity.hpp"
#include "sealvault/tee/sealing.hpp"

namespace sealvault::modes {

struct EnclaveConfig {
  tee::SealingPolicy policy = tee::SealingPolicy::kMrEnclave;
  std::uint16_t product_id = 0;
  std::uint16_t isv_svn = 1;
};

/// Handle to a simulated enclave: the only object in the process that holds a
/// platform root secret and performs sealing. Crypto calls take a shared lock;
/// destroy() takes the exclusive lock, so in-flight calls finish first.
class EnclaveSession {
 public:
  EnclaveSession() = default;
  EnclaveSession(const EnclaveSession&) = delete;
  EnclaveSession& operator=(const EnclaveSession&) = delete;
  ~EnclaveSession();

  /// Measures `enclave_code`/`signer` and binds the session to `platform`.
  /// A session can be initialized once; a second call throws AlreadyInitialized.
  void initialize(const tee::PlatformIdentity& platform, ByteView enclave_code, ByteView signer,
                  const EnclaveConfig& config = {});

  tee::EnclaveIdentity identity() const;
  tee::SealingPolicy policy() const;

  tee::SealedBlob encrypt_bytes(ByteView payload, ByteView aad) const;
  Bytes decrypt_bytes(const tee::SealedBlob& blob, ByteView aad) const;
  /// Parses then unseals; MalformedBlob on structural errors.
  Bytes decrypt_bytes(ByteView blob, ByteView aad) const;

  /// Wipes the cached platform secret. Throws AlreadyDestroyed on a second call.
  void destroy();

  bool is_active() const;

 private:
  enum class State { kFresh, kActive, kDestroyed };

  void require_active() const;

  mutable std::shared_mutex mutex_;
  State state_ = State::kFresh;
  std::optional<tee::PlatformIdentity> platform_;
  tee::EnclaveIdentity identity_;
  EnclaveConfig config_;
};

std::shared_ptr<EnclaveSession> init_enclave(const tee::PlatformIdentity& platform,
                                             ByteView enclave_code, ByteView signer,
                                             const EnclaveConfig& config = {});

void destroy_enclave(EnclaveSession& session);

}  // namespace sealvault::modes
