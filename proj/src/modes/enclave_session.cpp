#include "sealvault/modes/enclave_session.hpp"

#include <mutex>

#include "sealvault/common/error.hpp"

namespace sealvault::modes {

EnclaveSession::~EnclaveSession() {
  if (platform_) platform_->platform_key.wipe();
}

void EnclaveSession::initialize(const tee::PlatformIdentity& platform, ByteView enclave_code,
                                ByteView signer, const EnclaveConfig& config) {
  std::unique_lock lock(mutex_);
  if (state_ != State::kFresh) throw Error(ErrorCode::kAlreadyInitialized);
  platform_ = platform;
  identity_ = tee::measure_enclave(enclave_code, signer, config.product_id, config.isv_svn);
  config_ = config;
  state_ = State::kActive;
}

void EnclaveSession::require_active() const {
  switch (state_) {
    case State::kFresh: throw Error(ErrorCode::kNotInitialized);
    case State::kDestroyed: throw Error(ErrorCode::kSessionDestroyed);
    case State::kActive: return;
  }
}

tee::EnclaveIdentity EnclaveSession::identity() const {
  std::shared_lock lock(mutex_);
  require_active();
  return identity_;
}

tee::SealingPolicy EnclaveSession::policy() const {
  std::shared_lock lock(mutex_);
  require_active();
  return config_.policy;
}

tee::SealedBlob EnclaveSession::encrypt_bytes(ByteView payload, ByteView aad) const {
  std::shared_lock lock(mutex_);
  require_active();
  return tee::seal(*platform_, identity_, config_.policy, payload, aad);
}

Bytes EnclaveSession::decrypt_bytes(const tee::SealedBlob& blob, ByteView aad) const {
  std::shared_lock lock(mutex_);
  require_active();
  return tee::unseal(*platform_, identity_, blob, aad);
}

Bytes EnclaveSession::decrypt_bytes(ByteView blob, ByteView aad) const {
  {
    std::shared_lock lock(mutex_);
    require_active();
  }
  return decrypt_bytes(tee::SealedBlob::parse(blob), aad);
}

void EnclaveSession::destroy() {
  std::unique_lock lock(mutex_);
  if (state_ == State::kDestroyed) throw Error(ErrorCode::kAlreadyDestroyed);
  if (state_ == State::kFresh) throw Error(ErrorCode::kNotInitialized);
  platform_->platform_key.wipe();
  platform_.reset();
  state_ = State::kDestroyed;
}

bool EnclaveSession::is_active() const {
  std::shared_lock lock(mutex_);
  return state_ == State::kActive;
}

std::shared_ptr<EnclaveSession> init_enclave(const tee::PlatformIdentity& platform,
                                             ByteView enclave_code, ByteView signer,
                                             const EnclaveConfig& config) {
  auto session = std::make_shared<EnclaveSession>();
  session->initialize(platform, enclave_code, signer, config);
  return session;
}

void destroy_enclave(EnclaveSession& session) { session.destroy(); }

}  // namespace sealvault::modes
