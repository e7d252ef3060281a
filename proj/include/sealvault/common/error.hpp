#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sealvault {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  // tee-sim
  kPayloadTooLarge,
  kMalformedBlob,
  kSvnViolation,
  kAuthenticationFailure,
  // crypto-modes
  kEmptyPassword,
  kAlreadyInitialized,
  kNotInitialized,
  kSessionDestroyed,
  kAlreadyDestroyed,
  kBlockTooLarge,
  kEmptyBlock,
  kMalformedBlock,
  kNameTooLong,
  kInvalidName,
  kMalformedName,
  // vault-core
  kTargetNotEmpty,
  kMissingPlatform,
  kWrongPassword,
  kUnsealFailure,
  kCorruptConfig,
  kVaultLocked,
  kStorageFull,
  kNotFound,
  kAlreadyExists,
  // remote-sync
  kStoreUnreachable,
  kStateCorrupt,
  kPreconditionFailed,
  // bench
  kInvalidSpec,
  kVerificationFailure,
  kEmptyInput,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  explicit Error(ErrorCode code) : Error(code, "") {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sealvault
