#include "sealvault/common/error.hpp"

namespace sealvault {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kPayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::kMalformedBlob: return "MalformedBlob";
    case ErrorCode::kSvnViolation: return "SvnViolation";
    case ErrorCode::kAuthenticationFailure: return "AuthenticationFailure";
    case ErrorCode::kEmptyPassword: return "EmptyPassword";
    case ErrorCode::kAlreadyInitialized: return "AlreadyInitialized";
    case ErrorCode::kNotInitialized: return "NotInitialized";
    case ErrorCode::kSessionDestroyed: return "SessionDestroyed";
    case ErrorCode::kAlreadyDestroyed: return "AlreadyDestroyed";
    case ErrorCode::kBlockTooLarge: return "BlockTooLarge";
    case ErrorCode::kEmptyBlock: return "EmptyBlock";
    case ErrorCode::kMalformedBlock: return "MalformedBlock";
    case ErrorCode::kNameTooLong: return "NameTooLong";
    case ErrorCode::kInvalidName: return "InvalidName";
    case ErrorCode::kMalformedName: return "MalformedName";
    case ErrorCode::kTargetNotEmpty: return "TargetNotEmpty";
    case ErrorCode::kMissingPlatform: return "MissingPlatform";
    case ErrorCode::kWrongPassword: return "WrongPassword";
    case ErrorCode::kUnsealFailure: return "UnsealFailure";
    case ErrorCode::kCorruptConfig: return "CorruptConfig";
    case ErrorCode::kVaultLocked: return "VaultLocked";
    case ErrorCode::kStorageFull: return "StorageFull";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kAlreadyExists: return "AlreadyExists";
    case ErrorCode::kStoreUnreachable: return "StoreUnreachable";
    case ErrorCode::kStateCorrupt: return "StateCorrupt";
    case ErrorCode::kPreconditionFailed: return "PreconditionFailed";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kVerificationFailure: return "VerificationFailure";
    case ErrorCode::kEmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

}  // namespace sealvault
