#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "sealvault/common/error.hpp"
#include "sealvault/tee/identity.hpp"

namespace sealvault::cli {

namespace fs = std::filesystem;

inline constexpr const char* kSeedFileEnv = "SEALVAULT_PLATFORM_SEED_FILE";

enum ExitCode : int {
  kExitOk = 0,
  kExitGeneric = 1,
  kExitUsage = 2,
  kExitAuth = 3,
  kExitNotFound = 4,
};

int exit_code_for(ErrorCode code);

/// Scrubbed on destruction.
class Secret {
 public:
  Secret() = default;
  explicit Secret(std::string value) : value_(std::move(value)) {}
  Secret(Secret&& other) noexcept : value_(std::move(other.value_)) { other.value_.clear(); }
  Secret& operator=(Secret&&) = delete;
  Secret(const Secret&) = delete;
  ~Secret() { secure_wipe(value_.data(), value_.size()); }

  std::string_view view() const { return value_; }

 private:
  std::string value_;
};

/// Reads one line from an inherited file descriptor.
Secret read_secret_fd(int fd);

/// Prompts on the controlling terminal with echo off.
Secret prompt_secret(const std::string& prompt);

/// From --password-fd if given, else the terminal. `confirm` asks twice.
Secret obtain_password(std::optional<int> fd, bool confirm);

/// First line of a file, for tokens.
Secret read_secret_file(const fs::path& path);

/// Seed file path from the flag, else the environment variable.
std::optional<fs::path> seed_file_source(const std::optional<fs::path>& flag);

/// Seed file holds 32 raw bytes or 64 hex digits.
tee::PlatformIdentity load_platform(const fs::path& seed_file);

}  // namespace sealvault::cli
