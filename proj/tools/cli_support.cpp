#include "cli_support.hpp"

#include <fcntl.h>
#include <termios.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <cstring>

#include "sealvault/common/file_io.hpp"

namespace sealvault::cli {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kTargetNotEmpty:
    case ErrorCode::kNameTooLong:
    case ErrorCode::kInvalidName:
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kEmptyPassword:
    case ErrorCode::kAlreadyExists:
      return kExitUsage;
    case ErrorCode::kWrongPassword:
    case ErrorCode::kUnsealFailure:
    case ErrorCode::kMissingPlatform:
    case ErrorCode::kAuthenticationFailure:
    case ErrorCode::kSvnViolation:
      return kExitAuth;
    case ErrorCode::kNotFound:
      return kExitNotFound;
    default:
      return kExitGeneric;
  }
}

namespace {

std::string read_line_fd(int fd) {
  std::string line;
  char c;
  for (;;) {
    ssize_t n = ::read(fd, &c, 1);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) {
      secure_wipe(line.data(), line.size());
      throw Error(ErrorCode::kIo, std::string("reading secret: ") + std::strerror(errno));
    }
    if (n == 0 || c == '\n') break;
    line.push_back(c);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

Secret read_secret_fd(int fd) {
  if (fd < 0) throw Error(ErrorCode::kInvalidArgument, "bad --password-fd");
  return Secret(read_line_fd(fd));
}

Secret prompt_secret(const std::string& prompt) {
  int tty = ::open("/dev/tty", O_RDWR | O_CLOEXEC);
  if (tty < 0) {
    throw Error(ErrorCode::kInvalidArgument, "no terminal for the password prompt; use --password-fd");
  }
  (void)!::write(tty, prompt.data(), prompt.size());
  termios saved{};
  bool restore = ::tcgetattr(tty, &saved) == 0;
  if (restore) {
    termios quiet = saved;
    quiet.c_lflag &= static_cast<tcflag_t>(~ECHO);
    ::tcsetattr(tty, TCSAFLUSH, &quiet);
  }
  std::string line;
  try {
    line = read_line_fd(tty);
  } catch (...) {
    if (restore) ::tcsetattr(tty, TCSAFLUSH, &saved);
    ::close(tty);
    throw;
  }
  if (restore) ::tcsetattr(tty, TCSAFLUSH, &saved);
  (void)!::write(tty, "\n", 1);
  ::close(tty);
  return Secret(std::move(line));
}

Secret obtain_password(std::optional<int> fd, bool confirm) {
  if (fd) return read_secret_fd(*fd);
  Secret first = prompt_secret("Vault password: ");
  if (confirm) {
    Secret again = prompt_secret("Repeat password: ");
    if (first.view() != again.view()) throw Error(ErrorCode::kInvalidArgument, "passwords differ");
  }
  return first;
}

Secret read_secret_file(const fs::path& path) {
  Bytes raw = read_file_bytes(path);
  std::string s(as_chars(raw));
  secure_wipe(raw.data(), raw.size());
  auto nl = s.find_first_of("\r\n");
  std::string line = s.substr(0, nl);
  secure_wipe(s.data(), s.size());
  return Secret(std::move(line));
}

std::optional<fs::path> seed_file_source(const std::optional<fs::path>& flag) {
  if (flag) return flag;
  if (const char* env = std::getenv(kSeedFileEnv); env && *env) return fs::path(env);
  return std::nullopt;
}

tee::PlatformIdentity load_platform(const fs::path& seed_file) {
  Bytes raw = read_file_bytes(seed_file);
  ByteArray<32> seed{};
  std::string_view text = as_chars(raw);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (raw.size() == 32) {
    seed = to_array<32>(raw);
  } else if (text.size() == 64) {
    try {
      seed = to_array<32>(from_hex(text));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "platform seed file is not 64 hex digits");
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument, "platform seed file must hold 32 bytes or 64 hex digits");
  }
  secure_wipe(raw.data(), raw.size());
  auto platform = tee::create_platform(seed);
  secure_wipe(seed.data(), seed.size());
  return platform;
}

}  // namespace sealvault::cli
