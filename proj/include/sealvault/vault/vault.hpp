#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sealvault/common/bytes.hpp"
#include "sealvault/modes/block.hpp"
#include "sealvault/tee/identity.hpp"
#include "sealvault/vault/config.hpp"

namespace sealvault::vault {

namespace fs = std::filesystem;

inline constexpr std::string_view kConfigFileName = "vault.cfg";
inline constexpr std::string_view kDataDirName = "d";
inline constexpr std::string_view kDirIdFileName = "dir.sc";
inline constexpr std::string_view kLockFileName = "vault.lock";

/// Identity of the simulated enclave that holds sealed-mode keys.
struct EnclaveImage {
  Bytes code = default_code();
  Bytes signer = default_signer();
  modes::EnclaveConfig config{};

  static Bytes default_code();
  static Bytes default_signer();
};

struct CreateOptions {
  std::uint32_t kdf_iterations = modes::kDefaultKdfIterations;
  EnclaveImage enclave{};
};

struct UnlockOptions {
  EnclaveImage enclave{};
};

struct WriteOptions {
  /// Invoked after the new object is fully written, right before it replaces
  /// the old one. Throwing from here simulates a crash mid-write.
  std::function<void()> before_commit;
};

enum class EntryKind { kFile, kDirectory, kUnreadable };

struct DirEntry {
  std::string name;  // cleartext name, or the physical name for unreadable entries
  EntryKind kind = EntryKind::kFile;
  std::optional<std::uint64_t> size;  // cleartext size for files
  std::string physical_name;
};

VaultConfig create_vault(const fs::path& root, std::string_view password, modes::ModeId mode,
                         const std::optional<tee::PlatformIdentity>& platform,
                         const CreateOptions& options = {});

VaultConfig load_config(const fs::path& root);

/// Unlocked vault. Reads of distinct files may run concurrently; writes are
/// serialized per logical path; namespace changes (mkdir, rename, remove) are
/// serialized vault-wide.
class Vault {
 public:
  static Vault unlock(const fs::path& root, std::string_view password,
                      const std::optional<tee::PlatformIdentity>& platform,
                      const UnlockOptions& options = {});

  Vault(Vault&&) noexcept;
  Vault& operator=(Vault&&) noexcept;
  ~Vault();

  modes::ModeId mode() const;
  const fs::path& root() const;
  const VaultConfig& config() const;
  bool is_unlocked() const;

  /// Wipes keys and destroys the enclave session. Further I/O is VaultLocked.
  void lock();

  std::uint64_t write_file(std::string_view logical_path, std::istream& content,
                           const WriteOptions& options = {});
  std::uint64_t write_file(std::string_view logical_path, ByteView content,
                           const WriteOptions& options = {});

  void read_file(std::string_view logical_path, std::ostream& out) const;
  Bytes read_file(std::string_view logical_path) const;
  /// Decrypts only the blocks overlapping [offset, offset + length).
  Bytes read_range(std::string_view logical_path, std::uint64_t offset, std::size_t length) const;

  std::vector<DirEntry> list_dir(std::string_view logical_path) const;
  std::optional<DirEntry> stat(std::string_view logical_path) const;

  /// Creates the directory and any missing parents.
  void make_dir(std::string_view logical_path);
  /// Removes a file or an empty directory.
  void remove(std::string_view logical_path);
  /// Moves a file or directory. Only the encrypted name changes; object
  /// bytes are untouched.
  void rename(std::string_view from, std::string_view to);

  /// Physical location of the object for `logical_path` (the directory's
  /// storage directory for the root).
  fs::path map_path(std::string_view logical_path) const;

 private:
  struct State;
  explicit Vault(std::unique_ptr<State> state);

  std::unique_ptr<State> state_;
};

std::vector<std::string> split_logical_path(std::string_view logical_path);

}  // namespace sealvault::vault
