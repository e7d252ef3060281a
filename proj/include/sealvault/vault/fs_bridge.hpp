#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sealvault/common/bytes.hpp"
#include "sealvault/vault/vault.hpp"

namespace sealvault::vault {

struct FileAttributes {
  bool is_directory = false;
  std::uint64_t size = 0;
};

/// The callbacks a filesystem bridge (e.g. a FUSE adapter) forwards into the
/// vault. An OS mount is an optional integration layered on top of this.
class FilesystemBridge {
 public:
  virtual ~FilesystemBridge() = default;

  virtual std::optional<FileAttributes> getattr(std::string_view path) = 0;
  virtual std::vector<std::string> readdir(std::string_view path) = 0;
  virtual Bytes read(std::string_view path, std::uint64_t offset, std::size_t size) = 0;
  /// Whole-file replace.
  virtual void write(std::string_view path, ByteView content) = 0;
  virtual void mkdir(std::string_view path) = 0;
  virtual void unlink(std::string_view path) = 0;
  virtual void rename(std::string_view from, std::string_view to) = 0;
};

/// In-process bridge: direct library calls against an unlocked vault.
class LibraryBridge final : public FilesystemBridge {
 public:
  explicit LibraryBridge(Vault& vault) : vault_(vault) {}

  std::optional<FileAttributes> getattr(std::string_view path) override;
  std::vector<std::string> readdir(std::string_view path) override;
  Bytes read(std::string_view path, std::uint64_t offset, std::size_t size) override;
  void write(std::string_view path, ByteView content) override;
  void mkdir(std::string_view path) override;
  void unlink(std::string_view path) override;
  void rename(std::string_view from, std::string_view to) override;

 private:
  Vault& vault_;
};

}  // namespace sealvault::vault
