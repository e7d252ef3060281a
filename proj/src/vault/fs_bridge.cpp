#include "sealvault/vault/fs_bridge.hpp"

namespace sealvault::vault {

std::optional<FileAttributes> LibraryBridge::getattr(std::string_view path) {
  auto entry = vault_.stat(path);
  if (!entry) return std::nullopt;
  return FileAttributes{entry->kind == EntryKind::kDirectory, entry->size.value_or(0)};
}

std::vector<std::string> LibraryBridge::readdir(std::string_view path) {
  std::vector<std::string> names;
  for (const DirEntry& e : vault_.list_dir(path)) {
    if (e.kind != EntryKind::kUnreadable) names.push_back(e.name);
  }
  return names;
}

Bytes LibraryBridge::read(std::string_view path, std::uint64_t offset, std::size_t size) {
  return vault_.read_range(path, offset, size);
}

void LibraryBridge::write(std::string_view path, ByteView content) {
  vault_.write_file(path, content);
}

void LibraryBridge::mkdir(std::string_view path) { vault_.make_dir(path); }
void LibraryBridge::unlink(std::string_view path) { vault_.remove(path); }
void LibraryBridge::rename(std::string_view from, std::string_view to) { vault_.rename(from, to); }

}  // namespace sealvault::vault
