#pragma once

#include <cstdint>
#include <filesystem>

#include "sealvault/common/bytes.hpp"

namespace sealvault {

namespace fs = std::filesystem;

/// Owning POSIX file descriptor. Write errors map ENOSPC to StorageFull and
/// everything else to IoError; opening a missing file for read is NotFound.
class File {
 public:
  static File open_read(const fs::path& path);
  /// Fails if the file already exists.
  static File create_new(const fs::path& path);

  File(File&& other) noexcept : fd_(other.fd_), path_(std::move(other.path_)) { other.fd_ = -1; }
  File& operator=(File&& other) noexcept;
  File(const File&) = delete;
  File& operator=(const File&) = delete;
  ~File();

  std::uint64_t size() const;
  void write_all(ByteView data);
  void write_at(ByteView data, std::uint64_t offset);
  /// Reads until `out` is full or EOF; returns bytes read.
  std::size_t read_some(std::span<std::uint8_t> out);
  void read_exact_at(std::span<std::uint8_t> out, std::uint64_t offset);
  void sync();
  void close();

 private:
  File(int fd, fs::path path) : fd_(fd), path_(std::move(path)) {}

  int fd_ = -1;
  fs::path path_;
};

Bytes read_file_bytes(const fs::path& path);

/// Writes to a sibling temporary and renames over `path`.
void write_file_atomic(const fs::path& path, ByteView data);

/// Unique temporary name in `dir` ending in ".tmp".
fs::path temp_path_in(const fs::path& dir);

/// Exclusive advisory lock (flock) on a lock file; released on destruction.
class FileLock {
 public:
  explicit FileLock(const fs::path& lock_path);
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;
  ~FileLock();

 private:
  int fd_ = -1;
};

}  // namespace sealvault
