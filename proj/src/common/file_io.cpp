#include "sealvault/common/file_io.hpp"

#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include "sealvault/common/error.hpp"
#include "sealvault/crypto/primitives.hpp"

namespace sealvault {
namespace {

[[noreturn]] void throw_errno(const fs::path& path, const char* op, int err) {
  std::string msg = std::string(op) + " " + path.string() + ": " + std::strerror(err);
  if (err == ENOSPC || err == EDQUOT) throw Error(ErrorCode::kStorageFull, msg);
  if (err == ENOENT) throw Error(ErrorCode::kNotFound, msg);
  throw Error(ErrorCode::kIo, msg);
}

}  // namespace

File File::open_read(const fs::path& path) {
  int fd = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd < 0) throw_errno(path, "open", errno);
  return File(fd, path);
}

File File::create_new(const fs::path& path) {
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0600);
  if (fd < 0) throw_errno(path, "create", errno);
  return File(fd, path);
}

File& File::operator=(File&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    path_ = std::move(other.path_);
    other.fd_ = -1;
  }
  return *this;
}

File::~File() {
  if (fd_ >= 0) ::close(fd_);
}

std::uint64_t File::size() const {
  struct stat st {};
  if (::fstat(fd_, &st) != 0) throw_errno(path_, "fstat", errno);
  return static_cast<std::uint64_t>(st.st_size);
}

void File::write_all(ByteView data) {
  std::size_t done = 0;
  while (done < data.size()) {
    ssize_t n = ::write(fd_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno(path_, "write", errno);
    }
    done += static_cast<std::size_t>(n);
  }
}

void File::write_at(ByteView data, std::uint64_t offset) {
  std::size_t done = 0;
  while (done < data.size()) {
    ssize_t n = ::pwrite(fd_, data.data() + done, data.size() - done,
                         static_cast<off_t>(offset + done));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno(path_, "pwrite", errno);
    }
    done += static_cast<std::size_t>(n);
  }
}

std::size_t File::read_some(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    ssize_t n = ::read(fd_, out.data() + done, out.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno(path_, "read", errno);
    }
    if (n == 0) break;
    done += static_cast<std::size_t>(n);
  }
  return done;
}

void File::read_exact_at(std::span<std::uint8_t> out, std::uint64_t offset) {
  std::size_t done = 0;
  while (done < out.size()) {
    ssize_t n = ::pread(fd_, out.data() + done, out.size() - done,
                        static_cast<off_t>(offset + done));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno(path_, "pread", errno);
    }
    if (n == 0) throw Error(ErrorCode::kIo, "unexpected end of file: " + path_.string());
    done += static_cast<std::size_t>(n);
  }
}

void File::sync() {
  if (::fsync(fd_) != 0) throw_errno(path_, "fsync", errno);
}

void File::close() {
  if (fd_ >= 0) {
    int rc = ::close(fd_);
    fd_ = -1;
    if (rc != 0) throw_errno(path_, "close", errno);
  }
}

Bytes read_file_bytes(const fs::path& path) {
  File f = File::open_read(path);
  Bytes out(f.size());
  std::size_t n = f.read_some(out);
  out.resize(n);
  return out;
}

fs::path temp_path_in(const fs::path& dir) {
  auto rnd = crypto::random_array<8>();
  return dir / ("." + to_hex(rnd) + ".tmp");
}

void write_file_atomic(const fs::path& path, ByteView data) {
  fs::path tmp = temp_path_in(path.parent_path());
  try {
    File f = File::create_new(tmp);
    f.write_all(data);
    f.close();
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

FileLock::FileLock(const fs::path& lock_path) {
  fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
  if (fd_ < 0) throw_errno(lock_path, "open lock", errno);
  while (::flock(fd_, LOCK_EX) != 0) {
    if (errno != EINTR) {
      int err = errno;
      ::close(fd_);
      throw_errno(lock_path, "flock", err);
    }
  }
}

FileLock::~FileLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace sealvault
