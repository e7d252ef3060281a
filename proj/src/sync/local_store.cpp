#include <algorithm>

#include "sealvault/common/error.hpp"
#include "sealvault/common/file_io.hpp"
#include "sealvault/crypto/primitives.hpp"
#include "sealvault/sync/store.hpp"

namespace sealvault::sync {
namespace {

constexpr std::string_view kStagingDir = ".staging";

}  // namespace

void validate_object_key(const std::string& key) {
  if (key.empty() || key.front() == '/' || key.back() == '/') {
    throw Error(ErrorCode::kInvalidArgument, "bad object key '" + key + "'");
  }
  std::size_t pos = 0;
  while (pos <= key.size()) {
    std::size_t next = std::min(key.find('/', pos), key.size());
    std::string_view part(key.data() + pos, next - pos);
    if (part.empty() || part == "." || part == ".." || part.find('\0') != std::string_view::npos ||
        part.find('\\') != std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument, "bad object key '" + key + "'");
    }
    if (pos == 0 && part == kStagingDir) {
      throw Error(ErrorCode::kInvalidArgument, "reserved object key '" + key + "'");
    }
    pos = next + 1;
  }
}

std::string content_version(ByteView data) {
  return to_hex(ByteView(crypto::sha256(data)).first(16));
}

LocalDirStore::LocalDirStore(fs::path root) : root_(std::move(root)), staging_(root_ / kStagingDir) {
  fs::create_directories(staging_);
}

fs::path LocalDirStore::object_path(const std::string& key) const {
  validate_object_key(key);
  return root_ / key;
}

std::string LocalDirStore::put_object(const std::string& key, ByteView data,
                                      const PutCondition& condition) {
  fs::path path = object_path(key);
  std::lock_guard guard(mutex_);
  FileLock lock(staging_ / "lock");
  if (condition.kind != PutCondition::Kind::kNone) {
    std::optional<std::string> current;
    if (fs::is_regular_file(path)) current = content_version(read_file_bytes(path));
    bool ok = condition.kind == PutCondition::Kind::kIfAbsent
                  ? !current
                  : current && *current == condition.version;
    if (!ok) throw Error(ErrorCode::kPreconditionFailed, key);
  }
  fs::path tmp = temp_path_in(staging_);
  try {
    File f = File::create_new(tmp);
    f.write_all(data);
    f.close();
    fs::create_directories(path.parent_path());
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
  return content_version(data);
}

std::optional<RemoteObject> LocalDirStore::get_object(const std::string& key) {
  fs::path path = object_path(key);
  if (!fs::is_regular_file(path)) return std::nullopt;
  try {
    Bytes data = read_file_bytes(path);
    std::string version = content_version(data);
    return RemoteObject{std::move(data), std::move(version)};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotFound) return std::nullopt;
    throw;
  }
}

std::vector<ObjectInfo> LocalDirStore::list(const std::string& prefix) {
  std::vector<ObjectInfo> out;
  for (auto it = fs::recursive_directory_iterator(root_); it != fs::recursive_directory_iterator();
       ++it) {
    if (it.depth() == 0 && it->path().filename() == kStagingDir) {
      it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file()) continue;
    std::string key = fs::relative(it->path(), root_).generic_string();
    if (!key.starts_with(prefix)) continue;
    Bytes data = read_file_bytes(it->path());
    out.push_back({key, content_version(data), data.size()});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
  return out;
}

void LocalDirStore::remove(const std::string& key) {
  fs::path path = object_path(key);
  std::lock_guard guard(mutex_);
  std::error_code ec;
  fs::remove(path, ec);
  for (fs::path dir = path.parent_path(); dir != root_ && fs::is_empty(dir, ec); dir = dir.parent_path()) {
    fs::remove(dir, ec);
  }
}

std::unique_ptr<RemoteStore> open_store(const std::string& location, const std::string& token) {
  if (location.starts_with("http://")) return std::make_unique<HttpStore>(location, token);
  if (location.find("://") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "unsupported remote scheme in '" + location + "'");
  }
  return std::make_unique<LocalDirStore>(location);
}

}  // namespace sealvault::sync
