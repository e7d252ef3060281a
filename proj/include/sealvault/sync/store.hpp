#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sealvault/common/bytes.hpp"

namespace sealvault::sync {

namespace fs = std::filesystem;

struct ObjectInfo {
  std::string key;
  std::string version;
  std::uint64_t size = 0;
};

struct RemoteObject {
  Bytes data;
  std::string version;
};

/// Guard for a conditional put. Versions are opaque and only compared for
/// equality.
struct PutCondition {
  enum class Kind { kNone, kIfMatch, kIfAbsent };
  Kind kind = Kind::kNone;
  std::string version;

  static PutCondition none() { return {}; }
  static PutCondition if_match(std::string v) { return {Kind::kIfMatch, std::move(v)}; }
  static PutCondition if_absent() { return {Kind::kIfAbsent, {}}; }
};

class RemoteStore {
 public:
  virtual ~RemoteStore() = default;

  /// Returns the new version. PreconditionFailed when the guard does not hold.
  virtual std::string put_object(const std::string& key, ByteView data,
                                 const PutCondition& condition = {}) = 0;
  virtual std::optional<RemoteObject> get_object(const std::string& key) = 0;
  virtual std::vector<ObjectInfo> list(const std::string& prefix = {}) = 0;
  /// Removing an absent key is not an error.
  virtual void remove(const std::string& key) = 0;
};

/// Keys are relative '/'-separated paths without empty, "." or ".." parts.
void validate_object_key(const std::string& key);

/// Objects stored as plain files under a directory. Versions are content
/// digests.
class LocalDirStore final : public RemoteStore {
 public:
  explicit LocalDirStore(fs::path root);

  std::string put_object(const std::string& key, ByteView data,
                         const PutCondition& condition = {}) override;
  std::optional<RemoteObject> get_object(const std::string& key) override;
  std::vector<ObjectInfo> list(const std::string& prefix = {}) override;
  void remove(const std::string& key) override;

  const fs::path& root() const { return root_; }

 private:
  fs::path object_path(const std::string& key) const;

  fs::path root_;
  fs::path staging_;
  std::mutex mutex_;
};

/// Client for the HTTP object protocol: GET/PUT/DELETE on <base>/<key>,
/// listing via GET <base>/?prefix=, version in the ETag header, bearer token
/// auth.
class HttpStore final : public RemoteStore {
 public:
  HttpStore(const std::string& base_url, std::string token);
  ~HttpStore() override;

  std::string put_object(const std::string& key, ByteView data,
                         const PutCondition& condition = {}) override;
  std::optional<RemoteObject> get_object(const std::string& key) override;
  std::vector<ObjectInfo> list(const std::string& prefix = {}) override;
  void remove(const std::string& key) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// "http://..." selects HttpStore; anything else is a local directory.
std::unique_ptr<RemoteStore> open_store(const std::string& location, const std::string& token = {});

/// Digest-derived version string used by the local backends.
std::string content_version(ByteView data);

}  // namespace sealvault::sync
