#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sealvault/sync/store.hpp"

namespace sealvault::sync {

inline constexpr std::string_view kSyncStateFileName = "sync.state";
inline constexpr std::string_view kSyncLockFileName = "sync.lock";
inline constexpr std::string_view kConflictMarker = ".conflict-";

struct SyncOptions {
  /// Concurrent transfers within one run. 1 keeps the run single-threaded.
  std::size_t parallelism = 1;
};

struct SyncReport {
  std::size_t pushed = 0;
  std::size_t pulled = 0;
  std::size_t conflicts = 0;
  std::size_t deleted_remote = 0;
  std::size_t deleted_local = 0;
  std::vector<std::string> conflict_keys;  // the created conflict objects

  std::size_t operations() const {
    return pushed + pulled + conflicts + deleted_remote + deleted_local;
  }
};

/// True for local files that never leave the machine (sync bookkeeping,
/// locks, temporaries).
bool is_local_only(const std::string& key);

/// Three-way synchronization of the physical vault tree at `vault_root`
/// against `store`. State lives in `vault_root`/sync.state.
SyncReport sync_vault(const std::filesystem::path& vault_root, RemoteStore& store,
                      const SyncOptions& options = {});

struct OpacityFinding {
  std::string key;
  bool in_key_name = false;  // match found in the key string, not the bytes
  std::uint64_t offset = 0;
  std::size_t sample = 0;  // index into the corpus
};

inline constexpr std::size_t kLeakWindow = 8;

/// Scans every remote key and object body for any 8-byte substring of any
/// corpus sample. Reports at most one finding per object and location kind.
std::vector<OpacityFinding> verify_remote_opacity(RemoteStore& store,
                                                  const std::vector<Bytes>& corpus);

}  // namespace sealvault::sync
