#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "sealvault/common/bytes.hpp"

namespace sealvault::sync {

struct SyncRecord {
  std::string version;  // remote version at last sync
  Digest256 digest{};   // local content digest at last sync
};

/// Per-key last-synced state. Keys are physical (encrypted) paths.
struct SyncState {
  std::map<std::string, SyncRecord> records;
};

/// "SSS1" ‖ version u32 ‖ count u32 ‖ records (key u16-len, version
/// u16-len, digest 32) ‖ SHA-256 of all preceding bytes.
Bytes serialize_sync_state(const SyncState& state);
SyncState parse_sync_state(ByteView bytes);

/// Missing file means empty state. Damaged file is StateCorrupt.
SyncState load_sync_state(const std::filesystem::path& path);
void save_sync_state(const std::filesystem::path& path, const SyncState& state);

}  // namespace sealvault::sync
