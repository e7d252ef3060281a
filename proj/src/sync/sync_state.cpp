#include "sealvault/sync/sync_state.hpp"

#include "sealvault/common/error.hpp"
#include "sealvault/common/file_io.hpp"
#include "sealvault/crypto/primitives.hpp"

namespace sealvault::sync {
namespace {

constexpr std::string_view kMagic = "SSS1";
constexpr std::uint32_t kVersion = 1;

[[noreturn]] void corrupt(const std::string& why) { throw Error(ErrorCode::kStateCorrupt, why); }

void put_string(Bytes& out, const std::string& s) {
  if (s.size() > 0xFFFF) throw Error(ErrorCode::kInvalidArgument, "sync key too long");
  put_u16_le(out, static_cast<std::uint16_t>(s.size()));
  append(out, s);
}

}  // namespace

Bytes serialize_sync_state(const SyncState& state) {
  Bytes out;
  append(out, kMagic);
  put_u32_le(out, kVersion);
  put_u32_le(out, static_cast<std::uint32_t>(state.records.size()));
  for (const auto& [key, rec] : state.records) {
    put_string(out, key);
    put_string(out, rec.version);
    append(out, rec.digest);
  }
  append(out, crypto::sha256(out));
  return out;
}

SyncState parse_sync_state(ByteView bytes) {
  if (bytes.size() < 12 + 32) corrupt("sync state too short");
  ByteView body = bytes.first(bytes.size() - 32);
  if (crypto::sha256(body) != to_array<32>(bytes.last(32))) corrupt("sync state checksum mismatch");
  if (as_chars(body.first(4)) != kMagic) corrupt("bad sync state magic");
  if (get_u32_le(body, 4) != kVersion) corrupt("unsupported sync state version");
  std::uint32_t count = get_u32_le(body, 8);
  std::size_t pos = 12;
  auto take_string = [&]() {
    if (pos + 2 > body.size()) corrupt("truncated sync record");
    std::size_t len = get_u16_le(body, pos);
    pos += 2;
    if (pos + len > body.size()) corrupt("truncated sync record");
    std::string s(as_chars(body.subspan(pos, len)));
    pos += len;
    return s;
  };
  SyncState state;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string key = take_string();
    SyncRecord rec;
    rec.version = take_string();
    if (pos + 32 > body.size()) corrupt("truncated sync record");
    rec.digest = to_array<32>(body.subspan(pos, 32));
    pos += 32;
    if (!state.records.emplace(std::move(key), std::move(rec)).second) corrupt("duplicate sync key");
  }
  if (pos != body.size()) corrupt("trailing bytes in sync state");
  return state;
}

SyncState load_sync_state(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  return parse_sync_state(read_file_bytes(path));
}

void save_sync_state(const std::filesystem::path& path, const SyncState& state) {
  write_file_atomic(path, serialize_sync_state(state));
}

}  // namespace sealvault::sync
