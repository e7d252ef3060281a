#include "sealvault/sync/sync.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cctype>
#include <cstring>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "sealvault/common/error.hpp"
#include "sealvault/common/file_io.hpp"
#include "sealvault/crypto/primitives.hpp"
#include "sealvault/sync/sync_state.hpp"

namespace sealvault::sync {
namespace fs = std::filesystem;

bool is_local_only(const std::string& key) {
  std::string_view name(key);
  if (auto slash = name.rfind('/'); slash != std::string_view::npos) name.remove_prefix(slash + 1);
  if (key == kSyncStateFileName || key == kSyncLockFileName || key == "vault.lock") return true;
  return name.starts_with('.') && name.ends_with(".tmp");
}

namespace {

using Clock = std::chrono::steady_clock;

std::string sanitize_version(const std::string& v) {
  std::string out;
  for (char c : v) {
    if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out.empty() ? "unknown" : out.substr(0, 64);
}

class SyncRun {
 public:
  SyncRun(fs::path root, RemoteStore& store)
      : root_(std::move(root)), store_(store), state_path_(root_ / kSyncStateFileName) {
    state_ = load_sync_state(state_path_);
  }

  SyncReport run(const SyncOptions& options) {
    for (const auto& entry : fs::recursive_directory_iterator(root_)) {
      if (!entry.is_regular_file()) continue;
      std::string key = fs::relative(entry.path(), root_).generic_string();
      if (!is_local_only(key)) local_keys_.insert(key);
    }
    for (auto& info : store_.list()) {
      if (!is_local_only(info.key)) remote_[info.key] = info.version;
    }
    std::set<std::string> keys = local_keys_;
    for (const auto& [k, v] : remote_) keys.insert(k);
    for (const auto& [k, r] : state_.records) keys.insert(k);
    std::vector<std::string> work(keys.begin(), keys.end());

    try {
      std::size_t workers = std::max<std::size_t>(1, std::min(options.parallelism, work.size()));
      if (workers == 1) {
        for (const auto& key : work) process(key);
      } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
          pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < work.size();) {
              try {
                process(work[i]);
              } catch (...) {
                std::lock_guard g(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = work.size();
              }
            }
          });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
      }
    } catch (...) {
      std::lock_guard g(mutex_);
      save_sync_state(state_path_, state_);
      throw;
    }
    std::lock_guard g(mutex_);
    save_sync_state(state_path_, state_);
    return report_;
  }

 private:
  fs::path local_path(const std::string& key) const { return root_ / fs::path(key); }

  std::optional<Bytes> read_local(const std::string& key) const {
    if (!local_keys_.contains(key)) return std::nullopt;
    return read_file_bytes(local_path(key));
  }

  void record(const std::string& key, std::string version, const Digest256& digest) {
    std::lock_guard g(mutex_);
    state_.records[key] = SyncRecord{std::move(version), digest};
    maybe_save();
  }

  void forget(const std::string& key) {
    std::lock_guard g(mutex_);
    state_.records.erase(key);
    maybe_save();
  }

  // Called with mutex_ held. Bounds state rewrites while still persisting
  // progress regularly.
  void maybe_save() {
    auto now = Clock::now();
    if (now - last_save_ < std::chrono::milliseconds(500)) return;
    save_sync_state(state_path_, state_);
    last_save_ = now;
  }

  void count(std::size_t SyncReport::*field) {
    std::lock_guard g(mutex_);
    ++(report_.*field);
  }

  void write_local(const std::string& key, ByteView data) {
    fs::path path = local_path(key);
    fs::create_directories(path.parent_path());
    write_file_atomic(path, data);
  }

  void remove_local(const std::string& key) {
    fs::path path = local_path(key);
    std::error_code ec;
    fs::remove(path, ec);
    for (fs::path dir = path.parent_path(); dir != root_ && fs::is_empty(dir, ec);
         dir = dir.parent_path()) {
      fs::remove(dir, ec);
    }
  }

  void push(const std::string& key, const Bytes& data, const PutCondition& cond) {
    try {
      std::string version = store_.put_object(key, data, cond);
      record(key, version, crypto::sha256(data));
      count(&SyncReport::pushed);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPreconditionFailed) throw;
      // The remote moved under us; treat like a divergent edit.
      auto remote = store_.get_object(key);
      if (!remote) {
        push(key, data, PutCondition::if_absent());
        return;
      }
      resolve_both_present(key, data, *remote);
    }
  }

  void pull(const std::string& key, const RemoteObject& obj) {
    write_local(key, obj.data);
    record(key, obj.version, crypto::sha256(obj.data));
    count(&SyncReport::pulled);
  }

  void resolve_both_present(const std::string& key, const Bytes& local, const RemoteObject& remote) {
    Digest256 local_digest = crypto::sha256(local);
    if (crypto::sha256(remote.data) == local_digest) {
      record(key, remote.version, local_digest);
      return;
    }
    conflict(key, local, remote);
  }

  // Keeps both sides: the remote copy is preserved as a conflict object on
  // both ends, then the local copy replaces the remote one.
  void conflict(const std::string& key, const Bytes& local, const RemoteObject& remote) {
    std::string conflict_key = key + std::string(kConflictMarker) + sanitize_version(remote.version);
    std::string conflict_version;
    try {
      conflict_version = store_.put_object(conflict_key, remote.data, PutCondition::if_absent());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPreconditionFailed) throw;
      auto existing = store_.get_object(conflict_key);
      conflict_version = existing ? existing->version : std::string();
    }
    write_local(conflict_key, remote.data);
    record(conflict_key, conflict_version, crypto::sha256(remote.data));
    std::string version = store_.put_object(key, local, PutCondition::if_match(remote.version));
    record(key, version, crypto::sha256(local));
    std::lock_guard g(mutex_);
    ++report_.conflicts;
    report_.conflict_keys.push_back(conflict_key);
  }

  void process(const std::string& key) {
    std::optional<Bytes> local = read_local(key);
    std::optional<std::string> remote_version;
    if (auto it = remote_.find(key); it != remote_.end()) remote_version = it->second;
    std::optional<SyncRecord> prior;
    {
      std::lock_guard g(mutex_);
      if (auto it = state_.records.find(key); it != state_.records.end()) prior = it->second;
    }

    if (!prior) {
      if (local && remote_version) {
        auto remote = store_.get_object(key);
        if (!remote) {
          push(key, *local, PutCondition::if_absent());
        } else {
          resolve_both_present(key, *local, *remote);
        }
      } else if (local) {
        push(key, *local, PutCondition::if_absent());
      } else if (remote_version) {
        if (auto remote = store_.get_object(key)) pull(key, *remote);
      }
      return;
    }

    bool local_changed = !local || crypto::sha256(*local) != prior->digest;
    bool remote_changed = !remote_version || *remote_version != prior->version;
    if (!local_changed && !remote_changed) return;

    if (!local && !remote_version) {
      forget(key);
    } else if (!remote_changed) {
      // Local edit or local deletion.
      if (local) {
        push(key, *local, PutCondition::if_match(prior->version));
      } else {
        store_.remove(key);
        forget(key);
        count(&SyncReport::deleted_remote);
      }
    } else if (!local_changed) {
      // Remote edit or remote deletion.
      if (remote_version) {
        if (auto remote = store_.get_object(key)) pull(key, *remote);
      } else {
        remove_local(key);
        forget(key);
        count(&SyncReport::deleted_local);
      }
    } else if (!local) {
      // Deleted here, edited there: keep the edit.
      if (auto remote = store_.get_object(key)) pull(key, *remote);
    } else if (!remote_version) {
      // Edited here, deleted there: keep the edit.
      push(key, *local, PutCondition::if_absent());
    } else {
      auto remote = store_.get_object(key);
      if (!remote) {
        push(key, *local, PutCondition::if_absent());
      } else {
        resolve_both_present(key, *local, *remote);
      }
    }
  }

  fs::path root_;
  RemoteStore& store_;
  fs::path state_path_;
  SyncState state_;
  std::set<std::string> local_keys_;
  std::map<std::string, std::string> remote_;
  SyncReport report_;
  std::mutex mutex_;
  Clock::time_point last_save_ = Clock::now();
};

}  // namespace

SyncReport sync_vault(const fs::path& vault_root, RemoteStore& store, const SyncOptions& options) {
  if (!fs::is_directory(vault_root)) {
    throw Error(ErrorCode::kNotFound, "vault root " + vault_root.string() + " is not a directory");
  }
  FileLock lock(vault_root / kSyncLockFileName);
  SyncRun run(vault_root, store);
  return run.run(options);
}

namespace {

/// Exact set of 8-byte windows, with a bitmap prefilter so the scan over
/// large objects is mostly a single bit test per position.
class WindowIndex {
 public:
  explicit WindowIndex(const std::vector<Bytes>& corpus) {
    std::size_t total = 0;
    for (const Bytes& s : corpus) total += s.size() >= kLeakWindow ? s.size() - kLeakWindow + 1 : 0;
    bits_ = 1;
    while (bits_ < total * 64 && bits_ < (std::size_t{1} << 33)) bits_ <<= 1;
    filter_.assign(bits_ / 64 + 1, 0);
    entries_.reserve(total);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const Bytes& s = corpus[i];
      for (std::size_t off = 0; off + kLeakWindow <= s.size(); ++off) {
        std::uint64_t w = load(s.data() + off);
        entries_.emplace_back(w, i);
        std::uint64_t h = slot(w);
        filter_[h / 64] |= std::uint64_t{1} << (h % 64);
      }
    }
    std::sort(entries_.begin(), entries_.end());
  }

  bool empty() const { return entries_.empty(); }

  /// First (offset, sample) where a window of `data` is in the index.
  std::optional<std::pair<std::uint64_t, std::size_t>> find(std::string_view data) const {
    const auto* p = reinterpret_cast<const std::uint8_t*>(data.data());
    for (std::size_t off = 0; off + kLeakWindow <= data.size(); ++off) {
      std::uint64_t w = load(p + off);
      std::uint64_t h = slot(w);
      if (!(filter_[h / 64] & (std::uint64_t{1} << (h % 64)))) continue;
      auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(w, std::size_t{0}));
      if (it != entries_.end() && it->first == w) return std::make_pair(off, it->second);
    }
    return std::nullopt;
  }

 private:
  static std::uint64_t load(const std::uint8_t* p) {
    std::uint64_t w;
    std::memcpy(&w, p, sizeof w);
    return w;
  }
  std::uint64_t slot(std::uint64_t w) const { return (w * 0x9E3779B97F4A7C15ull >> 17) & (bits_ - 1); }

  std::size_t bits_ = 1;
  std::vector<std::uint64_t> filter_;
  std::vector<std::pair<std::uint64_t, std::size_t>> entries_;
};

}  // namespace

std::vector<OpacityFinding> verify_remote_opacity(RemoteStore& store,
                                                  const std::vector<Bytes>& corpus) {
  std::vector<OpacityFinding> findings;
  WindowIndex index(corpus);
  if (index.empty()) return findings;
  for (const ObjectInfo& info : store.list()) {
    if (auto hit = index.find(info.key)) {
      findings.push_back({info.key, true, hit->first, hit->second});
    }
    auto obj = store.get_object(info.key);
    if (!obj) continue;
    if (auto hit = index.find(as_chars(obj->data))) {
      findings.push_back({info.key, false, hit->first, hit->second});
    }
  }
  return findings;
}

}  // namespace sealvault::sync
