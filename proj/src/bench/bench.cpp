#include "sealvault/bench/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "sealvault/common/error.hpp"
#include "sealvault/common/file_io.hpp"
#include "sealvault/crypto/primitives.hpp"
#include "sealvault/vault/vault.hpp"

namespace sealvault::bench {
namespace {

using Clock = std::chrono::steady_clock;

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

Digest256 digest_of_file(const fs::path& path) {
  File f = File::open_read(path);
  crypto::Sha256 hasher;
  Bytes buf(1 << 20);
  for (std::size_t n; (n = f.read_some(buf)) > 0;) hasher.update(ByteView(buf).first(n));
  return hasher.finish();
}

/// Runs fn(i) for every file index, on `workers` threads.
void for_each_file(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard g(m);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

modes::ModeId vault_mode(StorageMode m) {
  return m == StorageMode::kV1 ? modes::ModeId::kV1 : modes::ModeId::kSealed;
}

class Runner {
 public:
  explicit Runner(const BenchConfig& config) : c_(config) {}

  std::vector<BenchRecord> run() {
    if (c_.modes.empty() || c_.workloads.empty() || c_.directions.empty() || c_.repetitions == 0) {
      throw Error(ErrorCode::kInvalidArgument, "empty bench matrix");
    }
    if (std::find(c_.modes.begin(), c_.modes.end(), StorageMode::kSealed) != c_.modes.end() &&
        !c_.platform) {
      throw Error(ErrorCode::kMissingPlatform, "SEALED bench needs a platform");
    }
    fs::create_directories(c_.scratch);
    std::vector<BenchRecord> records;
    for (StorageMode mode : c_.modes) {
      for (const Manifest& workload : c_.workloads) {
        fs::path read_source = c_.scratch / "read-source";
        bool populated = false;
        for (Direction direction : c_.directions) {
          if (direction == Direction::kRead && !populated) {
            fs::remove_all(read_source);
            populate(mode, workload, read_source);
            populated = true;
          }
          for (std::size_t rep = 0; rep < c_.repetitions; ++rep) {
            fs::path target = c_.scratch / "target";
            fs::remove_all(target);
            double seconds = direction == Direction::kWrite
                                 ? timed_write(mode, workload, target)
                                 : timed_read(mode, workload, read_source, target);
            if (direction == Direction::kRead) verify(workload, target);
            fs::remove_all(target);
            BenchRecord r{mode, workload.spec.kind, direction, rep, workload.total_bytes(), seconds, 0};
            r.mbps = static_cast<double>(r.bytes) / 1e6 / r.seconds;
            records.push_back(r);
            if (c_.on_record) c_.on_record(r);
          }
        }
        fs::remove_all(read_source);
      }
    }
    return records;
  }

 private:
  static double elapsed(Clock::time_point start) {
    double s = std::chrono::duration<double>(Clock::now() - start).count();
    return std::max(s, 1e-9);
  }

  vault::Vault fresh_vault(StorageMode mode, const fs::path& root) const {
    vault::CreateOptions opts;
    opts.kdf_iterations = c_.kdf_iterations;
    vault::create_vault(root, kBenchPassword, vault_mode(mode), c_.platform, opts);
    return vault::Vault::unlock(root, kBenchPassword, c_.platform);
  }

  void copy_plain(const fs::path& from_root, const fs::path& to_root, const Manifest& w) const {
    for_each_file(w.files.size(), c_.parallelism, [&](std::size_t i) {
      const auto& f = w.files[i];
      fs::path to = to_root / f.path;
      fs::create_directories(to.parent_path());
      fs::copy_file(from_root / f.path, to, fs::copy_options::overwrite_existing);
    });
  }

  void write_into_vault(vault::Vault& v, const Manifest& w) const {
    for_each_file(w.files.size(), c_.parallelism, [&](std::size_t i) {
      const auto& f = w.files[i];
      std::ifstream in(w.staging / f.path, std::ios::binary);
      if (!in) throw Error(ErrorCode::kIo, "cannot open " + (w.staging / f.path).string());
      v.write_file(f.path, in);
    });
  }

  void populate(StorageMode mode, const Manifest& w, const fs::path& root) const {
    if (mode == StorageMode::kPlain) {
      copy_plain(w.staging, root, w);
    } else {
      vault::Vault v = fresh_vault(mode, root);
      write_into_vault(v, w);
    }
  }

  double timed_write(StorageMode mode, const Manifest& w, const fs::path& target) const {
    if (mode == StorageMode::kPlain) {
      auto start = Clock::now();
      copy_plain(w.staging, target, w);
      return elapsed(start);
    }
    vault::Vault v = fresh_vault(mode, target);
    auto start = Clock::now();
    write_into_vault(v, w);
    return elapsed(start);
  }

  double timed_read(StorageMode mode, const Manifest& w, const fs::path& source,
                    const fs::path& target) const {
    fs::create_directories(target);
    if (mode == StorageMode::kPlain) {
      auto start = Clock::now();
      copy_plain(source, target, w);
      return elapsed(start);
    }
    vault::Vault v = vault::Vault::unlock(source, kBenchPassword, c_.platform);
    auto start = Clock::now();
    for_each_file(w.files.size(), c_.parallelism, [&](std::size_t i) {
      const auto& f = w.files[i];
      fs::path to = target / f.path;
      fs::create_directories(to.parent_path());
      std::ofstream out(to, std::ios::binary | std::ios::trunc);
      v.read_file(f.path, out);
      out.close();
      if (!out) throw Error(ErrorCode::kIo, "cannot write " + to.string());
    });
    return elapsed(start);
  }

  static void verify(const Manifest& w, const fs::path& target) {
    for (const auto& f : w.files) {
      fs::path p = target / f.path;
      if (!fs::exists(p) || fs::file_size(p) != f.size || digest_of_file(p) != f.digest) {
        throw Error(ErrorCode::kVerificationFailure, "read-back of " + f.path + " does not match");
      }
    }
  }

  static constexpr std::string_view kBenchPassword = "bench-password";
  const BenchConfig& c_;
};

}  // namespace

std::string_view mode_label(StorageMode mode) {
  switch (mode) {
    case StorageMode::kPlain: return "PLAIN";
    case StorageMode::kV1: return "V1";
    case StorageMode::kSealed: return "SEALED";
  }
  return "?";
}

std::string_view direction_label(Direction d) { return d == Direction::kRead ? "READ" : "WRITE"; }

std::optional<StorageMode> parse_storage_mode(std::string_view s) {
  std::string u = upper(s);
  if (u == "PLAIN") return StorageMode::kPlain;
  if (u == "V1") return StorageMode::kV1;
  if (u == "SEALED") return StorageMode::kSealed;
  return std::nullopt;
}

std::optional<WorkloadKind> parse_workload(std::string_view s) {
  std::string u = upper(s);
  if (u == "SINGLE") return WorkloadKind::kSingle;
  if (u == "TREE") return WorkloadKind::kTree;
  return std::nullopt;
}

std::optional<Direction> parse_direction(std::string_view s) {
  std::string u = upper(s);
  if (u == "READ") return Direction::kRead;
  if (u == "WRITE") return Direction::kWrite;
  return std::nullopt;
}

std::vector<BenchRecord> run_bench(const BenchConfig& config) { return Runner(config).run(); }

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::kEmptyInput, "no bench records");
  std::vector<SummaryRow> rows;
  std::vector<std::vector<const BenchRecord*>> groups;
  for (const BenchRecord& r : records) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& row) {
      return row.mode == r.mode && row.workload == r.workload && row.direction == r.direction;
    });
    if (it == rows.end()) {
      rows.push_back(SummaryRow{r.mode, r.workload, r.direction});
      groups.emplace_back();
      it = rows.end() - 1;
    }
    groups[static_cast<std::size_t>(it - rows.begin())].push_back(&r);
  }
  for (std::size_t g = 0; g < rows.size(); ++g) {
    const auto& group = groups[g];
    SummaryRow& row = rows[g];
    row.count = group.size();
    double sum = 0, seconds = 0;
    for (const BenchRecord* r : group) {
      sum += r->mbps;
      seconds += r->seconds;
      row.bytes = r->bytes;
    }
    row.mean_mbps = sum / static_cast<double>(row.count);
    row.mean_seconds = seconds / static_cast<double>(row.count);
    if (row.count > 1) {
      double ss = 0;
      for (const BenchRecord* r : group) ss += (r->mbps - row.mean_mbps) * (r->mbps - row.mean_mbps);
      row.stddev_mbps = std::sqrt(ss / static_cast<double>(row.count - 1));
    }
  }
  return rows;
}

std::string to_csv(const std::vector<BenchRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  char line[256];
  for (const BenchRecord& r : records) {
    std::snprintf(line, sizeof line, "%s,%s,%s,%zu,%llu,%.9f,%.6f\n", mode_label(r.mode).data(),
                  workload_label(r.workload).data(), direction_label(r.direction).data(), r.rep,
                  static_cast<unsigned long long>(r.bytes), r.seconds, r.mbps);
    out += line;
  }
  return out;
}

std::string format_summary(const std::vector<SummaryRow>& rows) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-7s %-7s %-6s %4s %14s %12s %12s\n", "mode", "workload", "dir",
                "n", "bytes", "mean MB/s", "sd MB/s");
  out += line;
  for (const SummaryRow& r : rows) {
    std::snprintf(line, sizeof line, "%-7s %-7s %-6s %4zu %14llu %12.2f %12.2f\n",
                  mode_label(r.mode).data(), workload_label(r.workload).data(),
                  direction_label(r.direction).data(), r.count,
                  static_cast<unsigned long long>(r.bytes), r.mean_mbps, r.stddev_mbps);
    out += line;
  }
  return out;
}

}  // namespace sealvault::bench
