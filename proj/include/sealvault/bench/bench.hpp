#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sealvault/bench/workload.hpp"
#include "sealvault/tee/identity.hpp"

namespace sealvault::bench {

enum class StorageMode { kPlain, kV1, kSealed };
enum class Direction { kRead, kWrite };

std::string_view mode_label(StorageMode mode);            // PLAIN / V1 / SEALED
std::string_view direction_label(Direction direction);    // READ / WRITE
std::optional<StorageMode> parse_storage_mode(std::string_view s);  // case-insensitive
std::optional<WorkloadKind> parse_workload(std::string_view s);
std::optional<Direction> parse_direction(std::string_view s);

struct BenchRecord {
  StorageMode mode = StorageMode::kPlain;
  WorkloadKind workload = WorkloadKind::kSingle;
  Direction direction = Direction::kWrite;
  std::size_t rep = 0;
  std::uint64_t bytes = 0;
  double seconds = 0;
  double mbps = 0;  // bytes / 10^6 / seconds
};

struct BenchConfig {
  std::vector<StorageMode> modes;
  std::vector<Manifest> workloads;  // staged corpora
  std::vector<Direction> directions{Direction::kRead, Direction::kWrite};
  std::size_t repetitions = 10;
  fs::path scratch;  // targets are created and removed under here
  std::optional<tee::PlatformIdentity> platform;  // required for SEALED
  std::uint32_t kdf_iterations = 10000;
  /// Files transferred concurrently within a repetition. 1 is the default
  /// single-threaded behaviour.
  std::size_t parallelism = 1;
  std::function<void(const BenchRecord&)> on_record;
};

/// Runs modes x workloads x directions x repetitions in that nesting order.
/// Every READ repetition is verified against the manifest digests;
/// a mismatch throws VerificationFailure and aborts the run.
std::vector<BenchRecord> run_bench(const BenchConfig& config);

struct SummaryRow {
  StorageMode mode;
  WorkloadKind workload;
  Direction direction;
  std::size_t count = 0;
  std::uint64_t bytes = 0;
  double mean_mbps = 0;
  double stddev_mbps = 0;  // sample standard deviation, 0 for one record
  double mean_seconds = 0;
};

/// One row per (mode, workload, direction) in first-seen order.
/// EmptyInput for no records.
std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records);

inline constexpr std::string_view kCsvHeader = "mode,workload,direction,rep,bytes,seconds,mbps";

std::string to_csv(const std::vector<BenchRecord>& records);
std::string format_summary(const std::vector<SummaryRow>& rows);

}  // namespace sealvault::bench
