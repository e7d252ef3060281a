#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sealvault/common/bytes.hpp"

namespace sealvault::bench {

namespace fs = std::filesystem;

enum class WorkloadKind { kSingle, kTree };

std::string_view workload_label(WorkloadKind kind);  // SINGLE / TREE

inline constexpr std::uint64_t kTreeMinFileSize = 1024;
inline constexpr std::uint64_t kTreeMaxFileSize = 8 * 1024 * 1024;
inline constexpr std::uint64_t kDefaultSingleSize = 256 * 1024 * 1024;

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::kSingle;
  std::uint64_t total_bytes = kDefaultSingleSize;
  /// TREE only. 0 picks a count from the mean of the size distribution.
  std::size_t file_count = 0;
  std::uint64_t seed = 1;
};

struct ManifestEntry {
  std::string path;  // relative, '/'-separated
  std::uint64_t size = 0;
  Digest256 digest{};
};

struct Manifest {
  WorkloadSpec spec;
  fs::path staging;
  std::vector<ManifestEntry> files;

  std::uint64_t total_bytes() const;
};

/// File sizes for a spec, without touching disk. TREE sizes are drawn
/// log-uniform in [1 KiB, 8 MiB] and scaled so the sum lands within 1% of
/// the requested total. InvalidSpec for zero or infeasible totals.
std::vector<std::uint64_t> plan_sizes(const WorkloadSpec& spec);

/// Writes the deterministic corpus under `staging` and returns its manifest.
Manifest generate_workload(const WorkloadSpec& spec, const fs::path& staging);

}  // namespace sealvault::bench
