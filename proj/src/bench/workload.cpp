#include "sealvault/bench/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>

#include "sealvault/common/error.hpp"
#include "sealvault/common/file_io.hpp"
#include "sealvault/crypto/primitives.hpp"

namespace sealvault::bench {
namespace {

constexpr std::size_t kChunk = 1 << 20;

double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 file_rng(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step so neighbouring seeds give unrelated streams
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return std::mt19937_64(z ^ (z >> 31));
}

std::string file_path(const WorkloadSpec& spec, std::size_t i) {
  if (spec.kind == WorkloadKind::kSingle) return "single.bin";
  char buf[64];
  std::snprintf(buf, sizeof buf, "dir%02zu/sub%zu/file%05zu.bin", i % 16, (i / 16) % 4, i);
  return buf;
}

}  // namespace

std::string_view workload_label(WorkloadKind kind) {
  return kind == WorkloadKind::kSingle ? "SINGLE" : "TREE";
}

std::uint64_t Manifest::total_bytes() const {
  std::uint64_t total = 0;
  for (const auto& f : files) total += f.size;
  return total;
}

std::vector<std::uint64_t> plan_sizes(const WorkloadSpec& spec) {
  if (spec.total_bytes == 0) throw Error(ErrorCode::kInvalidSpec, "workload of zero bytes");
  if (spec.kind == WorkloadKind::kSingle) {
    if (spec.file_count > 1) throw Error(ErrorCode::kInvalidSpec, "SINGLE workload has one file");
    return {spec.total_bytes};
  }

  const std::uint64_t lo = kTreeMinFileSize, hi = kTreeMaxFileSize;
  std::uint64_t min_count = (spec.total_bytes + hi - 1) / hi;
  std::uint64_t max_count = spec.total_bytes / lo;
  std::uint64_t count = spec.file_count;
  if (count == 0) {
    double mean = static_cast<double>(hi - lo) / std::log(static_cast<double>(hi) / lo);
    count = std::max<std::uint64_t>(1, std::llround(static_cast<double>(spec.total_bytes) / mean));
    count = std::clamp(count, min_count, std::max(min_count, max_count));
  }
  if (count < min_count || count > max_count) {
    throw Error(ErrorCode::kInvalidSpec, "cannot split " + std::to_string(spec.total_bytes) +
                                             " bytes into " + std::to_string(count) +
                                             " files of 1 KiB to 8 MiB");
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<double> raw(count);
  const double log_lo = std::log(static_cast<double>(lo)), log_hi = std::log(static_cast<double>(hi));
  for (double& r : raw) r = std::exp(log_lo + (log_hi - log_lo) * unit_interval(rng));

  auto sized = [&](double k) {
    std::vector<std::uint64_t> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      double v = std::round(raw[i] * k);
      out[i] = v <= lo ? lo : v >= hi ? hi : static_cast<std::uint64_t>(v);
    }
    return out;
  };
  auto sum = [](const std::vector<std::uint64_t>& v) {
    std::uint64_t s = 0;
    for (auto x : v) s += x;
    return s;
  };

  // sum(sized(k)) is monotone in k; bisect for the requested total.
  double k_lo = 0, k_hi = static_cast<double>(hi) / lo;
  for (int iter = 0; iter < 200; ++iter) {
    double mid = (k_lo + k_hi) / 2;
    if (sum(sized(mid)) < spec.total_bytes) k_lo = mid; else k_hi = mid;
  }
  std::vector<std::uint64_t> sizes = sized(k_hi);

  // Spread the rounding remainder over files that still have headroom.
  std::uint64_t total = sum(sizes);
  for (std::size_t i = 0; total != spec.total_bytes; i = (i + 1) % count) {
    if (total < spec.total_bytes) {
      std::uint64_t step = std::min(spec.total_bytes - total, hi - sizes[i]);
      sizes[i] += step;
      total += step;
    } else {
      std::uint64_t step = std::min(total - spec.total_bytes, sizes[i] - lo);
      sizes[i] -= step;
      total -= step;
    }
  }
  return sizes;
}

Manifest generate_workload(const WorkloadSpec& spec, const fs::path& staging) {
  Manifest manifest;
  manifest.spec = spec;
  manifest.staging = staging;
  std::vector<std::uint64_t> sizes = plan_sizes(spec);
  Bytes chunk(kChunk);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    ManifestEntry entry{file_path(spec, i), sizes[i], {}};
    fs::path target = staging / entry.path;
    fs::create_directories(target.parent_path());
    std::error_code ec;
    fs::remove(target, ec);
    File out = File::create_new(target);
    crypto::Sha256 hasher;
    std::mt19937_64 rng = file_rng(spec.seed, i);
    for (std::uint64_t left = sizes[i]; left > 0;) {
      std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(left, kChunk));
      for (std::size_t off = 0; off < n; off += 8) {
        std::uint64_t v = rng();
        std::memcpy(chunk.data() + off, &v, std::min<std::size_t>(8, n - off));
      }
      ByteView piece = ByteView(chunk).first(n);
      out.write_all(piece);
      hasher.update(piece);
      left -= n;
    }
    out.close();
    entry.digest = hasher.finish();
    manifest.files.push_back(std::move(entry));
  }
  return manifest;
}

}  // namespace sealvault::bench
