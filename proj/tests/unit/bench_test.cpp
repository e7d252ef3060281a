#include "sealvault/bench/bench.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "oracle/ref_sha256.hpp"
#include "sealvault/common/file_io.hpp"
#include "test_util.hpp"

namespace sealvault::bench {
namespace {

using sealvault::testing::random_array;
using sealvault::testing::TempDir;

std::uint64_t sum(const std::vector<std::uint64_t>& v) {
  return std::accumulate(v.begin(), v.end(), std::uint64_t{0});
}

TEST(Workload, SingleSize) {
  EXPECT_EQ(plan_sizes({WorkloadKind::kSingle, 12345, 0, 1}), std::vector<std::uint64_t>{12345});
}

TEST(Workload, TreeTotalsAndBounds) {
  for (std::uint64_t total : {std::uint64_t{1} << 20, std::uint64_t{16} << 20, std::uint64_t{100000007}}) {
    for (std::size_t count : {std::size_t{0}, std::size_t{10}, std::size_t{100}}) {
      WorkloadSpec spec{WorkloadKind::kTree, total, count, 7};
      if (count != 0 && (count * kTreeMinFileSize > total || count * kTreeMaxFileSize < total)) {
        EXPECT_SV_ERROR(ErrorCode::kInvalidSpec, plan_sizes(spec));
        continue;
      }
      auto sizes = plan_sizes(spec);
      if (count) {
        EXPECT_EQ(sizes.size(), count);
      }
      double err = std::abs(static_cast<double>(sum(sizes)) - static_cast<double>(total)) / total;
      EXPECT_LE(err, 0.01) << total << " " << count;
      for (auto s : sizes) {
        EXPECT_GE(s, kTreeMinFileSize);
        EXPECT_LE(s, kTreeMaxFileSize);
      }
    }
  }
}

TEST(Workload, TreeSizesSpread) {
  auto sizes = plan_sizes({WorkloadKind::kTree, 64ull << 20, 200, 3});
  auto [mn, mx] = std::minmax_element(sizes.begin(), sizes.end());
  EXPECT_GT(*mx, 20 * *mn);
}

TEST(Workload, InvalidSpecs) {
  EXPECT_SV_ERROR(ErrorCode::kInvalidSpec, plan_sizes({WorkloadKind::kSingle, 0, 0, 1}));
  EXPECT_SV_ERROR(ErrorCode::kInvalidSpec, plan_sizes({WorkloadKind::kTree, 0, 0, 1}));
  EXPECT_SV_ERROR(ErrorCode::kInvalidSpec, plan_sizes({WorkloadKind::kTree, 1000, 1, 1}));
  EXPECT_SV_ERROR(ErrorCode::kInvalidSpec, plan_sizes({WorkloadKind::kTree, 100 << 20, 2, 1}));
}

TEST(Workload, DeterministicCorpus) {
  TempDir a, b, c;
  WorkloadSpec spec{WorkloadKind::kTree, 2 << 20, 12, 42};
  Manifest ma = generate_workload(spec, a.path());
  Manifest mb = generate_workload(spec, b.path());
  spec.seed = 43;
  Manifest mc = generate_workload(spec, c.path());
  ASSERT_EQ(ma.files.size(), 12u);
  EXPECT_EQ(ma.total_bytes(), 2u << 20);
  for (std::size_t i = 0; i < ma.files.size(); ++i) {
    EXPECT_EQ(ma.files[i].path, mb.files[i].path);
    EXPECT_EQ(ma.files[i].digest, mb.files[i].digest);
    EXPECT_NE(ma.files[i].digest, mc.files[i].digest);
    Bytes data = read_file_bytes(a.path() / ma.files[i].path);
    EXPECT_EQ(data.size(), ma.files[i].size);
    EXPECT_EQ(to_hex(ma.files[i].digest), to_hex(oracle::sha256(oracle::Bytes(data.begin(), data.end()))));
  }
}

class BenchRunTest : public ::testing::Test {
 protected:
  Manifest stage(WorkloadKind kind, std::uint64_t bytes, std::size_t count = 0) {
    return generate_workload({kind, bytes, count, 5}, staging_ / std::string(workload_label(kind)));
  }

  BenchConfig config() {
    BenchConfig c;
    c.scratch = scratch_.path();
    c.kdf_iterations = 2;
    c.platform = tee::create_platform(random_array<32>(rng_));
    return c;
  }

  std::mt19937_64 rng_{8};
  TempDir staging_, scratch_;
};

TEST_F(BenchRunTest, SinglePlainRecord) {
  BenchConfig c = config();
  c.modes = {StorageMode::kPlain};
  c.workloads = {stage(WorkloadKind::kSingle, 1 << 20)};
  c.directions = {Direction::kWrite};
  c.repetitions = 1;
  auto records = run_bench(c);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].bytes, 1048576u);
  EXPECT_GT(records[0].mbps, 0);
  EXPECT_NEAR(records[0].mbps, records[0].bytes / 1e6 / records[0].seconds, 1e-9);
}

TEST_F(BenchRunTest, FullMatrixCardinalityAndOrder) {
  BenchConfig c = config();
  c.modes = {StorageMode::kPlain, StorageMode::kV1, StorageMode::kSealed};
  c.workloads = {stage(WorkloadKind::kSingle, 100000), stage(WorkloadKind::kTree, 200000, 20)};
  std::size_t seen = 0;
  c.on_record = [&](const BenchRecord&) { ++seen; };
  auto records = run_bench(c);
  ASSERT_EQ(records.size(), 120u);
  EXPECT_EQ(seen, 120u);
  std::size_t i = 0;
  for (StorageMode m : c.modes) {
    for (const Manifest& w : c.workloads) {
      for (Direction d : c.directions) {
        for (std::size_t rep = 0; rep < 10; ++rep, ++i) {
          EXPECT_EQ(records[i].mode, m);
          EXPECT_EQ(records[i].workload, w.spec.kind);
          EXPECT_EQ(records[i].direction, d);
          EXPECT_EQ(records[i].rep, rep);
          EXPECT_EQ(records[i].bytes, w.total_bytes());
          EXPECT_TRUE(std::isfinite(records[i].mbps));
          EXPECT_GT(records[i].mbps, 0);
        }
      }
    }
  }
  EXPECT_TRUE(fs::is_empty(scratch_.path()));
}

TEST_F(BenchRunTest, CorruptReadAborts) {
  BenchConfig c = config();
  c.modes = {StorageMode::kSealed};
  Manifest m = stage(WorkloadKind::kSingle, 50000);
  c.workloads = {m};
  c.directions = {Direction::kRead};
  c.repetitions = 1;
  EXPECT_EQ(run_bench(c).size(), 1u);
  c.workloads[0].files[0].digest[0] ^= 1;
  EXPECT_SV_ERROR(ErrorCode::kVerificationFailure, run_bench(c));
}

TEST_F(BenchRunTest, SealedNeedsPlatform) {
  BenchConfig c = config();
  c.platform.reset();
  c.modes = {StorageMode::kSealed};
  c.workloads = {stage(WorkloadKind::kSingle, 1000)};
  EXPECT_SV_ERROR(ErrorCode::kMissingPlatform, run_bench(c));
}

TEST_F(BenchRunTest, ParallelOption) {
  BenchConfig c = config();
  c.modes = {StorageMode::kV1};
  c.workloads = {stage(WorkloadKind::kTree, 300000, 30)};
  c.repetitions = 2;
  c.parallelism = 4;
  EXPECT_EQ(run_bench(c).size(), 4u);
}

BenchRecord rec(StorageMode m, Direction d, double mbps, std::size_t rep = 0) {
  return {m, WorkloadKind::kSingle, d, rep, 1000000, 1.0 / mbps, mbps};
}

TEST(Summary, IdenticalRecordsHaveZeroDeviation) {
  std::vector<BenchRecord> rs;
  for (std::size_t i = 0; i < 10; ++i) rs.push_back(rec(StorageMode::kV1, Direction::kRead, 50, i));
  auto rows = summarize(rs);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].count, 10u);
  EXPECT_DOUBLE_EQ(rows[0].mean_mbps, 50);
  EXPECT_DOUBLE_EQ(rows[0].stddev_mbps, 0);
}

TEST(Summary, MeanAndSampleDeviation) {
  auto rows = summarize({rec(StorageMode::kPlain, Direction::kWrite, 100),
                         rec(StorageMode::kPlain, Direction::kWrite, 200),
                         rec(StorageMode::kSealed, Direction::kWrite, 7)});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0].mean_mbps, 150);
  EXPECT_NEAR(rows[0].stddev_mbps, 70.71067811865476, 1e-9);
  EXPECT_EQ(rows[1].mode, StorageMode::kSealed);
  EXPECT_DOUBLE_EQ(rows[1].stddev_mbps, 0);
  EXPECT_SV_ERROR(ErrorCode::kEmptyInput, summarize({}));
}

TEST(Summary, CsvShape) {
  std::vector<BenchRecord> rs = {rec(StorageMode::kSealed, Direction::kRead, 12.5, 3)};
  rs[0].workload = WorkloadKind::kTree;
  std::string csv = to_csv(rs);
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "mode,workload,direction,rep,bytes,seconds,mbps");
  std::getline(in, line);
  EXPECT_TRUE(line.starts_with("SEALED,TREE,READ,3,1000000,")) << line;
  // mbps column recomputable from bytes and seconds
  std::vector<std::string> cols;
  std::stringstream ls(line);
  for (std::string col; std::getline(ls, col, ',');) cols.push_back(col);
  ASSERT_EQ(cols.size(), 7u);
  double recomputed = std::stod(cols[4]) / 1e6 / std::stod(cols[5]);
  EXPECT_NEAR(recomputed / std::stod(cols[6]), 1.0, 0.01);
  EXPECT_NE(format_summary(summarize(rs)).find("SEALED"), std::string::npos);
}

TEST(Labels, ParseRoundTrip) {
  for (auto m : {StorageMode::kPlain, StorageMode::kV1, StorageMode::kSealed}) {
    EXPECT_EQ(parse_storage_mode(mode_label(m)), m);
  }
  EXPECT_EQ(parse_storage_mode("sealed"), StorageMode::kSealed);
  EXPECT_EQ(parse_workload("tree"), WorkloadKind::kTree);
  EXPECT_EQ(parse_direction("Read"), Direction::kRead);
  EXPECT_FALSE(parse_storage_mode("luks"));
}

}  // namespace
}  // namespace sealvault::bench
