// Drives the built sealvault binary end to end.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "oracle/ref_sha256.hpp"
#include "unit/test_util.hpp"

namespace {

namespace fs = std::filesystem;
using sealvault::testing::TempDir;

constexpr const char* kPassword = "correct horse battery staple 8d1f";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    spit(dir_ / "pw", std::string(kPassword) + "\n");
    spit(dir_ / "badpw", "not the password\n");
  }

  void TearDown() override {
    // No command output may ever echo the password.
    EXPECT_EQ(transcript_.find(kPassword), std::string::npos);
  }

  /// Runs the CLI with `pwfile` (if non-empty) on descriptor 3.
  Outcome run(const std::string& args, const std::string& pwfile = "pw", const std::string& env = "") {
    std::string cmd = env + " '" SEALVAULT_CLI_PATH "' " + args;
    if (!pwfile.empty()) cmd += " 3<'" + (dir_ / pwfile).string() + "'";
    cmd += " >'" + (dir_ / "stdout").string() + "' 2>'" + (dir_ / "stderr").string() + "' </dev/null";
    int status = std::system(cmd.c_str());
    Outcome r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir_ / "stdout"),
          slurp(dir_ / "stderr")};
    transcript_ += r.out + r.err;
    return r;
  }

  std::string vault(const std::string& name = "v") const {
    return "--vault '" + (dir_ / name).string() + "' --password-fd 3";
  }

  TempDir dir_;
  std::string transcript_;
};

TEST_F(CliTest, InitThenEmptyListing) {
  Outcome r = run(vault() + " init --mode v1 --kdf-iterations 2");
  ASSERT_EQ(r.code, 0) << r.err;
  r = run(vault() + " ls");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, ReinitRefused) {
  ASSERT_EQ(run(vault() + " init --kdf-iterations 2").code, 0);
  Outcome r = run(vault() + " init --kdf-iterations 2");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("TargetNotEmpty"), std::string::npos);
}

TEST_F(CliTest, SealedWithoutSeedFailsBeforePrompt) {
  Outcome r = run(vault() + " init --mode sealed --kdf-iterations 2", "");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("MissingPlatform"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "v" / "vault.cfg"));
}

TEST_F(CliTest, PutGetRoundTrip) {
  ASSERT_EQ(run(vault() + " init --kdf-iterations 2").code, 0);
  std::string payload(100000, '\0');
  std::mt19937_64 rng(5);
  for (auto& c : payload) c = static_cast<char>(rng());
  spit(dir_ / "in.bin", payload);
  ASSERT_EQ(run(vault() + " put '" + (dir_ / "in.bin").string() + "' docs/in.bin").code, 0);
  Outcome r = run(vault() + " get docs/in.bin '" + (dir_ / "out.bin").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "out.bin"), payload);
  r = run(vault() + " ls docs");
  EXPECT_EQ(r.out, "f\t100000\tin.bin\n");
  r = run(vault() + " ls");
  EXPECT_EQ(r.out, "d\t-\tdocs\n");
}

TEST_F(CliTest, MissingFileAndWrongPassword) {
  ASSERT_EQ(run(vault() + " init --kdf-iterations 2").code, 0);
  Outcome r = run(vault() + " get nope '" + (dir_ / "o").string() + "'");
  EXPECT_EQ(r.code, 4);
  EXPECT_FALSE(fs::exists(dir_ / "o"));
  r = run(vault() + " ls", "badpw");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("WrongPassword"), std::string::npos);
}

TEST_F(CliTest, MvRmMkdir) {
  ASSERT_EQ(run(vault() + " init --kdf-iterations 2").code, 0);
  spit(dir_ / "a", "alpha");
  ASSERT_EQ(run(vault() + " put '" + (dir_ / "a").string() + "' a.txt").code, 0);
  ASSERT_EQ(run(vault() + " mkdir sub/deeper").code, 0);
  ASSERT_EQ(run(vault() + " mv a.txt sub/b.txt").code, 0);
  EXPECT_EQ(run(vault() + " ls sub").out, "f\t5\tb.txt\nd\t-\tdeeper\n");
  EXPECT_EQ(run(vault() + " rm sub").code, 2);
  ASSERT_EQ(run(vault() + " rm sub/b.txt").code, 0);
  EXPECT_EQ(run(vault() + " ls sub").out, "d\t-\tdeeper\n");
}

TEST_F(CliTest, SealedWithSeedFile) {
  std::string seed(32, '\0');
  for (int i = 0; i < 32; ++i) seed[i] = static_cast<char>(i * 7 + 1);
  spit(dir_ / "seed", seed);
  std::string env = "SEALVAULT_PLATFORM_SEED_FILE='" + (dir_ / "seed").string() + "'";
  ASSERT_EQ(run(vault() + " init --mode sealed --kdf-iterations 2", "pw", env).code, 0);
  spit(dir_ / "x", "sealed payload");
  ASSERT_EQ(run(vault() + " put '" + (dir_ / "x").string() + "' x", "pw", env).code, 0);
  Outcome r = run(vault() + " get x -", "pw", env);
  EXPECT_EQ(r.out, "sealed payload");
  // Same password, different platform.
  spit(dir_ / "seed2", std::string(64, 'a'));
  r = run(vault() + " --platform-seed-file '" + (dir_ / "seed2").string() + "' ls");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("UnsealFailure"), std::string::npos);
  r = run(vault() + " ls");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("MissingPlatform"), std::string::npos);
}

TEST_F(CliTest, SyncTwiceIsQuiet) {
  ASSERT_EQ(run(vault() + " init --kdf-iterations 2").code, 0);
  spit(dir_ / "a", "alpha");
  ASSERT_EQ(run(vault() + " put '" + (dir_ / "a").string() + "' a").code, 0);
  std::string remote = " sync --remote '" + (dir_ / "remote").string() + "'";
  Outcome r = run("--vault '" + (dir_ / "v").string() + "'" + remote, "");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("pushed=2 pulled=0 conflicts=0"), std::string::npos) << r.out;
  r = run("--vault '" + (dir_ / "v").string() + "'" + remote, "");
  EXPECT_EQ(r.out, "pushed=0 pulled=0 conflicts=0\n");
}

TEST_F(CliTest, SyncUnreachableRemote) {
  ASSERT_EQ(run(vault() + " init --kdf-iterations 2").code, 0);
  Outcome r = run("--vault '" + (dir_ / "v").string() + "' sync --remote http://127.0.0.1:1", "");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("StoreUnreachable"), std::string::npos);
}

TEST_F(CliTest, BenchCsvShape) {
  std::string csv = (dir_ / "bench.csv").string();
  Outcome r = run("bench --modes PLAIN,V1 --workload SINGLE --directions READ,WRITE --reps 3 --size 256KiB"
              " --scratch '" + (dir_ / "scratch").string() + "' --out '" + csv + "'",
              "");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(csv));
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 1u + 3 * 2 * 2 * 1);
  EXPECT_NE(r.out.find("PLAIN"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("", "").code, 2);
  EXPECT_EQ(run("frobnicate", "").code, 2);
  EXPECT_EQ(run(vault() + " init --mode xts", "").code, 2);
  EXPECT_EQ(run("mount", "").code, 1);
  EXPECT_EQ(run("--help", "").code, 0);
}

TEST_F(CliTest, NoPasswordFlagExists) {
  Outcome r = run("--help", "");
  EXPECT_EQ(r.out.find("--password "), std::string::npos);
  EXPECT_EQ(run(vault() + " --password x ls", "").code, 2);
}

}  // namespace
