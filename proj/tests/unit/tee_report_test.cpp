#include "sealvault/tee/report.hpp"

#include <gtest/gtest.h>

#include "oracle/ref_cmac.hpp"
#include "oracle/ref_sha256.hpp"
#include "test_util.hpp"

namespace sealvault::tee {
namespace {

using sealvault::testing::random_array;

class ReportTest : public ::testing::Test {
 protected:
  std::mt19937_64 rng_{20};
  PlatformIdentity platform_ = create_platform(random_array<32>(rng_));
  EnclaveIdentity self_ = measure_enclave(as_bytes("app"), as_bytes("acme"), 1, 3);
  EnclaveIdentity target_ = measure_enclave(as_bytes("verifier"), as_bytes("acme"), 2, 1);
  ByteArray<64> data_ = random_array<64>(rng_);
};

TEST_F(ReportTest, VerifiesOnSamePlatformForTarget) {
  Report r = create_report(platform_, self_, target_, data_);
  EXPECT_TRUE(verify_report(platform_, target_, r));
  EXPECT_EQ(r.body.measurement, self_.measurement);
  EXPECT_EQ(r.body.isv_svn, 3);
}

TEST_F(ReportTest, FailsOnOtherPlatformOrTarget) {
  Report r = create_report(platform_, self_, target_, data_);
  PlatformIdentity other = create_platform(random_array<32>(rng_));
  EXPECT_FALSE(verify_report(other, target_, r));
  EXPECT_FALSE(verify_report(platform_, self_, r));
}

TEST_F(ReportTest, MacMatchesReferenceConstruction) {
  Report r = create_report(platform_, self_, target_, data_);
  oracle::Bytes root(platform_.platform_key.view().begin(), platform_.platform_key.view().end());
  oracle::Bytes msg = oracle::bytes_of("REPORTv1");
  msg.insert(msg.end(), target_.measurement.begin(), target_.measurement.end());
  auto report_key = oracle::aes_cmac(root, msg);
  Bytes body = serialize_report_body(r.body);
  ASSERT_EQ(body.size(), kReportBodySize);
  auto expected = oracle::aes_cmac(oracle::Bytes(report_key.begin(), report_key.end()), body);
  EXPECT_EQ(to_hex(r.mac), to_hex(expected));
}

TEST_F(ReportTest, EveryBodyBitFlipBreaksVerification) {
  Report r = create_report(platform_, self_, target_, data_);
  Bytes body = serialize_report_body(r.body);
  for (std::size_t bit = 0; bit < body.size() * 8; ++bit) {
    Report t = r;
    std::size_t byte = bit / 8;
    auto mask = static_cast<std::uint8_t>(1u << (bit % 8));
    if (byte < 32) {
      t.body.measurement[byte] ^= mask;
    } else if (byte < 64) {
      t.body.signer[byte - 32] ^= mask;
    } else if (byte < 66) {
      t.body.product_id ^= static_cast<std::uint16_t>(mask << (8 * (byte - 64)));
    } else if (byte < 68) {
      t.body.isv_svn ^= static_cast<std::uint16_t>(mask << (8 * (byte - 66)));
    } else {
      t.body.report_data[byte - 68] ^= mask;
    }
    EXPECT_FALSE(verify_report(platform_, target_, t)) << "bit " << bit;
  }
  Report t = r;
  t.mac[0] ^= 1;
  EXPECT_FALSE(verify_report(platform_, target_, t));
}

}  // namespace
}  // namespace sealvault::tee
