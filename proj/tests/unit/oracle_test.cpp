// Sanity checks for the test-only reference implementations against published
// vectors, so that later comparisons against them mean something.

#include <gtest/gtest.h>

#include "oracle/ref_cmac.hpp"
#include "oracle/ref_sha256.hpp"
#include "test_util.hpp"

namespace {

using oracle::bytes_of;
using sealvault::to_hex;

TEST(OracleSha256, FipsVectors) {
  EXPECT_EQ(to_hex(oracle::sha256({})),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(to_hex(oracle::sha256(bytes_of("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(to_hex(oracle::sha256(
                bytes_of("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))),
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST(OracleHmac, KnownVector) {
  EXPECT_EQ(to_hex(oracle::hmac_sha256(bytes_of("key"),
                                       bytes_of("The quick brown fox jumps over the lazy dog"))),
            "f7bc83f430538424b13298e6aa6fb143ef4d59a14946175997479dbc2d1a3cd8");
}

TEST(OraclePbkdf2, Rfc7914Vector) {
  EXPECT_EQ(to_hex(oracle::pbkdf2_hmac_sha256(bytes_of("passwd"), bytes_of("salt"), 1, 64)),
            "55ac046e56e3089fec1691c22544b605f94185216dde0465e68b9d57c20dacbc"
            "49ca9cccf179b645991664b39d77ef317c71b845b1e30bd509112041d3a19783");
}

TEST(OracleCmac, Rfc4493Aes128) {
  auto key = sealvault::from_hex("2b7e151628aed2a6abf7158809cf4f3c");
  EXPECT_EQ(to_hex(oracle::aes_cmac(key, {})), "bb1d6929e95937287fa37d129b756746");
  EXPECT_EQ(to_hex(oracle::aes_cmac(key, sealvault::from_hex("6bc1bee22e409f96e93d7e117393172a"))),
            "070a16b46b4d4144f79bdd9dd04a287c");
  EXPECT_EQ(to_hex(oracle::aes_cmac(
                key, sealvault::from_hex("6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac4"
                                         "5af8e5130c81c46a35ce411"))),
            "dfa66747de9ae63030ca32611497c827");
}

TEST(OracleCmac, Sp800_38bAes256) {
  auto key = sealvault::from_hex(
      "603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4");
  EXPECT_EQ(to_hex(oracle::aes_cmac(key, {})), "028962f61b7bf89efc6b551f4667d983");
  EXPECT_EQ(to_hex(oracle::aes_cmac(key, sealvault::from_hex("6bc1bee22e409f96e93d7e117393172a"))),
            "28a7023f452e8f82bd4bf28d8c37c35c");
}

}  // namespace
