#include "sealvault/modes/filename.hpp"

#include <gtest/gtest.h>

#include <set>

#include "test_util.hpp"

namespace sealvault::modes {
namespace {

using sealvault::testing::random_array;

std::string random_name(std::mt19937_64& rng, std::size_t max_len) {
  static constexpr std::string_view kChars =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 ._-()";
  std::size_t len = 1 + rng() % max_len;
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(kChars[rng() % kChars.size()]);
  if (s == "." || s == "..") s = "x";
  return s;
}

class FilenameTest : public ::testing::Test {
 protected:
  std::mt19937_64 rng_{50};
  Key256 key_{random_array<32>(rng_)};
  Id16 dir_{random_array<16>(rng_)};
};

TEST_F(FilenameTest, DeterministicRoundTrip) {
  std::string enc = encrypt_filename(key_, dir_, "report.pdf");
  EXPECT_EQ(enc, encrypt_filename(key_, dir_, "report.pdf"));
  EXPECT_TRUE(enc.ends_with(".sc"));
  EXPECT_EQ(decrypt_filename(key_, dir_, enc), "report.pdf");
}

TEST_F(FilenameTest, DirIdSeparation) {
  Id16 other = dir_;
  other[5] ^= 1;
  std::string a = encrypt_filename(key_, dir_, "same");
  EXPECT_NE(a, encrypt_filename(key_, other, "same"));
  EXPECT_SV_ERROR(ErrorCode::kAuthenticationFailure, decrypt_filename(key_, other, a));
}

TEST_F(FilenameTest, LengthCeiling) {
  std::string name(160, 'n');
  std::string enc = encrypt_filename(key_, dir_, name);
  EXPECT_EQ(enc.size(), 238u);
  EXPECT_EQ(enc.size(), encoded_name_length(160));
  EXPECT_LE(enc.size(), kMaxEncodedNameLength);
  EXPECT_SV_ERROR(ErrorCode::kNameTooLong, encrypt_filename(key_, dir_, std::string(161, 'n')));
}

TEST_F(FilenameTest, LengthFormulaHoldsForAllLengths) {
  for (std::size_t n = 1; n <= kMaxNameBytes; ++n) {
    EXPECT_EQ(encrypt_filename(key_, dir_, std::string(n, 'a')).size(), encoded_name_length(n));
  }
}

TEST_F(FilenameTest, InjectiveOverRandomNames) {
  std::set<std::string> names, encodings;
  for (int i = 0; i < 10000; ++i) {
    std::string n = random_name(rng_, kMaxNameBytes);
    if (!names.insert(n).second) continue;
    std::string enc = encrypt_filename(key_, dir_, n);
    EXPECT_LE(enc.size(), kMaxEncodedNameLength);
    EXPECT_TRUE(encodings.insert(enc).second) << n;
  }
  EXPECT_EQ(names.size(), encodings.size());
}

TEST_F(FilenameTest, InvalidNames) {
  EXPECT_SV_ERROR(ErrorCode::kInvalidName, encrypt_filename(key_, dir_, ""));
  EXPECT_SV_ERROR(ErrorCode::kInvalidName, encrypt_filename(key_, dir_, "a/b"));
  EXPECT_SV_ERROR(ErrorCode::kInvalidName, encrypt_filename(key_, dir_, ".."));
  EXPECT_SV_ERROR(ErrorCode::kInvalidName, encrypt_filename(key_, dir_, std::string("a\0b", 3)));
  EXPECT_SV_ERROR(ErrorCode::kInvalidName, encrypt_filename(key_, dir_, "\xC0\xAF"));
  EXPECT_EQ(decrypt_filename(key_, dir_, encrypt_filename(key_, dir_, "Grüße €.txt")),
            "Grüße €.txt");
}

TEST_F(FilenameTest, MalformedEncodings) {
  std::string enc = encrypt_filename(key_, dir_, "file");
  EXPECT_SV_ERROR(ErrorCode::kMalformedName,
                  decrypt_filename(key_, dir_, enc.substr(0, enc.size() - 3)));
  EXPECT_SV_ERROR(ErrorCode::kMalformedName, decrypt_filename(key_, dir_, "!!!!.sc"));
  EXPECT_SV_ERROR(ErrorCode::kMalformedName, decrypt_filename(key_, dir_, "AAAA.sc"));
  std::string tampered = enc;
  tampered[3] = tampered[3] == 'A' ? 'B' : 'A';
  EXPECT_SV_ERROR(ErrorCode::kAuthenticationFailure, decrypt_filename(key_, dir_, tampered));
}

}  // namespace
}  // namespace sealvault::modes
