#include "sealvault/modes/block.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace sealvault::modes {
namespace {

using sealvault::testing::random_array;
using sealvault::testing::random_bytes;

class BlockModeTest : public ::testing::TestWithParam<ModeId> {
 protected:
  void SetUp() override {
    session_ = init_enclave(tee::create_platform(random_array<32>(rng_)), as_bytes("enclave"),
                            as_bytes("signer"));
    cryptor_ = GetParam() == ModeId::kV1 ? make_v1_cryptor(Key256(random_array<32>(rng_)))
                                         : make_sealed_cryptor(session_);
  }

  std::mt19937_64 rng_{40};
  std::shared_ptr<EnclaveSession> session_;
  std::unique_ptr<ContentCryptor> cryptor_;
  Key256 file_key_{random_array<32>(rng_)};
  Id16 file_id_{random_array<16>(rng_)};
};

TEST_P(BlockModeTest, RoundTripRandomBlocks) {
  for (int i = 0; i < 40; ++i) {
    std::size_t n = 1 + rng_() % kBlockSize;
    Bytes clear = random_bytes(rng_, n);
    std::uint64_t index = rng_() % 1000;
    Bytes block = cryptor_->encrypt_block(file_key_, file_id_, index, clear);
    EXPECT_EQ(block.size(), n + cryptor_->block_overhead());
    EXPECT_EQ(cryptor_->decrypt_block(file_key_, file_id_, index, block), clear);
  }
}

TEST_P(BlockModeTest, OverheadConstantAcrossSizes) {
  std::size_t expected = GetParam() == ModeId::kV1 ? 28 : 560;
  EXPECT_EQ(cryptor_->block_overhead(), expected);
  for (std::size_t n : {1, 2, 100, 32767, 32768}) {
    EXPECT_EQ(cryptor_->encrypt_block(file_key_, file_id_, 0, Bytes(n, 0)).size(), n + expected);
  }
}

TEST_P(BlockModeTest, BlockBoundToFileIdAndIndex) {
  Bytes block = cryptor_->encrypt_block(file_key_, file_id_, 3, Bytes(500, 1));
  EXPECT_SV_ERROR(ErrorCode::kAuthenticationFailure,
                  cryptor_->decrypt_block(file_key_, file_id_, 4, block));
  Id16 other = file_id_;
  other[0] ^= 1;
  EXPECT_SV_ERROR(ErrorCode::kAuthenticationFailure,
                  cryptor_->decrypt_block(file_key_, other, 3, block));
}

TEST_P(BlockModeTest, BitFlipsDetected) {
  Bytes block = cryptor_->encrypt_block(file_key_, file_id_, 0, random_bytes(rng_, 1000));
  for (int i = 0; i < 100; ++i) {
    Bytes t = block;
    std::size_t bit = rng_() % (t.size() * 8);
    t[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_THROW(cryptor_->decrypt_block(file_key_, file_id_, 0, t), Error);
  }
}

TEST_P(BlockModeTest, SizeLimits) {
  EXPECT_SV_ERROR(ErrorCode::kEmptyBlock, cryptor_->encrypt_block(file_key_, file_id_, 0, {}));
  EXPECT_SV_ERROR(ErrorCode::kBlockTooLarge,
                  cryptor_->encrypt_block(file_key_, file_id_, 0, Bytes(kBlockSize + 1, 0)));
  EXPECT_SV_ERROR(ErrorCode::kMalformedBlock,
                  cryptor_->decrypt_block(file_key_, file_id_, 0,
                                          Bytes(cryptor_->block_overhead(), 0)));
}

TEST_P(BlockModeTest, FileKeyProtection) {
  Bytes label = {1, 2, 3};
  Bytes protected_key = cryptor_->protect_file_key(file_key_, label);
  EXPECT_EQ(protected_key.size(), cryptor_->protected_key_size());
  EXPECT_EQ(protected_key.size(), GetParam() == ModeId::kV1 ? 60u : 592u);
  EXPECT_EQ(cryptor_->unprotect_file_key(protected_key, label), file_key_);
  EXPECT_SV_ERROR(ErrorCode::kAuthenticationFailure,
                  cryptor_->unprotect_file_key(protected_key, Bytes{1, 2, 4}));
}

INSTANTIATE_TEST_SUITE_P(Modes, BlockModeTest, ::testing::Values(ModeId::kV1, ModeId::kSealed),
                         [](const auto& info) { return std::string(mode_name(info.param)); });

TEST(Block, FullBlockSizes) {
  std::mt19937_64 rng(41);
  auto session = init_enclave(tee::create_platform(random_array<32>(rng)), as_bytes("e"),
                              as_bytes("s"));
  Id16 file_id{};
  Bytes clear(kBlockSize, 0x5a);
  EXPECT_EQ(encrypt_block(*session, file_id, 0, clear).size(), 33328u);
  EXPECT_EQ(encrypt_block(Key256(random_array<32>(rng)), file_id, 0, clear).size(), 32796u);
}

TEST(Block, AadLayout) {
  Id16 id;
  for (int i = 0; i < 16; ++i) id[i] = static_cast<std::uint8_t>(i);
  EXPECT_EQ(to_hex(block_aad(id, 0x0102030405060708ull)),
            "000102030405060708090a0b0c0d0e0f0102030405060708");
}

TEST(Block, SealedBlockAfterDestroy) {
  std::mt19937_64 rng(42);
  auto session = init_enclave(tee::create_platform(random_array<32>(rng)), as_bytes("e"),
                              as_bytes("s"));
  session->destroy();
  EXPECT_SV_ERROR(ErrorCode::kSessionDestroyed, encrypt_block(*session, Id16{}, 0, Bytes(5, 0)));
}

TEST(ModeRegistry, Names) {
  EXPECT_EQ(parse_mode("v1"), ModeId::kV1);
  EXPECT_EQ(parse_mode("sealed"), ModeId::kSealed);
  EXPECT_FALSE(parse_mode("sgx"));
  EXPECT_EQ(mode_name(ModeId::kSealed), "sealed");
}

}  // namespace
}  // namespace sealvault::modes
