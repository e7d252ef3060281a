#include "ref_cmac.hpp"

#include <openssl/evp.h>
#include <stdexcept>

namespace oracle {
namespace {

using Block = std::array<std::uint8_t, 16>;

Block aes_block(const std::vector<std::uint8_t>& key, const Block& in) {
  const EVP_CIPHER* cipher = key.size() == 16 ? EVP_aes_128_ecb() : EVP_aes_256_ecb();
  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  Block out{};
  int len = 0;
  bool ok = EVP_EncryptInit_ex(ctx, cipher, nullptr, key.data(), nullptr) == 1 &&
            EVP_CIPHER_CTX_set_padding(ctx, 0) == 1 &&
            EVP_EncryptUpdate(ctx, out.data(), &len, in.data(), 16) == 1 && len == 16;
  EVP_CIPHER_CTX_free(ctx);
  if (!ok) throw std::runtime_error("aes block");
  return out;
}

Block double_block(const Block& b) {
  Block out{};
  for (int i = 0; i < 16; ++i) {
    out[i] = static_cast<std::uint8_t>(b[i] << 1);
    if (i + 1 < 16) out[i] |= b[i + 1] >> 7;
  }
  if (b[0] & 0x80) out[15] ^= 0x87;
  return out;
}

}  // namespace

std::array<std::uint8_t, 16> aes_cmac(const std::vector<std::uint8_t>& key,
                                      const std::vector<std::uint8_t>& message) {
  Block l = aes_block(key, Block{});
  Block k1 = double_block(l);
  Block k2 = double_block(k1);

  std::size_t n = (message.size() + 15) / 16;
  bool complete = n > 0 && message.size() % 16 == 0;
  if (n == 0) n = 1;

  Block x{};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (int j = 0; j < 16; ++j) x[j] ^= message[16 * i + j];
    x = aes_block(key, x);
  }
  Block last{};
  std::size_t off = 16 * (n - 1);
  if (complete) {
    for (int j = 0; j < 16; ++j) last[j] = message[off + j] ^ k1[j];
  } else {
    std::size_t rem = message.size() - off;
    for (std::size_t j = 0; j < rem; ++j) last[j] = message[off + j];
    last[rem] = 0x80;
    for (int j = 0; j < 16; ++j) last[j] ^= k2[j];
  }
  for (int j = 0; j < 16; ++j) x[j] ^= last[j];
  return aes_block(key, x);
}

}  // namespace oracle
