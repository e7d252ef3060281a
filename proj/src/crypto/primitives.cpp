#include "sealvault/crypto/primitives.hpp"

#include <array>
#include <memory>
#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>

#include "sealvault/common/error.hpp"

namespace sealvault::crypto {
namespace {

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};
struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
struct MacDeleter {
  void operator()(EVP_MAC* m) const { EVP_MAC_free(m); }
};
struct MacCtxDeleter {
  void operator()(EVP_MAC_CTX* c) const { EVP_MAC_CTX_free(c); }
};
struct CipherDeleter {
  void operator()(EVP_CIPHER* c) const { EVP_CIPHER_free(c); }
};

using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

[[noreturn]] void fail(const char* what) {
  throw Error(ErrorCode::kInvalidArgument, std::string("libcrypto: ") + what);
}

const EVP_CIPHER* gcm_cipher(std::size_t key_size) {
  switch (key_size) {
    case 16: return EVP_aes_128_gcm();
    case 32: return EVP_aes_256_gcm();
    default: fail("unsupported AES-GCM key size");
  }
}

const EVP_CIPHER* siv_cipher() {
  static const std::unique_ptr<EVP_CIPHER, CipherDeleter> cipher(
      EVP_CIPHER_fetch(nullptr, "AES-128-SIV", nullptr));
  if (!cipher) fail("AES-128-SIV unavailable");
  return cipher.get();
}

int as_int(std::size_t n) {
  if (n > static_cast<std::size_t>(INT32_MAX)) fail("buffer too large");
  return static_cast<int>(n);
}

}  // namespace

void random_bytes(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), as_int(out.size())) != 1) fail("RAND_bytes");
}

Digest256 sha256(ByteView data) {
  Sha256 h;
  h.update(data);
  return h.finish();
}

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
  if (!ctx_ || EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_));
    fail("sha256 init");
  }
}

Sha256::~Sha256() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Sha256::update(ByteView data) {
  if (EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size()) != 1) {
    fail("sha256 update");
  }
}

Digest256 Sha256::finish() {
  Digest256 out;
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), out.data(), &len) != 1 || len != 32) {
    fail("sha256 final");
  }
  return out;
}

Digest256 hmac_sha256(ByteView key, ByteView message) {
  Digest256 out;
  unsigned int len = 0;
  if (!HMAC(EVP_sha256(), key.data(), as_int(key.size()), message.data(), message.size(),
            out.data(), &len) ||
      len != out.size()) {
    fail("hmac");
  }
  return out;
}

ByteArray<16> aes_cmac(ByteView key, ByteView message) {
  static const std::unique_ptr<EVP_MAC, MacDeleter> mac(EVP_MAC_fetch(nullptr, "CMAC", nullptr));
  if (!mac) fail("CMAC unavailable");
  const char* cipher_name = nullptr;
  switch (key.size()) {
    case 16: cipher_name = "AES-128-CBC"; break;
    case 32: cipher_name = "AES-256-CBC"; break;
    default: fail("unsupported CMAC key size");
  }
  std::unique_ptr<EVP_MAC_CTX, MacCtxDeleter> ctx(EVP_MAC_CTX_new(mac.get()));
  if (!ctx) fail("cmac ctx");
  OSSL_PARAM params[] = {
      OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_CIPHER, const_cast<char*>(cipher_name), 0),
      OSSL_PARAM_construct_end()};
  ByteArray<16> out;
  std::size_t len = 0;
  if (EVP_MAC_init(ctx.get(), key.data(), key.size(), params) != 1 ||
      EVP_MAC_update(ctx.get(), message.data(), message.size()) != 1 ||
      EVP_MAC_final(ctx.get(), out.data(), &len, out.size()) != 1 || len != out.size()) {
    fail("cmac");
  }
  return out;
}

Bytes pbkdf2_hmac_sha256(std::string_view password, ByteView salt, std::uint32_t iterations,
                         std::size_t out_len) {
  if (iterations == 0) fail("pbkdf2 iterations must be >= 1");
  Bytes out(out_len);
  if (PKCS5_PBKDF2_HMAC(password.data(), as_int(password.size()), salt.data(),
                        as_int(salt.size()), static_cast<int>(iterations), EVP_sha256(),
                        as_int(out_len), out.data()) != 1) {
    fail("pbkdf2");
  }
  return out;
}

void gcm_encrypt(ByteView key, ByteView iv, ByteView aad, ByteView plaintext,
                 std::span<std::uint8_t> ciphertext, std::span<std::uint8_t, kGcmTagSize> tag) {
  if (iv.size() != kGcmIvSize || ciphertext.size() != plaintext.size()) fail("gcm sizes");
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  if (!ctx || EVP_EncryptInit_ex(ctx.get(), gcm_cipher(key.size()), nullptr, key.data(),
                                 iv.data()) != 1) {
    fail("gcm init");
  }
  if (!aad.empty() &&
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), as_int(aad.size())) != 1) {
    fail("gcm aad");
  }
  if (!plaintext.empty() && EVP_EncryptUpdate(ctx.get(), ciphertext.data(), &len,
                                              plaintext.data(), as_int(plaintext.size())) != 1) {
    fail("gcm update");
  }
  if (EVP_EncryptFinal_ex(ctx.get(), ciphertext.data() + plaintext.size(), &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kGcmTagSize, tag.data()) != 1) {
    fail("gcm final");
  }
}

bool gcm_decrypt(ByteView key, ByteView iv, ByteView aad, ByteView ciphertext, ByteView tag,
                 std::span<std::uint8_t> plaintext) {
  if (iv.size() != kGcmIvSize || tag.size() != kGcmTagSize ||
      plaintext.size() != ciphertext.size()) {
    fail("gcm sizes");
  }
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  if (!ctx || EVP_DecryptInit_ex(ctx.get(), gcm_cipher(key.size()), nullptr, key.data(),
                                 iv.data()) != 1) {
    fail("gcm init");
  }
  if (!aad.empty() &&
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), as_int(aad.size())) != 1) {
    fail("gcm aad");
  }
  if (!ciphertext.empty() && EVP_DecryptUpdate(ctx.get(), plaintext.data(), &len,
                                               ciphertext.data(), as_int(ciphertext.size())) != 1) {
    fail("gcm update");
  }
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kGcmTagSize,
                          const_cast<std::uint8_t*>(tag.data())) != 1) {
    fail("gcm tag");
  }
  if (EVP_DecryptFinal_ex(ctx.get(), plaintext.data() + ciphertext.size(), &len) != 1) {
    secure_wipe(plaintext.data(), plaintext.size());
    return false;
  }
  return true;
}

Bytes siv_encrypt(ByteView key, ByteView aad, ByteView plaintext) {
  if (key.size() != 32) fail("siv key must be 32 bytes");
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  Bytes out(kSivTagSize + plaintext.size());
  int len = 0;
  if (!ctx || EVP_EncryptInit_ex2(ctx.get(), siv_cipher(), key.data(), nullptr, nullptr) != 1 ||
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), as_int(aad.size())) != 1 ||
      EVP_EncryptUpdate(ctx.get(), out.data() + kSivTagSize, &len, plaintext.data(),
                        as_int(plaintext.size())) != 1 ||
      EVP_EncryptFinal_ex(ctx.get(), out.data() + out.size(), &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_GET_TAG, kSivTagSize, out.data()) != 1) {
    fail("siv encrypt");
  }
  return out;
}

std::optional<Bytes> siv_decrypt(ByteView key, ByteView aad, ByteView tag_and_ciphertext) {
  if (key.size() != 32) fail("siv key must be 32 bytes");
  if (tag_and_ciphertext.size() < kSivTagSize) return std::nullopt;
  ByteView tag = tag_and_ciphertext.first(kSivTagSize);
  ByteView ct = tag_and_ciphertext.subspan(kSivTagSize);
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  Bytes out(ct.size());
  int len = 0;
  if (!ctx || EVP_DecryptInit_ex2(ctx.get(), siv_cipher(), key.data(), nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, kSivTagSize,
                          const_cast<std::uint8_t*>(tag.data())) != 1 ||
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), as_int(aad.size())) != 1) {
    fail("siv decrypt init");
  }
  // With SIV the tag check happens in the ciphertext update call.
  if (EVP_DecryptUpdate(ctx.get(), out.data(), &len, ct.data(), as_int(ct.size())) != 1 ||
      EVP_DecryptFinal_ex(ctx.get(), out.data() + out.size(), &len) != 1) {
    secure_wipe(out.data(), out.size());
    return std::nullopt;
  }
  return out;
}

namespace {
constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

int b64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '-') return 62;
  if (c == '_') return 63;
  return -1;
}
}  // namespace

std::string base64url_encode(ByteView data) {
  std::string out;
  out.reserve((data.size() * 4 + 2) / 3);
  std::size_t i = 0;
  for (; i + 3 <= data.size(); i += 3) {
    std::uint32_t v = data[i] << 16 | data[i + 1] << 8 | data[i + 2];
    out.push_back(kB64Alphabet[v >> 18 & 63]);
    out.push_back(kB64Alphabet[v >> 12 & 63]);
    out.push_back(kB64Alphabet[v >> 6 & 63]);
    out.push_back(kB64Alphabet[v & 63]);
  }
  std::size_t rest = data.size() - i;
  if (rest == 1) {
    std::uint32_t v = data[i] << 16;
    out.push_back(kB64Alphabet[v >> 18 & 63]);
    out.push_back(kB64Alphabet[v >> 12 & 63]);
  } else if (rest == 2) {
    std::uint32_t v = data[i] << 16 | data[i + 1] << 8;
    out.push_back(kB64Alphabet[v >> 18 & 63]);
    out.push_back(kB64Alphabet[v >> 12 & 63]);
    out.push_back(kB64Alphabet[v >> 6 & 63]);
  }
  return out;
}

std::optional<Bytes> base64url_decode(std::string_view text) {
  if (text.size() % 4 == 1) return std::nullopt;
  Bytes out;
  out.reserve(text.size() * 3 / 4);
  std::uint32_t acc = 0;
  int bits = 0;
  for (char c : text) {
    int v = b64_value(c);
    if (v < 0) return std::nullopt;
    acc = acc << 6 | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>(acc >> bits));
      acc &= (1u << bits) - 1;
    }
  }
  // Non-canonical encodings (nonzero leftover bits) are rejected so that the
  // text form stays unique.
  if (acc != 0) return std::nullopt;
  return out;
}

}  // namespace sealvault::crypto
