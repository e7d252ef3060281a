#include "sealvault/modes/filename.hpp"

#include "sealvault/common/error.hpp"
#include "sealvault/crypto/primitives.hpp"

namespace sealvault::modes {
namespace {

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = cp << 6 | (cc & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return false;
    }
    i += len;
  }
  return true;
}

}  // namespace

void validate_name(std::string_view name) {
  if (name.size() > kMaxNameBytes) {
    throw Error(ErrorCode::kNameTooLong, std::to_string(name.size()) + " bytes");
  }
  if (name.empty() || name == "." || name == "..") throw Error(ErrorCode::kInvalidName);
  if (name.find('/') != std::string_view::npos || name.find('\0') != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidName, "name contains a separator or NUL");
  }
  if (!valid_utf8(name)) throw Error(ErrorCode::kInvalidName, "name is not valid UTF-8");
}

std::string encrypt_filename(const Key256& name_key, const Id16& dir_id, std::string_view name) {
  validate_name(name);
  Bytes sealed = crypto::siv_encrypt(name_key.view(), dir_id, as_bytes(name));
  std::string out = crypto::base64url_encode(sealed);
  out += kEncryptedNameSuffix;
  return out;
}

std::string decrypt_filename(const Key256& name_key, const Id16& dir_id, std::string_view encoded) {
  if (!encoded.ends_with(kEncryptedNameSuffix)) {
    throw Error(ErrorCode::kMalformedName, "missing .sc suffix");
  }
  auto raw = crypto::base64url_decode(encoded.substr(0, encoded.size() - kEncryptedNameSuffix.size()));
  if (!raw || raw->size() <= crypto::kSivTagSize) {
    throw Error(ErrorCode::kMalformedName, "bad base64 body");
  }
  auto plain = crypto::siv_decrypt(name_key.view(), dir_id, *raw);
  if (!plain) throw Error(ErrorCode::kAuthenticationFailure, "file name failed authentication");
  return std::string(as_chars(*plain));
}

}  // namespace sealvault::modes
