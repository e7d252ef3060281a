#pragma once

// Reference implementations used only as test oracles. Written from the
// FIPS 180-4 / RFC 2104 / RFC 8018 descriptions; they share no code with the
// production crypto path.

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace oracle {

using Bytes = std::vector<std::uint8_t>;

std::array<std::uint8_t, 32> sha256(const Bytes& data);
std::array<std::uint8_t, 32> hmac_sha256(const Bytes& key, const Bytes& message);
Bytes pbkdf2_hmac_sha256(const Bytes& password, const Bytes& salt, std::uint32_t iterations,
                         std::size_t out_len);

inline Bytes bytes_of(std::string_view s) { return Bytes(s.begin(), s.end()); }

}  // namespace oracle
