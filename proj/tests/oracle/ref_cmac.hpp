#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace oracle {

/// RFC 4493 CMAC built on a single-block AES-ECB call (16- or 32-byte key).
std::array<std::uint8_t, 16> aes_cmac(const std::vector<std::uint8_t>& key,
                                      const std::vector<std::uint8_t>& message);

}  // namespace oracle
