#pragma once

#include <cstdint>
#include <optional>

#include "sealvault/modes/block.hpp"

namespace sealvault::vault {

/// file_id 16 ‖ protected file key (60 or 592) ‖ zero padding.
inline constexpr std::size_t kFileHeaderSize = 640;

inline constexpr std::uint64_t block_count(std::uint64_t cleartext_size) {
  return (cleartext_size + modes::kBlockSize - 1) / modes::kBlockSize;
}

/// 640 + overhead·⌈pt/32768⌉ + pt.
inline constexpr std::uint64_t ciphertext_size(std::uint64_t cleartext_size,
                                               std::size_t block_overhead) {
  return kFileHeaderSize + block_overhead * block_count(cleartext_size) + cleartext_size;
}

/// Inverse of ciphertext_size; nullopt when no cleartext size maps to `ct`.
std::optional<std::uint64_t> cleartext_size(std::uint64_t ciphertext_size,
                                            std::size_t block_overhead);

}  // namespace sealvault::vault
