#include "sealvault/vault/layout.hpp"

namespace sealvault::vault {

std::optional<std::uint64_t> cleartext_size(std::uint64_t ct, std::size_t overhead) {
  if (ct < kFileHeaderSize) return std::nullopt;
  std::uint64_t body = ct - kFileHeaderSize;
  if (body == 0) return 0;
  const std::uint64_t stride = modes::kBlockSize + overhead;
  std::uint64_t blocks = (body + stride - 1) / stride;
  if (body <= blocks * overhead) return std::nullopt;
  std::uint64_t pt = body - blocks * overhead;
  // The last block must hold between 1 and kBlockSize bytes.
  if (block_count(pt) != blocks) return std::nullopt;
  return pt;
}

}  // namespace sealvault::vault
