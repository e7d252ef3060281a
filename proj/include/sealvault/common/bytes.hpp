#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sealvault {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

template <std::size_t N>
using ByteArray = std::array<std::uint8_t, N>;

using Id16 = ByteArray<16>;
using Digest256 = ByteArray<32>;

/// Fixed-size secret that wipes itself on destruction.
template <std::size_t N>
class SecretBytes {
 public:
  SecretBytes() { bytes_.fill(0); }
  explicit SecretBytes(const ByteArray<N>& raw) : bytes_(raw) {}
  explicit SecretBytes(ByteView raw);
  SecretBytes(const SecretBytes&) = default;
  SecretBytes& operator=(const SecretBytes&) = default;
  ~SecretBytes() { wipe(); }

  static constexpr std::size_t size() { return N; }
  std::uint8_t* data() { return bytes_.data(); }
  const std::uint8_t* data() const { return bytes_.data(); }
  ByteView view() const { return ByteView(bytes_.data(), N); }
  std::span<std::uint8_t, N> mutable_span() { return bytes_; }
  void wipe();

  friend bool operator==(const SecretBytes& a, const SecretBytes& b) {
    return a.bytes_ == b.bytes_;
  }

 private:
  ByteArray<N> bytes_;
};

using Key128 = SecretBytes<16>;
using Key256 = SecretBytes<32>;

void secure_wipe(void* p, std::size_t n);

template <std::size_t N>
SecretBytes<N>::SecretBytes(ByteView raw) {
  bytes_.fill(0);
  std::memcpy(bytes_.data(), raw.data(), raw.size() < N ? raw.size() : N);
}

template <std::size_t N>
void SecretBytes<N>::wipe() {
  secure_wipe(bytes_.data(), N);
}

inline ByteView as_bytes(std::string_view s) {
  return ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

inline std::string_view as_chars(ByteView b) {
  return std::string_view(reinterpret_cast<const char*>(b.data()), b.size());
}

template <std::size_t N>
ByteArray<N> to_array(ByteView b) {
  ByteArray<N> out{};
  std::memcpy(out.data(), b.data(), b.size() < N ? b.size() : N);
  return out;
}

std::string to_hex(ByteView b);
Bytes from_hex(std::string_view hex);

inline void append(Bytes& out, ByteView b) { out.insert(out.end(), b.begin(), b.end()); }
inline void append(Bytes& out, std::string_view s) { append(out, as_bytes(s)); }

void put_u16_le(Bytes& out, std::uint16_t v);
void put_u32_le(Bytes& out, std::uint32_t v);
void put_u64_le(Bytes& out, std::uint64_t v);
void put_u64_be(Bytes& out, std::uint64_t v);
std::uint16_t get_u16_le(ByteView b, std::size_t off);
std::uint32_t get_u32_le(ByteView b, std::size_t off);
std::uint64_t get_u64_le(ByteView b, std::size_t off);

/// True when `needle` occurs as a contiguous run anywhere in `haystack`.
bool contains_subsequence(ByteView haystack, ByteView needle);

}  // namespace sealvault
