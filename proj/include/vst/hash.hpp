#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace vst {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = kFnvOffsetBasis) {
  std::uint64_t h = seed;
  for (char ch : bytes) {
    h ^= static_cast<std::uint8_t>(ch);
    h *= kFnvPrime;
  }
  return h;
}

// Little-endian byte encoder for hashing structured tuples.
class HashEncoder {
 public:
  HashEncoder& u8(std::uint8_t v) {
    bytes_.push_back(static_cast<char>(v));
    return *this;
  }
  HashEncoder& u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }
  HashEncoder& u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }
  std::uint64_t digest() const { return fnv1a(bytes_); }

 private:
  std::string bytes_;
};

std::string hash_to_hex(std::uint64_t hash);
// Accepts exactly 16 hex digits.
bool hex_to_hash(std::string_view text, std::uint64_t& out);

}  // namespace vst
