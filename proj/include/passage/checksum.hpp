// FNV-1a 64-bit checksums for run manifests.
#ifndef PASSAGE_CHECKSUM_HPP
#define PASSAGE_CHECKSUM_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace passage {

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const char c : bytes) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace passage

#endif  // PASSAGE_CHECKSUM_HPP
