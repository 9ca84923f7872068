#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace windward::detail {

// CRC-32 (IEEE 802.3, reflected, poly 0xEDB88320), the variant used by
// zlib and PNG. Table built once at first use.
inline std::uint32_t crc32(std::string_view bytes) {
  static const std::array<std::uint32_t, 256> table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (unsigned char ch : bytes) crc = table[(crc ^ ch) & 0xFFu] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

}  // namespace windward::detail
