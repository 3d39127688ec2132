#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace silmarils {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) {
  auto v = as_bytes(s);
  return {v.begin(), v.end()};
}

/// Lowercase hex, no prefix.
std::string to_hex(ByteView data);

/// Accepts upper or lower case and ignores surrounding whitespace. Throws
/// Error(InvalidHex) on odd length or a non-hex digit.
Bytes from_hex(std::string_view hex);

void append_be64(Bytes& out, std::uint64_t v);
void append_be32(Bytes& out, std::uint32_t v);
std::uint64_t read_be64(ByteView in);
std::uint32_t read_be32(ByteView in);

inline void append(Bytes& out, ByteView data) { out.insert(out.end(), data.begin(), data.end()); }

}  // namespace silmarils
