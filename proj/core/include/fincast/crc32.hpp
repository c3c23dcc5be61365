#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace fincast {

/// CRC-32 (IEEE 802.3, polynomial 0xEDB88320), as used by zip/png.
std::uint32_t crc32(const void* data, std::size_t len);
std::uint32_t crc32(std::string_view data);

/// Eight uppercase hex digits, zero padded.
std::string crc32_hex(std::string_view data);
std::string to_hex8(std::uint32_t value);

}  // namespace fincast
