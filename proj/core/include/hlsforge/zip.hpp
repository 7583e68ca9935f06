#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hlsforge {

struct ZipEntry {
  std::string name;  ///< forward-slash relative path
  std::string data;
};

/// Stored (uncompressed) zip with every timestamp set to the DOS epoch
/// (1980-01-01 00:00), so identical entries produce identical bytes.
std::string build_zip(const std::vector<ZipEntry>& entries);

struct ZipMember {
  std::string name;
  std::uint32_t crc32 = 0;
  std::uint32_t size = 0;
};

/// Central-directory listing of a zip produced by build_zip. Throws
/// MalformedReport on anything it cannot read.
std::vector<ZipMember> list_zip(const std::string& bytes);

std::uint32_t crc32_of(const std::string& data);

}  // namespace hlsforge
