#pragma once

#include <string>
#include <string_view>

namespace hlsforge {

/// Lowercase hex SHA-256 digest of `data` (64 characters).
std::string sha256_hex(std::string_view data);

}  // namespace hlsforge
