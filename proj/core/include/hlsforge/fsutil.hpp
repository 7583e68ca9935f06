#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hlsforge {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path);

/// Writes `contents` verbatim (binary mode, no newline translation).
void write_text_file(const fs::path& path, std::string_view contents);

/// Regular files under `root`, as sorted generic relative paths.
std::vector<std::string> list_files_recursive(const fs::path& root);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

bool is_identifier(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace hlsforge
