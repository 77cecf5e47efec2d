#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fairaug::io {

std::string read_text(const std::filesystem::path& path);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

// Writes to a sibling temp file and renames over the target, so readers
// never observe a partially written file. Throws IoError.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256(std::string_view bytes);

// Generic-form path of target relative to base, or the absolute target when
// no relative form exists.
std::string relative_path(const std::filesystem::path& target, const std::filesystem::path& base);

}  // namespace fairaug::io
