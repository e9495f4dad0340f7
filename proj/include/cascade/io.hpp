#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace cascade::io {

/// Writes to `<path>.tmp` and renames over `path`, creating parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of a byte string / of a file's contents.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace cascade::io
