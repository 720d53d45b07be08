#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace stamp {

using Json = nlohmann::json;

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename, so readers never see a partial file.
void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_file_text(const std::filesystem::path& path, const std::string& text);

/// Parses JSON text; syntax errors become ParseError carrying line/column/offset.
Json parse_json(const std::string& text, const std::string& origin);
Json read_json_file(const std::filesystem::path& path);

/// Stable serialization: sorted keys, two-space indent, trailing newline.
std::string dump_json(const Json& value);
void write_json_file(const std::filesystem::path& path, const Json& value);

/// Lowercase hex SHA-256 of a byte buffer or a file's contents.
std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace stamp
