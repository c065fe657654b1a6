#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace forge::util {

// Thrown for malformed inputs (bad files, bad records, bad arguments).
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

// Position of the last case-insensitive occurrence of needle, or npos.
std::size_t rfind_ci(std::string_view haystack, std::string_view needle);

std::vector<std::string> split_words(std::string_view s);

// Replaces every standalone-number occurrence of `number` (delimited by
// non-digit, non-dot characters) with `replacement`.
std::string replace_number_token(std::string_view text, std::string_view number,
                                 std::string_view replacement);

// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(std::string_view data);

std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, std::string_view content);

std::vector<std::string> read_lines(const std::string& path);

}  // namespace forge::util
