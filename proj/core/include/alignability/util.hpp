#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace alignability {

// UTF-8 handling. Validation is strict (no overlong forms, no surrogates);
// split_codepoints assumes valid input.
bool valid_utf8(std::string_view s);
std::vector<std::string> split_codepoints(std::string_view s);

// Whitespace pre-tokenisation: split on ASCII space/tab/CR, drop empties.
std::vector<std::string> split_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

// Reads a whole file as lines. LF line endings; a final line without a
// trailing newline still counts. Throws io.* errors.
std::vector<std::string> read_lines(const std::string& path);

std::string read_file(const std::string& path);

// Writes atomically: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

// Shortest decimal that round-trips a double exactly (%.17g with trimming).
std::string format_double_exact(double v);
std::string format_fixed(double v, int decimals);

double parse_double(std::string_view s, bool& ok);
std::optional<long long> parse_int(std::string_view s);

uint64_t fnv1a64(std::string_view data, uint64_t seed = 1469598103934665603ULL);

// U+2581 used as the visible-space escape in serialised token files.
inline constexpr std::string_view kSpaceEscape = "\xe2\x96\x81";

std::string escape_token(std::string_view token);
std::string unescape_token(std::string_view token);
bool contains_space_escape(std::string_view s);

}  // namespace alignability
