#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace surface::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

bool is_identifier(std::string_view s);

// Case-insensitive search for `pattern` in `haystack`. Where the pattern
// starts or ends with a word character, the neighbouring haystack character
// must not be one.
bool contains_token(std::string_view haystack, std::string_view pattern);

bool parse_bool(std::string_view s, std::string_view what);
std::uint64_t parse_u64(std::string_view s, std::string_view what);
std::int64_t parse_i64(std::string_view s, std::string_view what);
double parse_double(std::string_view s, std::string_view what);

// Shortest decimal representation that round-trips.
std::string format_double(double v);

}  // namespace surface::text
