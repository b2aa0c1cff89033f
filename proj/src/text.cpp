#include "surface/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "surface/error.hpp"

namespace surface::text {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin() + 1, s.end(), is_word_char);
}

bool contains_token(std::string_view haystack, std::string_view pattern) {
  if (pattern.empty()) return false;
  const std::string hay = to_lower(haystack);
  const std::string pat = to_lower(pattern);
  const bool check_front = is_word_char(pat.front());
  const bool check_back = is_word_char(pat.back());
  for (auto pos = hay.find(pat); pos != std::string::npos; pos = hay.find(pat, pos + 1)) {
    const auto end = pos + pat.size();
    if (check_front && pos > 0 && is_word_char(hay[pos - 1])) continue;
    if (check_back && end < hay.size() && is_word_char(hay[end])) continue;
    return true;
  }
  return false;
}

bool parse_bool(std::string_view s, std::string_view what) {
  const auto v = to_lower(trim(s));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no" || v.empty()) return false;
  throw ValidationError(fmt::format("{}: expected a boolean, found '{}'", what, s));
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  s = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError(fmt::format("{}: expected a non-negative integer, found '{}'", what, s));
  }
  return v;
}

std::int64_t parse_i64(std::string_view s, std::string_view what) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError(fmt::format("{}: expected an integer, found '{}'", what, s));
  }
  return v;
}

double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ValidationError(fmt::format("{}: expected a number, found '{}'", what, s));
  }
  return v;
}

std::string format_double(double v) {
  if (v == 0.0) return "0";
  return fmt::format("{}", v);
}

}  // namespace surface::text
