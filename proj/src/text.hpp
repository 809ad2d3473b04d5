#pragma once

// Small text helpers shared by the readers and writers.

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "homonym/error.hpp"

namespace homonym::text {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Shortest representation that round-trips.
inline std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

template <typename T>
T parse_or_throw(std::string_view s, const std::string& context) {
  T v{};
  if (!parse_number(s, v))
    throw DataError(context + ": cannot parse number '" + std::string(s) + "'");
  return v;
}

}  // namespace homonym::text
