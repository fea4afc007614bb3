#include "experiment/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "core/error.hpp"

namespace tabguard {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) raise_internal("format_double: to_chars failed");
  return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int precision) {
  if (std::isnan(v)) return "n/a";
  char buf[64];
  int n = std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  if (n < 0 || n >= static_cast<int>(sizeof(buf))) {
    raise_internal("format_fixed: snprintf failed");
  }
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string format_metric(double v) {
  if (std::isnan(v)) return "n/a";
  return format_double(v);
}

double parse_double_strict(const std::string& text, const std::string& what) {
  if (text == "n/a") return std::nan("");
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || text.empty()) {
    raise_config(what + ": expected a number, got \"" + text + "\"");
  }
  return v;
}

std::uint64_t parse_uint_strict(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || text.empty()) {
    raise_config(what + ": expected a non-negative integer, got \"" + text + "\"");
  }
  return v;
}

}  // namespace tabguard
