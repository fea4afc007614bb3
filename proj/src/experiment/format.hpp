#pragma once

#include <cstdint>
#include <string>

namespace tabguard {

// Shortest decimal form that parses back to the same bits.
std::string format_double(double v);

// Fixed-precision form for human tables; NaN renders as "n/a".
std::string format_fixed(double v, int precision);

// CSV cell for a metric value; NaN renders as "n/a".
std::string format_metric(double v);

double parse_double_strict(const std::string& text, const std::string& what);
std::uint64_t parse_uint_strict(const std::string& text, const std::string& what);

}  // namespace tabguard
