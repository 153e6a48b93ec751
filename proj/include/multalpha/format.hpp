#pragma once
// Locale-independent number formatting.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <system_error>

#include "multalpha/error.hpp"

namespace multalpha {

// Fixed notation with `decimals` digits; negative zero prints as zero.
inline std::string format_fixed(double x, int decimals) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, decimals);
    if (ec != std::errc{}) throw NumericalError("format_fixed: value out of range");
    std::string s(buf, end);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

// Shortest representation that parses back to the same double.
inline std::string format_shortest(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw NumericalError("format_shortest: value out of range");
    return {buf, end};
}

// Twelve significant digits, for labels: hides the last-bit noise of pow and
// log and keeps small levels such as 0.0005 out of exponent notation.
inline std::string format_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ContractError("not a number: '" + s + "'");
    return v;
}

}  // namespace multalpha
