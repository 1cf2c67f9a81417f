#ifndef NEARPOLY_HEXFLOAT_HPP
#define NEARPOLY_HEXFLOAT_HPP

#include "nearpoly/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>

namespace nearpoly {

/// Hexadecimal float literal, e.g. 0x1.8p+0. Round-trips every binary32 value.
inline std::string format_hex(float v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", static_cast<double>(v));
    return buf;
}

/// Shortest-safe decimal: 9 significant digits always round-trip binary32.
inline std::string format_decimal(float v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(v));
    return buf;
}

/// Scientific notation with 9 significant digits.
inline std::string format_sci(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

/// Parses a decimal or hexadecimal float literal straight to binary32 (one
/// rounding). Rejects trailing garbage and non-finite results.
inline float parse_float(std::string_view text)
{
    const std::string s(text);
    if (s.empty())
        throw parse_error("empty numeric literal");
    char* end = nullptr;
    const float v = std::strtof(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw parse_error("malformed numeric literal '" + s + "'");
    if (!std::isfinite(v))
        throw parse_error("numeric literal '" + s + "' is not a finite binary32 value");
    return v;
}

} // namespace nearpoly

#endif // NEARPOLY_HEXFLOAT_HPP
