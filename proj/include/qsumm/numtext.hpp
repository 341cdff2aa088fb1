#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "qsumm/errors.hpp"

namespace qsumm {

/// Shortest round-trip decimal representation, locale-independent.
inline std::string double_to_text(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

/// Fixed-precision decimal, locale-independent.
inline std::string double_to_fixed(double value, int precision) {
    char buf[64];
    auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed,
                      precision);
    return std::string(buf, ptr);
}

/// Strict double parser; the whole field must be numeric.
inline double parse_double_field(std::string_view field,
                                 std::string_view context) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw FormatError(std::string(context) + ": non-numeric value '" +
                          std::string(field) + "'");
    }
    return value;
}

} // namespace qsumm
