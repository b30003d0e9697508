// format.hpp — locale-independent number formatting for CSV/JSON artifacts.

#pragma once

#include <charconv>
#include <string>

namespace ogp {

// 17 significant digits, enough to round-trip an IEEE double
inline std::string format_sig17(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace ogp
