#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace mts {

// shortest decimal representation that round-trips the double
inline std::string fmt_shortest(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

inline std::string fmt_fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
    return buf;
}

} // namespace mts
