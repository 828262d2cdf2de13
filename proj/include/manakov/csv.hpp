#pragma once

#include <cstdio>
#include <string>

namespace manakov::csv {

/// Fixed round-trip formatting so repeated runs emit byte-identical files.
inline std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string num(int x) { return std::to_string(x); }
inline std::string num(long long x) { return std::to_string(x); }
inline std::string num(unsigned long long x) { return std::to_string(x); }

}  // namespace manakov::csv
