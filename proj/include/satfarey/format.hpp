#pragma once

#include <cstdio>
#include <string>

namespace satfarey {

/// Shortest "%.12g" rendering; the output format for every real number.
inline std::string fmt12(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

/// v rounded to 12 significant digits.
inline double round12(double v) { return std::stod(fmt12(v)); }

}  // namespace satfarey
