#pragma once

#include <cstdio>
#include <string>

namespace cellforce {

/// Shortest round-trippable rendering used for every numeric output (17 significant digits).
inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace cellforce
