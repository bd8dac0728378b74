#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace netbid {

// Shortest round-trip-exact decimal for a double, integers printed plain.
// One formatting path for every CSV writer keeps byte-identical output a
// property of the data, not of the call site.
inline std::string csv_num(double v) {
    char buf[40];
    if (v == static_cast<double>(static_cast<long long>(v)) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
        return buf;
    }
    for (int prec = 1; prec < 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace netbid
