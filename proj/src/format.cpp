#include "qsle/format.hpp"

#include <cmath>
#include <cstdio>

namespace qsle {

namespace {

struct Prefix {
    double scale;
    const char* name;
};

constexpr Prefix kPrefixes[] = {
    {1.0, "s"},    {1e-3, "ms"}, {1e-6, "us"}, {1e-9, "ns"},
    {1e-12, "ps"}, {1e-15, "fs"}, {1e-18, "as"},
};

} // namespace

std::string format_si_time(double seconds) {
    if (seconds == 0.0) return "0 s";
    const double mag = std::abs(seconds);
    std::size_t k = 0;
    constexpr std::size_t last = sizeof(kPrefixes) / sizeof(kPrefixes[0]) - 1;
    while (k < last && mag < kPrefixes[k].scale) ++k;
    double mantissa = seconds / kPrefixes[k].scale;
    // %.3g can round a mantissa in [999.5, 1000) up to 1e+03; step the prefix instead.
    if (k > 0 && std::abs(mantissa) >= 999.5) {
        --k;
        mantissa = seconds / kPrefixes[k].scale;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g %s", mantissa, kPrefixes[k].name);
    return buf;
}

std::string format_sig12(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.11e", value);
    return buf;
}

} // namespace qsle
