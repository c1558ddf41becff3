#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace packsurf {

/// Report artifacts (OBJ, JSON, distributions CSV) are pinned to 12
/// significant digits so that identical runs produce byte-identical files.
inline std::string format_g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

/// Rounds through the 12-digit text form; applied to numbers before JSON
/// serialisation so the serialiser cannot reintroduce longer digit strings.
inline double round_g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

/// Stage intermediates (metric/packing/eta/target CSVs) carry 17 significant
/// digits, which round-trips IEEE doubles exactly: a stage re-run from these
/// files reproduces the in-process pipeline bit for bit.
inline std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace packsurf
