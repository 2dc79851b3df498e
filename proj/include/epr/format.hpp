#pragma once

#include <string>

#include <fmt/format.h>

namespace epr {

/// Numeric field for CSV output: 9 significant digits, no negative zero.
inline std::string fmt9(double v) {
    if (v == 0.0) v = 0.0;
    return fmt::format("{:.9g}", v);
}

}  // namespace epr
