#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <system_error>

namespace cbmspares {

/// Shortest round-trip decimal form of x; identical on every platform.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, end);
}

/// "NA" for a missing value.
inline std::string format_optional(const std::optional<double>& x) { return x ? format_double(*x) : "NA"; }

}  // namespace cbmspares
