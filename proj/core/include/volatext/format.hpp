#pragma once

#include <optional>
#include <string>

namespace volatext {

/// Shortest decimal representation that parses back to the same double.
/// Output is locale-independent, so CSV/TSV files are bit-stable.
std::string format_double(double value);

/// Empty string for a missing value, format_double otherwise.
std::string format_optional(const std::optional<double>& value);

}  // namespace volatext
