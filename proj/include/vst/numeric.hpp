#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace vst {

// Every number the model stores is rounded to this many decimal places so
// that printing and re-reading it is exact.
inline constexpr int kDecimalPlaces = 6;

double quantize(double value);

// Fixed notation, at most kDecimalPlaces decimals, trailing zeros trimmed,
// never "-0".
std::string format_number(double value);

// Reads one SVG number (optional sign, digits, fraction, exponent) at the
// front of `text`, skipping leading whitespace and commas. On success,
// advances `text` past it.
std::optional<double> consume_number(std::string_view& text);

// Whole-string number; surrounding whitespace allowed.
std::optional<double> parse_number(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace vst
