#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vst {

struct Color {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  double a = 1.0;  // [0, 1], quantized

  friend bool operator==(const Color&, const Color&) = default;
  friend auto operator<=>(const Color&, const Color&) = default;
};

// A paint is either a color or `none`.
using Paint = std::optional<Color>;

// Accepts #RGB, #RRGGBB, #RRGGBBAA (also #RGBA), rgb()/rgba() in comma or
// space syntax with numbers or percentages, CSS named colors, `transparent`
// and `none` (which yields std::nullopt). Throws Error(UnknownColor).
Paint normalize_color(std::string_view literal);

// `#rrggbb` when opaque, otherwise `rgba(r,g,b,a)`. Parsing the result with
// normalize_color returns the same Color.
std::string format_color(const Color& color);
std::string format_paint(const Paint& paint);

std::optional<Color> named_color(std::string_view name);

}  // namespace vst
