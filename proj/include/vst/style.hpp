#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "vst/color.hpp"

namespace vst {

// The transferable style attributes. Declaration order is the canonical
// order used when listing attributes per element.
enum class AttributeName {
  Fill,
  Stroke,
  StrokeWidth,
  TextBackgroundColor,
  LineHeight,
  TextAlign,
  Text,
  FontSize,
  FontFamily,
  FontStyle,
  FontWeight,
  Opacity,
  Padding,
};

inline constexpr std::array<AttributeName, 13> kAllAttributes = {
    AttributeName::Fill,       AttributeName::Stroke,     AttributeName::StrokeWidth,
    AttributeName::TextBackgroundColor, AttributeName::LineHeight, AttributeName::TextAlign,
    AttributeName::Text,       AttributeName::FontSize,   AttributeName::FontFamily,
    AttributeName::FontStyle,  AttributeName::FontWeight, AttributeName::Opacity,
    AttributeName::Padding,
};

std::string_view attribute_name(AttributeName name);
std::optional<AttributeName> parse_attribute_name(std::string_view text);
bool is_text_only(AttributeName name);

enum class TextAlign { Left, Center, Right, Justify };
enum class FontStyle { Normal, Italic, Oblique };

// CSS numeric weight; "normal" is 400 and "bold" is 700.
struct FontWeight {
  int value = 400;
  friend bool operator==(const FontWeight&, const FontWeight&) = default;
  friend auto operator<=>(const FontWeight&, const FontWeight&) = default;
};

struct TextStyle {
  Paint background;  // textBackgroundColor
  double line_height = 1.2;
  std::optional<TextAlign> align;
  std::optional<std::string> content;
  double font_size = 16.0;
  std::optional<std::string> font_family;
  std::optional<FontStyle> font_style;
  std::optional<FontWeight> font_weight;
  double padding = 0.0;

  friend bool operator==(const TextStyle&, const TextStyle&) = default;
};

struct StyleAttributes {
  Paint fill = Color{0, 0, 0, 1.0};
  Paint stroke;
  double stroke_width = 1.0;
  double opacity = 1.0;
  // Present exactly on text elements.
  std::optional<TextStyle> text;

  friend bool operator==(const StyleAttributes&, const StyleAttributes&) = default;
};

// Typed value of one attribute. Paint covers fill/stroke/background; double
// covers the numeric attributes; std::string covers text and fontFamily.
using AttributeValue = std::variant<Paint, double, std::string, TextAlign, FontStyle, FontWeight>;

// Value of `name` on `style`, or nullopt when the attribute is absent or not
// applicable to the element.
std::optional<AttributeValue> get_attribute(const StyleAttributes& style, AttributeName name);

// Throws Error(InapplicableAttribute) for text-only attributes on non-text
// styles and Error(InvalidValue) when the value has the wrong type or range.
void set_attribute(StyleAttributes& style, AttributeName name, const AttributeValue& value);

bool is_applicable(const StyleAttributes& style, AttributeName name);

// Canonical text of a value, as written into SVG and session files.
std::string format_attribute_value(const AttributeValue& value);

// Parses the canonical text form for the given attribute.
// Throws Error(InvalidValue).
AttributeValue parse_attribute_value(AttributeName name, std::string_view text);

// Collapses whitespace runs inside each line, trims lines and drops empty
// ones. Lines are joined with '\n'.
std::string normalize_text_content(std::string_view text);

std::string_view text_align_name(TextAlign align);
std::string_view font_style_name(FontStyle style);
std::optional<FontWeight> parse_font_weight(std::string_view text);
std::string format_font_weight(FontWeight weight);

}  // namespace vst
