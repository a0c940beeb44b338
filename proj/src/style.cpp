#include "vst/style.hpp"

#include <algorithm>
#include <cmath>

#include "vst/error.hpp"
#include "vst/numeric.hpp"

namespace vst {

namespace {

constexpr std::array<std::string_view, 13> kNames = {
    "fill",     "stroke",     "strokeWidth", "textBackgroundColor", "lineHeight",
    "textAlign", "text",      "fontSize",    "fontFamily",          "fontStyle",
    "fontWeight", "opacity",  "padding",
};

[[noreturn]] void invalid(AttributeName name, std::string_view why) {
  throw Error(ErrorCode::InvalidValue,
              std::string(attribute_name(name)) + ": " + std::string(why));
}

template <typename T>
const T& expect(AttributeName name, const AttributeValue& value) {
  if (const T* v = std::get_if<T>(&value)) return *v;
  invalid(name, "value has the wrong type");
}

double expect_number(AttributeName name, const AttributeValue& value, double min, double max,
                     bool min_exclusive) {
  double v = expect<double>(name, value);
  if (!std::isfinite(v) || v < min || v > max || (min_exclusive && v <= min)) {
    invalid(name, "out of range");
  }
  return quantize(v);
}

}  // namespace

std::string_view attribute_name(AttributeName name) {
  return kNames[static_cast<size_t>(name)];
}

std::optional<AttributeName> parse_attribute_name(std::string_view text) {
  auto it = std::find(kNames.begin(), kNames.end(), text);
  if (it == kNames.end()) return std::nullopt;
  return static_cast<AttributeName>(it - kNames.begin());
}

bool is_text_only(AttributeName name) {
  switch (name) {
    case AttributeName::Fill:
    case AttributeName::Stroke:
    case AttributeName::StrokeWidth:
    case AttributeName::Opacity:
      return false;
    default:
      return true;
  }
}

bool is_applicable(const StyleAttributes& style, AttributeName name) {
  return !is_text_only(name) || style.text.has_value();
}

std::optional<AttributeValue> get_attribute(const StyleAttributes& style, AttributeName name) {
  if (!is_applicable(style, name)) return std::nullopt;
  auto opt = [](const auto& o) -> std::optional<AttributeValue> {
    if (!o) return std::nullopt;
    return AttributeValue{*o};
  };
  switch (name) {
    case AttributeName::Fill: return AttributeValue{style.fill};
    case AttributeName::Stroke: return AttributeValue{style.stroke};
    case AttributeName::StrokeWidth: return AttributeValue{style.stroke_width};
    case AttributeName::Opacity: return AttributeValue{style.opacity};
    default: break;
  }
  const TextStyle& t = *style.text;
  switch (name) {
    case AttributeName::TextBackgroundColor: return AttributeValue{t.background};
    case AttributeName::LineHeight: return AttributeValue{t.line_height};
    case AttributeName::TextAlign: return opt(t.align);
    case AttributeName::Text: return opt(t.content);
    case AttributeName::FontSize: return AttributeValue{t.font_size};
    case AttributeName::FontFamily: return opt(t.font_family);
    case AttributeName::FontStyle: return opt(t.font_style);
    case AttributeName::FontWeight: return opt(t.font_weight);
    case AttributeName::Padding: return AttributeValue{t.padding};
    default: return std::nullopt;
  }
}

void set_attribute(StyleAttributes& style, AttributeName name, const AttributeValue& value) {
  if (!is_applicable(style, name)) {
    throw Error(ErrorCode::InapplicableAttribute,
                std::string(attribute_name(name)) + " does not apply to non-text elements");
  }
  switch (name) {
    case AttributeName::Fill: style.fill = expect<Paint>(name, value); return;
    case AttributeName::Stroke: style.stroke = expect<Paint>(name, value); return;
    case AttributeName::StrokeWidth:
      style.stroke_width = expect_number(name, value, 0.0, 1e12, false);
      return;
    case AttributeName::Opacity:
      style.opacity = expect_number(name, value, 0.0, 1.0, false);
      return;
    default: break;
  }
  TextStyle& t = *style.text;
  switch (name) {
    case AttributeName::TextBackgroundColor: t.background = expect<Paint>(name, value); return;
    case AttributeName::LineHeight:
      t.line_height = expect_number(name, value, 0.0, 1e6, true);
      return;
    case AttributeName::TextAlign: t.align = expect<TextAlign>(name, value); return;
    case AttributeName::Text: {
      std::string s = normalize_text_content(expect<std::string>(name, value));
      t.content = s.empty() ? std::nullopt : std::optional<std::string>(std::move(s));
      return;
    }
    case AttributeName::FontSize:
      t.font_size = expect_number(name, value, 0.0, 1e6, true);
      return;
    case AttributeName::FontFamily: {
      const auto& s = expect<std::string>(name, value);
      if (trim(s).empty()) invalid(name, "empty font family");
      t.font_family = std::string(trim(s));
      return;
    }
    case AttributeName::FontStyle: t.font_style = expect<FontStyle>(name, value); return;
    case AttributeName::FontWeight: {
      FontWeight w = expect<FontWeight>(name, value);
      if (w.value < 100 || w.value > 900) invalid(name, "weight outside 100..900");
      t.font_weight = w;
      return;
    }
    case AttributeName::Padding:
      t.padding = expect_number(name, value, 0.0, 1e12, false);
      return;
    default: return;
  }
}

std::string normalize_text_content(std::string_view text) {
  std::string out;
  std::string line;
  auto flush = [&]() {
    while (!line.empty() && line.back() == ' ') line.pop_back();
    if (!line.empty()) {
      if (!out.empty()) out.push_back('\n');
      out += line;
    }
    line.clear();
  };
  for (char ch : text) {
    if (ch == '\n') {
      flush();
    } else if (ch == ' ' || ch == '\t' || ch == '\r') {
      if (!line.empty() && line.back() != ' ') line.push_back(' ');
    } else {
      line.push_back(ch);
    }
  }
  flush();
  return out;
}

std::string_view text_align_name(TextAlign align) {
  switch (align) {
    case TextAlign::Left: return "left";
    case TextAlign::Center: return "center";
    case TextAlign::Right: return "right";
    case TextAlign::Justify: return "justify";
  }
  return "left";
}

std::string_view font_style_name(FontStyle style) {
  switch (style) {
    case FontStyle::Normal: return "normal";
    case FontStyle::Italic: return "italic";
    case FontStyle::Oblique: return "oblique";
  }
  return "normal";
}

std::optional<FontWeight> parse_font_weight(std::string_view text) {
  text = trim(text);
  if (text == "normal") return FontWeight{400};
  if (text == "bold") return FontWeight{700};
  auto v = parse_number(text);
  if (!v || *v != std::floor(*v) || *v < 100 || *v > 900) return std::nullopt;
  return FontWeight{static_cast<int>(*v)};
}

std::string format_font_weight(FontWeight weight) {
  if (weight.value == 400) return "normal";
  if (weight.value == 700) return "bold";
  return std::to_string(weight.value);
}

std::string format_attribute_value(const AttributeValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Paint>) {
          return format_paint(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, TextAlign>) {
          return std::string(text_align_name(v));
        } else if constexpr (std::is_same_v<T, FontStyle>) {
          return std::string(font_style_name(v));
        } else {
          return format_font_weight(v);
        }
      },
      value);
}

AttributeValue parse_attribute_value(AttributeName name, std::string_view text) {
  switch (name) {
    case AttributeName::Fill:
    case AttributeName::Stroke:
    case AttributeName::TextBackgroundColor:
      try {
        return normalize_color(text);
      } catch (const Error&) {
        invalid(name, "not a color: " + std::string(text));
      }
    case AttributeName::StrokeWidth:
    case AttributeName::Opacity:
    case AttributeName::LineHeight:
    case AttributeName::FontSize:
    case AttributeName::Padding: {
      auto v = parse_number(text);
      if (!v) invalid(name, "not a number: " + std::string(text));
      return quantize(*v);
    }
    case AttributeName::Text:
    case AttributeName::FontFamily:
      return std::string(text);
    case AttributeName::TextAlign:
      for (auto a : {TextAlign::Left, TextAlign::Center, TextAlign::Right, TextAlign::Justify}) {
        if (text_align_name(a) == text) return a;
      }
      invalid(name, "unknown alignment: " + std::string(text));
    case AttributeName::FontStyle:
      for (auto s : {FontStyle::Normal, FontStyle::Italic, FontStyle::Oblique}) {
        if (font_style_name(s) == text) return s;
      }
      invalid(name, "unknown font style: " + std::string(text));
    case AttributeName::FontWeight:
      if (auto w = parse_font_weight(text)) return *w;
      invalid(name, "unknown font weight: " + std::string(text));
  }
  invalid(name, "unknown attribute");
}

}  // namespace vst
