#include "vst/color.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <vector>

#include "vst/error.hpp"
#include "vst/numeric.hpp"

namespace vst {

namespace {

struct NamedColor {
  std::string_view name;
  std::uint8_t r, g, b;
};

constexpr NamedColor kNamedColors[] = {
#include "named_colors.inc"
};

[[noreturn]] void unknown(std::string_view literal) {
  throw Error(ErrorCode::UnknownColor, "unknown color: " + std::string(literal));
}

int hex_digit(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

std::uint8_t clamp_channel(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

double clamp_alpha(double v) { return quantize(std::clamp(v, 0.0, 1.0)); }

Color parse_hex(std::string_view literal) {
  std::string_view digits = literal.substr(1);
  for (char ch : digits) {
    if (hex_digit(ch) < 0) unknown(literal);
  }
  auto pair = [&](size_t i) { return hex_digit(digits[i]) * 16 + hex_digit(digits[i + 1]); };
  auto single = [&](size_t i) { return hex_digit(digits[i]) * 17; };
  Color c;
  switch (digits.size()) {
    case 3:
    case 4:
      c.r = static_cast<std::uint8_t>(single(0));
      c.g = static_cast<std::uint8_t>(single(1));
      c.b = static_cast<std::uint8_t>(single(2));
      if (digits.size() == 4) c.a = clamp_alpha(single(3) / 255.0);
      return c;
    case 6:
    case 8:
      c.r = static_cast<std::uint8_t>(pair(0));
      c.g = static_cast<std::uint8_t>(pair(2));
      c.b = static_cast<std::uint8_t>(pair(4));
      if (digits.size() == 8) c.a = clamp_alpha(pair(6) / 255.0);
      return c;
    default:
      unknown(literal);
  }
}

// rgb(1,2,3) rgba(1,2,3,0.5) rgb(1 2 3 / 50%) rgb(100%,0%,0%)
Color parse_functional(std::string_view literal, std::string_view body) {
  struct Component {
    double value;
    bool percent;
  };
  std::vector<Component> parts;
  bool slash_seen = false;
  size_t slash_index = 0;
  std::string_view s = body;
  while (true) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    if (!s.empty() && s.front() == '/') {
      if (slash_seen) unknown(literal);
      slash_seen = true;
      slash_index = parts.size();
      s.remove_prefix(1);
      continue;
    }
    auto v = consume_number(s);
    if (!v) break;
    bool percent = !s.empty() && s.front() == '%';
    if (percent) s.remove_prefix(1);
    parts.push_back({*v, percent});
  }
  if (!trim(s).empty()) unknown(literal);
  if (parts.size() != 3 && parts.size() != 4) unknown(literal);
  if (slash_seen && slash_index != 3) unknown(literal);
  Color c;
  auto channel = [](const Component& comp) {
    return clamp_channel(comp.percent ? comp.value * 255.0 / 100.0 : comp.value);
  };
  c.r = channel(parts[0]);
  c.g = channel(parts[1]);
  c.b = channel(parts[2]);
  if (parts.size() == 4) {
    c.a = clamp_alpha(parts[3].percent ? parts[3].value / 100.0 : parts[3].value);
  }
  return c;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

}  // namespace

std::optional<Color> named_color(std::string_view name) {
  std::string key = lower(name);
  auto it = std::lower_bound(std::begin(kNamedColors), std::end(kNamedColors), key,
                             [](const NamedColor& nc, const std::string& k) { return nc.name < k; });
  if (it == std::end(kNamedColors) || it->name != key) return std::nullopt;
  return Color{it->r, it->g, it->b, 1.0};
}

Paint normalize_color(std::string_view literal) {
  std::string_view text = trim(literal);
  if (text.empty()) unknown(literal);
  if (text.front() == '#') return parse_hex(text);
  std::string low = lower(text);
  if (low == "none") return std::nullopt;
  if (low == "transparent") return Color{0, 0, 0, 0.0};
  auto open = low.find('(');
  if (open != std::string::npos) {
    std::string_view fn = trim(std::string_view(low).substr(0, open));
    if ((fn == "rgb" || fn == "rgba") && low.back() == ')') {
      return parse_functional(text, std::string_view(low).substr(open + 1, low.size() - open - 2));
    }
    unknown(literal);
  }
  if (auto named = named_color(low)) return named;
  unknown(literal);
}

std::string format_color(const Color& c) {
  static constexpr char kHex[] = "0123456789abcdef";
  if (c.a >= 1.0) {
    std::string out = "#";
    for (std::uint8_t ch : {c.r, c.g, c.b}) {
      out.push_back(kHex[ch >> 4]);
      out.push_back(kHex[ch & 0xF]);
    }
    return out;
  }
  return "rgba(" + std::to_string(c.r) + "," + std::to_string(c.g) + "," + std::to_string(c.b) +
         "," + format_number(c.a) + ")";
}

std::string format_paint(const Paint& paint) { return paint ? format_color(*paint) : "none"; }

}  // namespace vst
