#include "vst/document.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vst/hash.hpp"

namespace vst {

std::string_view element_kind_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::Shape: return "shape";
    case ElementKind::Path: return "path";
    case ElementKind::Text: return "text";
    case ElementKind::Image: return "image";
  }
  return "shape";
}

std::string_view warning_code_name(WarningCode code) {
  switch (code) {
    case WarningCode::UnsupportedNode: return "UnsupportedNode";
    case WarningCode::UnsupportedPaint: return "UnsupportedPaint";
    case WarningCode::UnsupportedValue: return "UnsupportedValue";
    case WarningCode::GroupAttributeDropped: return "GroupAttributeDropped";
    case WarningCode::TextSpanFlattened: return "TextSpanFlattened";
    case WarningCode::DuplicateId: return "DuplicateId";
    case WarningCode::InvalidGeometry: return "InvalidGeometry";
  }
  return "Unknown";
}

const Element* DesignDocument::find(std::string_view id) const {
  for (const auto& e : elements) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::optional<size_t> DesignDocument::index_of(std::string_view id) const {
  for (size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].id == id) return i;
  }
  return std::nullopt;
}

namespace {

size_t utf8_length(std::string_view s) {
  return static_cast<size_t>(std::count_if(
      s.begin(), s.end(), [](char ch) { return (static_cast<unsigned char>(ch) & 0xC0) != 0x80; }));
}

}  // namespace

BBox text_local_bounds(const TextGeometry& anchor, const StyleAttributes& style) {
  if (!style.text) return {anchor.x, anchor.y, 0, 0};
  const TextStyle& t = *style.text;
  size_t lines = 0;
  size_t widest = 0;
  if (t.content) {
    std::string_view rest = *t.content;
    while (true) {
      auto nl = rest.find('\n');
      widest = std::max(widest, utf8_length(rest.substr(0, nl)));
      ++lines;
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }
  double width = 0.6 * t.font_size * static_cast<double>(widest);
  double height = lines == 0 ? 0.0
                             : t.font_size + static_cast<double>(lines - 1) * t.line_height *
                                                 t.font_size;
  double left = anchor.x;
  if (t.align == TextAlign::Center) left -= width / 2;
  if (t.align == TextAlign::Right) left -= width;
  double top = lines == 0 ? anchor.y : anchor.y - 0.8 * t.font_size;
  return {left, top, width, height};
}

BBox element_bounds(const Element& element) {
  if (const auto* text = std::get_if<TextGeometry>(&element.geometry)) {
    BBox local = text_local_bounds(*text, element.style);
    return geometry_bounds(ImageGeometry{local.x, local.y, local.width, local.height},
                           element.transform);
  }
  return geometry_bounds(element.geometry, element.transform);
}

std::optional<std::string> compare_documents(const DesignDocument& a, const DesignDocument& b,
                                             double tol) {
  std::ostringstream why;
  if (a.elements.size() != b.elements.size()) {
    why << "element count " << a.elements.size() << " vs " << b.elements.size();
    return why.str();
  }
  for (size_t i = 0; i < a.elements.size(); ++i) {
    const Element& x = a.elements[i];
    const Element& y = b.elements[i];
    if (x.id != y.id) {
      why << "element " << i << ": id " << x.id << " vs " << y.id;
      return why.str();
    }
    if (x.kind != y.kind) {
      why << x.id << ": kind differs";
      return why.str();
    }
    auto far = [tol](double p, double q) { return !(std::abs(p - q) <= tol); };
    if (far(x.bbox.x, y.bbox.x) || far(x.bbox.y, y.bbox.y) || far(x.bbox.width, y.bbox.width) ||
        far(x.bbox.height, y.bbox.height)) {
      why << x.id << ": bbox (" << x.bbox.x << "," << x.bbox.y << "," << x.bbox.width << ","
          << x.bbox.height << ") vs (" << y.bbox.x << "," << y.bbox.y << "," << y.bbox.width
          << "," << y.bbox.height << ")";
      return why.str();
    }
    if (!(x.style == y.style)) {
      for (auto name : kAllAttributes) {
        auto va = get_attribute(x.style, name);
        auto vb = get_attribute(y.style, name);
        if (va != vb) {
          why << x.id << ": style " << attribute_name(name) << " "
              << (va ? format_attribute_value(*va) : "<absent>") << " vs "
              << (vb ? format_attribute_value(*vb) : "<absent>");
          return why.str();
        }
      }
      why << x.id << ": style differs";
      return why.str();
    }
  }
  return std::nullopt;
}

std::string hash_to_hex(std::uint64_t hash) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = kHex[hash & 0xF];
    hash >>= 4;
  }
  return out;
}

bool hex_to_hash(std::string_view text, std::uint64_t& out) {
  if (text.size() != 16) return false;
  std::uint64_t v = 0;
  for (char ch : text) {
    int d;
    if (ch >= '0' && ch <= '9') d = ch - '0';
    else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
    else if (ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
    else return false;
    v = (v << 4) | static_cast<std::uint64_t>(d);
  }
  out = v;
  return true;
}

}  // namespace vst
