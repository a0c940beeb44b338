#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "vst/document.hpp"
#include "vst/error.hpp"
#include "vst/hash.hpp"
#include "vst/numeric.hpp"
#include "xml.hpp"

namespace vst {

namespace {

constexpr std::string_view kVstNamespace = "urn:vst:style";

// Properties this model reads into StyleAttributes.
const std::set<std::string, std::less<>> kModeledProperties = {
    "fill",          "fill-opacity",          "stroke",         "stroke-opacity",
    "stroke-width",  "font-size",             "font-family",    "font-style",
    "font-weight",   "text-anchor",           "text-align",     "line-height",
    "vst:padding",   "vst:text-background-color", "vst:text-align",
};

// Inherited presentation properties that are not modeled; they are pushed
// from groups onto leaves as plain attributes.
const std::set<std::string, std::less<>> kInheritedPassthrough = {
    "clip-rule",      "color",           "color-interpolation", "cursor",
    "direction",      "dominant-baseline", "fill-rule",         "font-kerning",
    "font-stretch",   "font-variant",    "letter-spacing",      "marker-end",
    "marker-mid",     "marker-start",    "paint-order",         "shape-rendering",
    "stroke-dasharray", "stroke-dashoffset", "stroke-linecap",  "stroke-linejoin",
    "stroke-miterlimit", "text-rendering", "visibility",        "word-spacing",
    "writing-mode",   "xml:space",
};

const std::set<std::string, std::less<>> kLeafTags = {
    "rect", "circle", "ellipse", "line", "polyline", "polygon", "path", "text", "image",
};

const std::set<std::string, std::less<>> kGroupTags = {"g", "a", "switch"};

bool is_property(std::string_view name) {
  return kModeledProperties.count(name) > 0 || kInheritedPassthrough.count(name) > 0 ||
         name == "opacity";
}

using PropertyMap = std::map<std::string, std::string, std::less<>>;

struct Context {
  Affine ctm;
  double opacity = 1.0;
  double font_size = 16.0;
  PropertyMap properties;  // inherited raw values (opacity excluded)
};

// Attributes of one node split into style properties and the rest.
struct SplitAttributes {
  PropertyMap properties;
  AttributeList rest;
  std::string style_remainder;  // unmodeled, non-inherited declarations
};

std::optional<double> parse_length(std::string_view text, double font_size, double reference) {
  std::string_view s = trim(text);
  auto v = consume_number(s);
  if (!v) return std::nullopt;
  std::string_view unit = trim(s);
  if (unit.empty() || unit == "px") return *v;
  if (unit == "pt") return *v * 4.0 / 3.0;
  if (unit == "pc") return *v * 16.0;
  if (unit == "mm") return *v * 96.0 / 25.4;
  if (unit == "cm") return *v * 96.0 / 2.54;
  if (unit == "in") return *v * 96.0;
  if (unit == "em") return *v * font_size;
  if (unit == "ex") return *v * font_size / 2.0;
  if (unit == "%") return *v * reference / 100.0;
  return std::nullopt;
}

class SvgParser {
 public:
  explicit SvgParser(std::string_view bytes) : bytes_(bytes) {}

  DesignDocument run();

 private:
  struct Leaf {
    Element element;
    std::optional<std::string> explicit_id;
    std::string locator;
  };

  void warn(std::string locator, WarningCode code, std::string detail) {
    doc_.warnings.push_back({std::move(locator), code, std::move(detail)});
  }

  std::string canonical_name(std::string_view name) const;
  SplitAttributes split(const xml::Node& node) const;
  void apply_own_properties(const PropertyMap& own, Context& ctx, const std::string& locator);
  void walk_children(const xml::Node& node, const Context& ctx, const std::string& locator);
  void walk(const xml::Node& node, const Context& ctx, const std::string& locator);
  void handle_group(const xml::Node& node, const Context& ctx, const std::string& locator);
  void handle_leaf(const xml::Node& node, const Context& ctx, const std::string& locator);
  void handle_passthrough(const xml::Node& node, const Context& ctx, const std::string& locator);
  double length(const xml::Node& node, std::string_view key, double font_size, double reference,
                const std::string& locator);
  Geometry read_geometry(const xml::Node& node, std::string_view tag, double font_size,
                         const std::string& locator);
  Paint read_paint(const PropertyMap& props, std::string_view paint_key,
                   std::string_view opacity_key, AttributeList& passthrough,
                   const std::string& locator);
  StyleAttributes read_style(const PropertyMap& props, double opacity, double font_size,
                             bool is_text, AttributeList& passthrough, const std::string& locator);
  std::optional<std::string> read_text_content(const xml::Node& node, const std::string& locator);
  void assign_ids();

  std::string_view bytes_;
  DesignDocument doc_;
  std::string vst_prefix_ = "vst";
  std::vector<Leaf> leaves_;
};

std::string SvgParser::canonical_name(std::string_view name) const {
  if (vst_prefix_ != "vst" && name.size() > vst_prefix_.size() &&
      name.substr(0, vst_prefix_.size()) == vst_prefix_ && name[vst_prefix_.size()] == ':') {
    return "vst" + std::string(name.substr(vst_prefix_.size()));
  }
  return std::string(name);
}

SplitAttributes SvgParser::split(const xml::Node& node) const {
  SplitAttributes out;
  std::string style_text;
  for (const auto& [raw_key, value] : node.attributes) {
    std::string key = canonical_name(raw_key);
    if (key == "style") {
      style_text = value;
    } else if (is_property(key)) {
      if (trim(value) != "inherit") out.properties[key] = std::string(trim(value));
    } else {
      out.rest.emplace_back(key, value);
    }
  }
  // Inline declarations override presentation attributes.
  std::string_view rest = style_text;
  while (!rest.empty()) {
    auto semi = rest.find(';');
    std::string_view decl = trim(rest.substr(0, semi));
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    if (decl.empty()) continue;
    auto colon = decl.find(':');
    if (colon == std::string_view::npos) continue;
    std::string key(trim(decl.substr(0, colon)));
    std::string_view value = trim(decl.substr(colon + 1));
    if (is_property(key)) {
      if (value != "inherit") out.properties[key] = std::string(value);
    } else {
      if (!out.style_remainder.empty()) out.style_remainder += ";";
      out.style_remainder += key + ":" + std::string(value);
    }
  }
  return out;
}

void SvgParser::apply_own_properties(const PropertyMap& own, Context& ctx,
                                     const std::string& locator) {
  for (const auto& [key, value] : own) {
    if (key == "opacity") {
      auto v = parse_number(value);
      if (!v) {
        warn(locator, WarningCode::UnsupportedValue, "opacity=" + value);
        continue;
      }
      ctx.opacity *= std::clamp(*v, 0.0, 1.0);
    } else if (key == "font-size") {
      auto v = parse_length(value, ctx.font_size, ctx.font_size);
      if (!v || *v <= 0) {
        warn(locator, WarningCode::UnsupportedValue, "font-size=" + value);
        continue;
      }
      ctx.font_size = quantize(*v);
      ctx.properties[key] = format_number(ctx.font_size);
    } else {
      ctx.properties[key] = value;
    }
  }
}

double SvgParser::length(const xml::Node& node, std::string_view key, double font_size,
                         double reference, const std::string& locator) {
  const std::string* raw = node.attribute(key);
  if (!raw) return 0.0;
  // Lists such as text x="1 2 3" use their first entry.
  std::string_view first = trim(*raw);
  auto sep = first.find_first_of(" ,\t\n");
  if (sep != std::string_view::npos) first = first.substr(0, sep);
  if (first.size() > 0 && first.back() == '%') {
    warn(locator, WarningCode::UnsupportedValue,
         std::string(key) + " percentage resolved against the viewBox");
  }
  auto v = parse_length(first, font_size, reference);
  if (!v) {
    warn(locator, WarningCode::InvalidGeometry, std::string(key) + "=" + *raw);
    return 0.0;
  }
  return quantize(*v);
}

Geometry SvgParser::read_geometry(const xml::Node& node, std::string_view tag, double fs,
                                  const std::string& loc) {
  double vw = doc_.view_box.width, vh = doc_.view_box.height;
  double diag = std::sqrt((vw * vw + vh * vh) / 2.0);
  auto len = [&](std::string_view key, double reference) {
    return length(node, key, fs, reference, loc);
  };
  auto non_negative = [&](double v, std::string_view key) {
    if (v < 0) {
      warn(loc, WarningCode::InvalidGeometry, "negative " + std::string(key));
      return 0.0;
    }
    return v;
  };
  if (tag == "rect") {
    RectGeometry g{len("x", vw), len("y", vh), non_negative(len("width", vw), "width"),
                   non_negative(len("height", vh), "height"), 0, 0};
    bool has_rx = node.attribute("rx") != nullptr, has_ry = node.attribute("ry") != nullptr;
    g.rx = has_rx ? non_negative(len("rx", vw), "rx") : 0;
    g.ry = has_ry ? non_negative(len("ry", vh), "ry") : 0;
    if (has_rx && !has_ry) g.ry = g.rx;
    if (has_ry && !has_rx) g.rx = g.ry;
    g.rx = quantize(std::min(g.rx, g.width / 2));
    g.ry = quantize(std::min(g.ry, g.height / 2));
    return g;
  }
  if (tag == "circle") {
    return CircleGeometry{len("cx", vw), len("cy", vh), non_negative(len("r", diag), "r")};
  }
  if (tag == "ellipse") {
    return EllipseGeometry{len("cx", vw), len("cy", vh), non_negative(len("rx", vw), "rx"),
                           non_negative(len("ry", vh), "ry")};
  }
  if (tag == "line") {
    return LineGeometry{len("x1", vw), len("y1", vh), len("x2", vw), len("y2", vh)};
  }
  if (tag == "polyline" || tag == "polygon") {
    PolyGeometry g;
    g.closed = tag == "polygon";
    if (const std::string* pts = node.attribute("points")) {
      std::string_view s = *pts;
      while (true) {
        auto x = consume_number(s);
        if (!x) break;
        auto y = consume_number(s);
        if (!y) {
          warn(loc, WarningCode::InvalidGeometry, "odd number of point coordinates");
          break;
        }
        g.points.push_back({quantize(*x), quantize(*y)});
      }
    }
    return g;
  }
  if (tag == "path") {
    PathGeometry g;
    if (const std::string* d = node.attribute("d")) {
      try {
        g.segments = parse_path_data(*d);
      } catch (const Error& e) {
        warn(loc, WarningCode::InvalidGeometry, e.what());
      }
    }
    for (auto& seg : g.segments) {
      for (auto& a : seg.args) a = quantize(a);
    }
    return g;
  }
  if (tag == "text") {
    TextGeometry g{len("x", vw), len("y", vh)};
    if (!node.attribute("x") && !node.attribute("y")) {
      for (const auto& child : node.children) {
        if (child.node && child.node->local_name() == "tspan") {
          g.x = length(*child.node, "x", fs, vw, loc);
          g.y = length(*child.node, "y", fs, vh, loc);
          break;
        }
      }
    }
    return g;
  }
  return ImageGeometry{len("x", vw), len("y", vh), non_negative(len("width", vw), "width"),
                       non_negative(len("height", vh), "height")};
}

Paint SvgParser::read_paint(const PropertyMap& props, std::string_view paint_key,
                            std::string_view opacity_key, AttributeList& passthrough,
                            const std::string& loc) {
  auto it = props.find(paint_key);
  Paint paint;
  if (it == props.end()) {
    paint = paint_key == "fill" ? Paint(Color{0, 0, 0, 1.0}) : std::nullopt;
  } else {
    std::string_view raw = it->second;
    if (raw == "currentColor") {
      auto color = props.find("color");
      raw = color == props.end() ? std::string_view("black") : std::string_view(color->second);
    }
    try {
      paint = normalize_color(raw);
    } catch (const Error&) {
      // Paint servers and other unmodeled paints ride along untouched.
      warn(loc, WarningCode::UnsupportedPaint, std::string(paint_key) + "=" + it->second);
      passthrough.emplace_back(std::string(paint_key), it->second);
      if (auto op = props.find(opacity_key); op != props.end()) {
        passthrough.emplace_back(std::string(opacity_key), op->second);
      }
      return std::nullopt;
    }
  }
  if (paint) {
    if (auto op = props.find(opacity_key); op != props.end()) {
      auto v = parse_number(op->second);
      if (v) {
        paint->a = quantize(paint->a * std::clamp(*v, 0.0, 1.0));
      } else {
        warn(loc, WarningCode::UnsupportedValue, std::string(opacity_key) + "=" + op->second);
      }
    }
  }
  return paint;
}

StyleAttributes SvgParser::read_style(const PropertyMap& props, double opacity, double fs,
                                      bool is_text, AttributeList& passthrough,
                                      const std::string& loc) {
  StyleAttributes style;
  style.fill = read_paint(props, "fill", "fill-opacity", passthrough, loc);
  style.stroke = read_paint(props, "stroke", "stroke-opacity", passthrough, loc);
  if (auto it = props.find("stroke-width"); it != props.end()) {
    auto v = parse_length(it->second, fs, doc_.view_box.width);
    if (v && *v >= 0) {
      style.stroke_width = quantize(*v);
    } else {
      warn(loc, WarningCode::UnsupportedValue, "stroke-width=" + it->second);
    }
  }
  style.opacity = quantize(std::clamp(opacity, 0.0, 1.0));
  if (!is_text) return style;

  TextStyle t;
  t.font_size = quantize(fs);
  if (auto it = props.find("font-family"); it != props.end() && !trim(it->second).empty()) {
    t.font_family = std::string(trim(it->second));
  }
  if (auto it = props.find("font-style"); it != props.end()) {
    const std::string& v = it->second;
    if (v == "normal") t.font_style = FontStyle::Normal;
    else if (v == "italic") t.font_style = FontStyle::Italic;
    else if (v == "oblique") t.font_style = FontStyle::Oblique;
    else warn(loc, WarningCode::UnsupportedValue, "font-style=" + v);
  }
  if (auto it = props.find("font-weight"); it != props.end()) {
    if (auto w = parse_font_weight(it->second)) {
      t.font_weight = w;
    } else {
      warn(loc, WarningCode::UnsupportedValue, "font-weight=" + it->second);
    }
  }
  auto align_from = [](std::string_view v) -> std::optional<TextAlign> {
    if (v == "start" || v == "left") return TextAlign::Left;
    if (v == "middle" || v == "center") return TextAlign::Center;
    if (v == "end" || v == "right") return TextAlign::Right;
    if (v == "justify") return TextAlign::Justify;
    return std::nullopt;
  };
  for (std::string_view key : {"text-align", "text-anchor", "vst:text-align"}) {
    if (auto it = props.find(key); it != props.end()) {
      if (auto a = align_from(it->second)) {
        t.align = a;
      } else {
        warn(loc, WarningCode::UnsupportedValue, std::string(key) + "=" + it->second);
      }
    }
  }
  if (auto it = props.find("line-height"); it != props.end()) {
    std::string_view v = trim(it->second);
    std::string_view s = v;
    std::optional<double> multiplier;
    if (v == "normal") {
      multiplier = 1.2;
    } else if (auto n = consume_number(s); n && trim(s).empty()) {
      multiplier = *n;
    } else if (auto l = parse_length(v, fs, 100.0)) {
      multiplier = trim(s) == "%" ? *l / 100.0 : *l / fs;
    }
    if (multiplier && *multiplier > 0) {
      t.line_height = quantize(*multiplier);
    } else {
      warn(loc, WarningCode::UnsupportedValue, "line-height=" + it->second);
    }
  }
  if (auto it = props.find("vst:padding"); it != props.end()) {
    auto v = parse_length(it->second, fs, 0.0);
    if (v && *v >= 0) {
      t.padding = quantize(*v);
    } else {
      warn(loc, WarningCode::UnsupportedValue, "padding=" + it->second);
    }
  }
  if (auto it = props.find("vst:text-background-color"); it != props.end()) {
    try {
      t.background = normalize_color(it->second);
    } catch (const Error&) {
      warn(loc, WarningCode::UnsupportedPaint, "text-background-color=" + it->second);
    }
  }
  style.text = std::move(t);
  return style;
}

void append_descendant_text(const xml::Node& node, std::string& out) {
  for (const auto& child : node.children) {
    if (child.node) {
      append_descendant_text(*child.node, out);
    } else {
      out += child.text;
    }
  }
}

std::optional<std::string> SvgParser::read_text_content(const xml::Node& node,
                                                        const std::string& loc) {
  std::vector<std::string> lines(1);
  bool flattened = false;
  for (const auto& child : node.children) {
    if (!child.node) {
      lines.back() += child.text;
      continue;
    }
    const xml::Node& span = *child.node;
    if (span.local_name() == "tspan") {
      bool new_line = span.attribute("x") || span.attribute("y") || span.attribute("dy");
      if (new_line && !trim(lines.back()).empty()) lines.emplace_back();
      for (const auto& [k, v] : span.attributes) {
        if (k != "x" && k != "y" && k != "dx" && k != "dy" && k != "id" && k != "sodipodi:role") {
          flattened = true;
        }
      }
    } else {
      flattened = true;
    }
    append_descendant_text(span, lines.back());
  }
  if (flattened) {
    warn(loc, WarningCode::TextSpanFlattened, "nested text styling merged into the text element");
  }
  std::string joined;
  for (auto& line : lines) {
    for (char& ch : line) {
      if (ch == '\n' || ch == '\t' || ch == '\r') ch = ' ';
    }
    if (!joined.empty()) joined += '\n';
    joined += line;
  }
  std::string content = normalize_text_content(joined);
  if (content.empty()) return std::nullopt;
  return content;
}

std::string shape_signature(const Element& e) {
  if (const auto* path = std::get_if<PathGeometry>(&e.geometry)) {
    std::string sig = "path:";
    for (const auto& seg : path->segments) {
      static constexpr char kLetters[] = {'M', 'L', 'C', 'Q', 'A', 'Z'};
      sig.push_back(kLetters[static_cast<int>(seg.command)]);
    }
    return sig;
  }
  if (e.kind == ElementKind::Text) return "text";
  BBox local = geometry_bounds(e.geometry, Affine{});
  std::string ratio = local.height > 0 ? format_number(local.width / local.height) : "inf";
  return e.tag + ":" + ratio;
}

void SvgParser::handle_leaf(const xml::Node& node, const Context& parent,
                            const std::string& loc) {
  std::string tag(node.local_name());
  SplitAttributes own = split(node);
  Context ctx = parent;
  apply_own_properties(own.properties, ctx, loc);

  Element e;
  e.tag = tag;
  e.kind = tag == "path"    ? ElementKind::Path
           : tag == "text"  ? ElementKind::Text
           : tag == "image" ? ElementKind::Image
                            : ElementKind::Shape;
  Affine local;
  if (const std::string* t = node.attribute("transform")) {
    try {
      local = parse_transform(*t);
    } catch (const Error& err) {
      warn(loc, WarningCode::InvalidGeometry, err.what());
    }
  }
  Affine m = ctx.ctm * local;
  e.transform = {quantize(m.a), quantize(m.b), quantize(m.c),
                 quantize(m.d), quantize(m.e), quantize(m.f)};
  e.geometry = read_geometry(node, tag, ctx.font_size, loc);

  static const std::set<std::string, std::less<>> kGeometryKeys = {
      "x",  "y",  "width",  "height", "rx",     "ry", "cx",  "cy", "r",
      "x1", "y1", "x2",     "y2",     "points", "d",  "id",  "transform",
  };
  std::optional<std::string> explicit_id;
  for (const auto& [k, v] : own.rest) {
    if (k == "id") {
      explicit_id = v;
    } else if (k == "xmlns:vst" || k == "xmlns") {
      continue;
    } else if (kGeometryKeys.count(k) == 0 ||
               (tag == "image" && (k == "rx" || k == "ry" || k == "d"))) {
      e.passthrough.emplace_back(k, v);
    }
  }
  for (const auto& [k, v] : ctx.properties) {
    if (kInheritedPassthrough.count(k) > 0) e.passthrough.emplace_back(k, v);
  }
  if (!own.style_remainder.empty()) e.passthrough.emplace_back("style", own.style_remainder);

  e.style = read_style(ctx.properties, ctx.opacity, ctx.font_size, e.kind == ElementKind::Text,
                       e.passthrough, loc);
  if (e.kind == ElementKind::Text) e.style.text->content = read_text_content(node, loc);
  e.bbox = element_bounds(e);
  e.shape_signature = shape_signature(e);
  leaves_.push_back({std::move(e), std::move(explicit_id), loc});
}

void SvgParser::handle_group(const xml::Node& node, const Context& parent,
                             const std::string& loc) {
  SplitAttributes own = split(node);
  Context ctx = parent;
  apply_own_properties(own.properties, ctx, loc);
  if (const std::string* t = node.attribute("transform")) {
    try {
      ctx.ctm = ctx.ctm * parse_transform(*t);
    } catch (const Error& err) {
      warn(loc, WarningCode::InvalidGeometry, err.what());
    }
  }
  for (const auto& [k, v] : own.rest) {
    if (k == "transform" || k == "id" || k == "class" || k.rfind("xmlns", 0) == 0 ||
        k.rfind("inkscape:", 0) == 0 || k.rfind("sodipodi:", 0) == 0 ||
        k.rfind("data-", 0) == 0) {
      continue;
    }
    warn(loc, WarningCode::GroupAttributeDropped, k + "=" + v);
  }
  if (!own.style_remainder.empty()) {
    warn(loc, WarningCode::GroupAttributeDropped, "style=" + own.style_remainder);
  }
  walk_children(node, ctx, loc);
}

void SvgParser::handle_passthrough(const xml::Node& node, const Context& ctx,
                                   const std::string& loc) {
  warn(loc, WarningCode::UnsupportedNode, node.name);
  std::string markup;
  xml::write(node, markup);
  if (!ctx.ctm.is_identity()) {
    const Affine& m = ctx.ctm;
    markup = "<g transform=\"matrix(" + format_number(m.a) + " " + format_number(m.b) + " " +
             format_number(m.c) + " " + format_number(m.d) + " " + format_number(m.e) + " " +
             format_number(m.f) + ")\">" + markup + "</g>";
  }
  doc_.passthrough_nodes.push_back({std::move(markup), leaves_.size()});
}

void SvgParser::walk(const xml::Node& node, const Context& ctx, const std::string& loc) {
  std::string_view tag = node.local_name();
  if (kGroupTags.count(tag) > 0) {
    handle_group(node, ctx, loc);
  } else if (kLeafTags.count(tag) > 0) {
    handle_leaf(node, ctx, loc);
  } else {
    handle_passthrough(node, ctx, loc);
  }
}

void SvgParser::walk_children(const xml::Node& node, const Context& ctx,
                              const std::string& loc) {
  std::map<std::string, int, std::less<>> counts;
  for (const auto& child : node.children) {
    if (!child.node) continue;
    int index = ++counts[child.node->name];
    walk(*child.node, ctx, loc + "/" + child.node->name + "[" + std::to_string(index) + "]");
  }
}

void SvgParser::assign_ids() {
  std::unordered_set<std::string> explicit_ids;
  std::unordered_set<std::string> used;
  for (const auto& leaf : leaves_) {
    if (leaf.explicit_id && !leaf.explicit_id->empty()) explicit_ids.insert(*leaf.explicit_id);
  }
  for (size_t i = 0; i < leaves_.size(); ++i) {
    Leaf& leaf = leaves_[i];
    std::string id;
    if (leaf.explicit_id && !leaf.explicit_id->empty() && used.count(*leaf.explicit_id) == 0) {
      id = *leaf.explicit_id;
    } else {
      if (leaf.explicit_id && !leaf.explicit_id->empty()) {
        warn(leaf.locator, WarningCode::DuplicateId, *leaf.explicit_id);
      }
      std::string base = "e" + std::to_string(i);
      id = base;
      for (int n = 2; used.count(id) > 0 || explicit_ids.count(id) > 0; ++n) {
        id = base + "_" + std::to_string(n);
      }
    }
    used.insert(id);
    leaf.element.id = id;
  }
}

DesignDocument SvgParser::run() {
  auto root = xml::parse(bytes_);
  if (root->local_name() != "svg") {
    throw Error(ErrorCode::UnsupportedRoot, "root element is <" + root->name + ">, not <svg>");
  }
  doc_.source_hash = fnv1a(bytes_);
  for (const auto& [k, v] : root->attributes) {
    if (v == kVstNamespace && k.rfind("xmlns:", 0) == 0) vst_prefix_ = k.substr(6);
  }

  SplitAttributes own = split(*root);
  std::optional<BBox> view_box;
  std::optional<double> width, height;
  for (const auto& [k, v] : own.rest) {
    if (k == "viewBox") {
      std::string_view s = v;
      std::vector<double> nums;
      while (auto n = consume_number(s)) nums.push_back(*n);
      if (nums.size() == 4 && nums[2] >= 0 && nums[3] >= 0 && trim(s).empty()) {
        view_box = BBox{quantize(nums[0]), quantize(nums[1]), quantize(nums[2]),
                        quantize(nums[3])};
      } else {
        warn("/svg", WarningCode::UnsupportedValue, "viewBox=" + v);
      }
      continue;
    }
    if (k == "xmlns:" + vst_prefix_) continue;
    if (k == "width") width = parse_length(v, 16.0, 0.0);
    if (k == "height") height = parse_length(v, 16.0, 0.0);
    doc_.root_attributes.emplace_back(k, v);
  }
  if (!own.style_remainder.empty()) doc_.root_attributes.emplace_back("style", own.style_remainder);
  for (const auto& [k, v] : own.properties) {
    if (kInheritedPassthrough.count(k) > 0) doc_.root_attributes.emplace_back(k, v);
  }
  if (view_box) {
    doc_.view_box = *view_box;
    doc_.view_box_explicit = true;
  } else if (width && height && *width > 0 && *height > 0) {
    doc_.view_box = {0, 0, quantize(*width), quantize(*height)};
  }

  Context ctx;
  PropertyMap modeled;
  for (const auto& [k, v] : own.properties) {
    if (kInheritedPassthrough.count(k) == 0) modeled[k] = v;
  }
  apply_own_properties(modeled, ctx, "/svg");
  walk_children(*root, ctx, "/svg");

  if (leaves_.empty()) {
    throw Error(ErrorCode::EmptyDocument, "document has no paintable elements");
  }
  assign_ids();
  for (auto& leaf : leaves_) doc_.elements.push_back(std::move(leaf.element));
  if (!view_box && doc_.view_box.area() <= 0) {
    BoundsAccumulator acc;
    for (const auto& e : doc_.elements) acc.add(e.bbox);
    BBox b = acc.box();
    doc_.view_box = {quantize(b.x), quantize(b.y), quantize(b.width), quantize(b.height)};
  }
  return std::move(doc_);
}

}  // namespace

DesignDocument parse_svg(std::string_view bytes) { return SvgParser(bytes).run(); }

}  // namespace vst
