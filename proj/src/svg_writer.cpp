#include <map>

#include "vst/document.hpp"
#include "vst/numeric.hpp"
#include "xml.hpp"

namespace vst {

namespace {

constexpr std::string_view kSvgNamespace = "http://www.w3.org/2000/svg";
constexpr std::string_view kVstNamespace = "urn:vst:style";

using AttributeMap = std::map<std::string, std::string>;

std::string format_matrix(const Affine& m) {
  return "matrix(" + format_number(m.a) + " " + format_number(m.b) + " " + format_number(m.c) +
         " " + format_number(m.d) + " " + format_number(m.e) + " " + format_number(m.f) + ")";
}

std::string format_path(const std::vector<PathSegment>& segments) {
  std::string out;
  for (const auto& seg : segments) {
    if (!out.empty()) out += ' ';
    size_t count = 0;
    switch (seg.command) {
      case PathCommand::MoveTo: out += 'M'; count = 2; break;
      case PathCommand::LineTo: out += 'L'; count = 2; break;
      case PathCommand::CubicTo: out += 'C'; count = 6; break;
      case PathCommand::QuadTo: out += 'Q'; count = 4; break;
      case PathCommand::ArcTo: out += 'A'; count = 7; break;
      case PathCommand::Close: out += 'Z'; break;
    }
    for (size_t i = 0; i < count; ++i) {
      if (i > 0) out += ' ';
      out += format_number(seg.args[i]);
    }
  }
  return out;
}

void write_geometry(const Geometry& geometry, AttributeMap& attrs) {
  auto set = [&](const char* key, double v) { attrs[key] = format_number(v); };
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, RectGeometry>) {
          set("x", g.x);
          set("y", g.y);
          set("width", g.width);
          set("height", g.height);
          if (g.rx > 0 || g.ry > 0) {
            set("rx", g.rx);
            set("ry", g.ry);
          }
        } else if constexpr (std::is_same_v<G, CircleGeometry>) {
          set("cx", g.cx);
          set("cy", g.cy);
          set("r", g.r);
        } else if constexpr (std::is_same_v<G, EllipseGeometry>) {
          set("cx", g.cx);
          set("cy", g.cy);
          set("rx", g.rx);
          set("ry", g.ry);
        } else if constexpr (std::is_same_v<G, LineGeometry>) {
          set("x1", g.x1);
          set("y1", g.y1);
          set("x2", g.x2);
          set("y2", g.y2);
        } else if constexpr (std::is_same_v<G, PolyGeometry>) {
          std::string pts;
          for (const auto& p : g.points) {
            if (!pts.empty()) pts += ' ';
            pts += format_number(p.x) + "," + format_number(p.y);
          }
          attrs["points"] = pts;
        } else if constexpr (std::is_same_v<G, PathGeometry>) {
          attrs["d"] = format_path(g.segments);
        } else if constexpr (std::is_same_v<G, TextGeometry>) {
          set("x", g.x);
          set("y", g.y);
        } else if constexpr (std::is_same_v<G, ImageGeometry>) {
          set("x", g.x);
          set("y", g.y);
          set("width", g.width);
          set("height", g.height);
        }
      },
      geometry);
}

// A `none` paint leaves an unmodeled passthrough paint (e.g. a gradient
// reference) in place.
void write_paint(const Paint& paint, const char* key, const char* opacity_key,
                 AttributeMap& attrs) {
  if (!paint) {
    if (attrs.count(key) == 0) attrs[key] = "none";
    return;
  }
  attrs.erase(opacity_key);
  Color opaque = *paint;
  opaque.a = 1.0;
  attrs[key] = format_color(opaque);
  if (paint->a < 1.0) attrs[opacity_key] = format_number(paint->a);
}

void write_style(const StyleAttributes& style, AttributeMap& attrs) {
  write_paint(style.fill, "fill", "fill-opacity", attrs);
  write_paint(style.stroke, "stroke", "stroke-opacity", attrs);
  attrs["stroke-width"] = format_number(style.stroke_width);
  attrs["opacity"] = format_number(style.opacity);
  if (!style.text) return;
  const TextStyle& t = *style.text;
  attrs["font-size"] = format_number(t.font_size);
  if (t.font_family) attrs["font-family"] = *t.font_family;
  if (t.font_style) attrs["font-style"] = std::string(font_style_name(*t.font_style));
  if (t.font_weight) attrs["font-weight"] = format_font_weight(*t.font_weight);
  if (t.align) {
    switch (*t.align) {
      case TextAlign::Left: attrs["text-anchor"] = "start"; break;
      case TextAlign::Center: attrs["text-anchor"] = "middle"; break;
      case TextAlign::Right: attrs["text-anchor"] = "end"; break;
      case TextAlign::Justify:
        attrs["text-anchor"] = "start";
        attrs["vst:text-align"] = "justify";
        break;
    }
  }
  attrs["line-height"] = format_number(t.line_height);
  attrs["vst:padding"] = format_number(t.padding);
  attrs["vst:text-background-color"] = format_paint(t.background);
}

void write_open_tag(std::string_view tag, const AttributeMap& attrs, std::string& out) {
  out += '<';
  out += tag;
  if (auto it = attrs.find("id"); it != attrs.end()) {
    out += " id=\"" + xml::escape_attribute(it->second) + "\"";
  }
  for (const auto& [k, v] : attrs) {
    if (k == "id") continue;
    out += ' ';
    out += k;
    out += "=\"";
    out += xml::escape_attribute(v);
    out += '"';
  }
}

std::string element_markup(const Element& e) {
  AttributeMap attrs;
  for (const auto& [k, v] : e.passthrough) attrs[k] = v;
  attrs["id"] = e.id;
  write_geometry(e.geometry, attrs);
  if (!e.transform.is_identity()) attrs["transform"] = format_matrix(e.transform);
  write_style(e.style, attrs);

  std::string out;
  write_open_tag(e.tag, attrs, out);
  std::optional<std::string> content;
  if (e.style.text) content = e.style.text->content;
  if (!content) {
    out += "/>";
    return out;
  }
  out += '>';
  if (content->find('\n') == std::string::npos) {
    out += xml::escape_text(*content);
  } else {
    const auto& g = std::get<TextGeometry>(e.geometry);
    std::string x = format_number(g.x);
    std::string dy = format_number(e.style.text->line_height * e.style.text->font_size);
    std::string_view rest = *content;
    bool first = true;
    while (true) {
      auto nl = rest.find('\n');
      out += "<tspan x=\"" + x + "\" ";
      out += first ? "y=\"" + format_number(g.y) + "\"" : "dy=\"" + dy + "\"";
      out += ">" + xml::escape_text(rest.substr(0, nl)) + "</tspan>";
      first = false;
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }
  out += "</" + e.tag + ">";
  return out;
}

}  // namespace

std::string serialize_element(const Element& element) { return element_markup(element); }

std::string serialize_svg(const DesignDocument& doc) {
  AttributeMap root;
  for (const auto& [k, v] : doc.root_attributes) root[k] = v;
  root["xmlns"] = std::string(kSvgNamespace);
  root["xmlns:vst"] = std::string(kVstNamespace);
  if (doc.view_box_explicit) {
    root["viewBox"] = format_number(doc.view_box.x) + " " + format_number(doc.view_box.y) + " " +
                      format_number(doc.view_box.width) + " " +
                      format_number(doc.view_box.height);
  }
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  write_open_tag("svg", root, out);
  out += ">\n";
  auto write_passthrough = [&](size_t position) {
    for (const auto& node : doc.passthrough_nodes) {
      if (node.position == position) out += "  " + node.markup + "\n";
    }
  };
  for (size_t i = 0; i < doc.elements.size(); ++i) {
    write_passthrough(i);
    out += "  " + element_markup(doc.elements[i]) + "\n";
  }
  write_passthrough(doc.elements.size());
  out += "</svg>\n";
  return out;
}

}  // namespace vst
