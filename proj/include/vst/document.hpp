#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vst/geometry.hpp"
#include "vst/style.hpp"

namespace vst {

enum class ElementKind { Shape, Path, Text, Image };

std::string_view element_kind_name(ElementKind kind);

// Attribute list in source order; names are kept qualified ("xlink:href").
using AttributeList = std::vector<std::pair<std::string, std::string>>;

struct Element {
  std::string id;
  ElementKind kind = ElementKind::Shape;
  // SVG tag the element was read from ("rect", "path", ...).
  std::string tag;
  Geometry geometry;
  // Composed transform of all ancestors and the element itself.
  Affine transform;
  BBox bbox;
  StyleAttributes style;
  // "rect:1.5" (primitive + aspect ratio) or "path:MLCZ" (command sequence).
  std::string shape_signature;
  AttributeList passthrough;
};

// Unsupported subtree kept verbatim; written back before the element with
// index `position` (or at the end when position == elements.size()).
struct PassthroughNode {
  std::string markup;
  size_t position = 0;
};

enum class WarningCode {
  UnsupportedNode,
  UnsupportedPaint,
  UnsupportedValue,
  GroupAttributeDropped,
  TextSpanFlattened,
  DuplicateId,
  InvalidGeometry,
};

std::string_view warning_code_name(WarningCode code);

struct ParseWarning {
  std::string locator;  // element id or XPath-like node path
  WarningCode code;
  std::string detail;
};

struct DesignDocument {
  std::vector<Element> elements;  // paint order
  BBox view_box;
  bool view_box_explicit = false;
  std::uint64_t source_hash = 0;
  AttributeList root_attributes;  // root <svg> attributes except viewBox
  std::vector<PassthroughNode> passthrough_nodes;
  std::vector<ParseWarning> warnings;

  const Element* find(std::string_view id) const;
  std::optional<size_t> index_of(std::string_view id) const;
};

// Throws Error(MalformedXml | UnsupportedRoot | EmptyDocument).
DesignDocument parse_svg(std::string_view bytes);

// Deterministic SVG text: attributes sorted (id first), numbers printed with
// at most six decimals.
std::string serialize_svg(const DesignDocument& doc);

// Markup of a single element as it appears in serialize_svg output.
std::string serialize_element(const Element& element);

// Estimated extent of a text element from font metrics: each code point
// advances 0.6 em, ascent 0.8 em, descent 0.2 em, and extra lines step by
// lineHeight em. Returned box is in the element's local coordinates.
BBox text_local_bounds(const TextGeometry& anchor, const StyleAttributes& style);

// Bounds of an element's geometry under its transform.
BBox element_bounds(const Element& element);

// Describes the first difference on ids, kinds, bboxes (within tolerance)
// and styles; nullopt when equivalent.
std::optional<std::string> compare_documents(const DesignDocument& a, const DesignDocument& b,
                                             double bbox_tolerance = 1e-6);

}  // namespace vst
