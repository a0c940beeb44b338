#pragma once

#include <bitset>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vst/document.hpp"

namespace vst {

enum class EdgeKind {
  SameFill,
  SameStroke,
  SameFontFamily,
  SameFontSize,
  SameShapeKind,
  Containment,
  AlignLeft,
  AlignRight,
  AlignTop,
  AlignBottom,
  AlignCenterX,
  AlignCenterY,
};

inline constexpr size_t kEdgeKindCount = 12;

using EdgeKindSet = std::bitset<kEdgeKindCount>;

inline EdgeKindSet all_edge_kinds() { return EdgeKindSet().set(); }

std::string_view edge_kind_name(EdgeKind kind);
std::optional<EdgeKind> parse_edge_kind(std::string_view text);

inline bool contains(const EdgeKindSet& set, EdgeKind kind) {
  return set.test(static_cast<size_t>(kind));
}

struct GraphConfig {
  double align_epsilon = 2.0;
  double contain_margin = 0.5;
  EdgeKindSet enabled_kinds = all_edge_kinds();

  // Throws Error(InvalidValue) on negative tolerances.
  void validate() const;

  friend bool operator==(const GraphConfig&, const GraphConfig&) = default;
};

// Edge between two elements, by paint index. For symmetric kinds `a` holds
// the element with the smaller id; for Containment `a` is the container.
struct Edge {
  size_t a = 0;
  size_t b = 0;
  EdgeKind kind = EdgeKind::SameFill;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct DesignGraph {
  std::uint64_t document_hash = 0;
  std::vector<std::string> element_ids;  // paint order
  std::vector<Edge> edges;
  // Indices into `edges` touching each element.
  std::vector<std::vector<size_t>> adjacency;

  // One "kind\tidA\tidB" line per edge, sorted.
  std::string dump() const;
};

// Kinds that hold between a and b. Containment is reported when a contains
// b; call with swapped arguments for the other direction.
EdgeKindSet edge_predicates(const Element& a, const Element& b, const GraphConfig& cfg);

DesignGraph build_graph(const DesignDocument& doc, const GraphConfig& cfg = {});

}  // namespace vst
