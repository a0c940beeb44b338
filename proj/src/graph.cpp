#include "vst/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "vst/error.hpp"

namespace vst {

namespace {

constexpr std::array<std::string_view, kEdgeKindCount> kEdgeKindNames = {
    "SameFill",   "SameStroke", "SameFontFamily", "SameFontSize", "SameShapeKind", "Containment",
    "AlignLeft",  "AlignRight", "AlignTop",       "AlignBottom",  "AlignCenterX",  "AlignCenterY",
};

constexpr double kFontSizeTolerance = 1e-6;

bool same_paint(const Paint& a, const Paint& b) { return a && b && *a == *b; }

bool near(double a, double b, double eps) { return std::abs(a - b) <= eps; }

bool contains_box(const BBox& outer, const BBox& inner, double margin) {
  return inner.x >= outer.x - margin && inner.y >= outer.y - margin &&
         inner.right() <= outer.right() + margin && inner.bottom() <= outer.bottom() + margin;
}

bool is_symmetric(EdgeKind kind) { return kind != EdgeKind::Containment; }

}  // namespace

std::string_view edge_kind_name(EdgeKind kind) {
  return kEdgeKindNames[static_cast<size_t>(kind)];
}

std::optional<EdgeKind> parse_edge_kind(std::string_view text) {
  for (size_t i = 0; i < kEdgeKindCount; ++i) {
    if (kEdgeKindNames[i] == text) return static_cast<EdgeKind>(i);
  }
  return std::nullopt;
}

void GraphConfig::validate() const {
  if (!(align_epsilon >= 0.0) || !std::isfinite(align_epsilon)) {
    throw Error(ErrorCode::InvalidValue, "alignEpsilon must be a finite value >= 0");
  }
  if (!(contain_margin >= 0.0) || !std::isfinite(contain_margin)) {
    throw Error(ErrorCode::InvalidValue, "containMargin must be a finite value >= 0");
  }
}

EdgeKindSet edge_predicates(const Element& a, const Element& b, const GraphConfig& cfg) {
  EdgeKindSet out;
  auto put = [&](EdgeKind kind, bool holds) {
    if (holds && contains(cfg.enabled_kinds, kind)) out.set(static_cast<size_t>(kind));
  };

  put(EdgeKind::SameFill, same_paint(a.style.fill, b.style.fill));
  put(EdgeKind::SameStroke, same_paint(a.style.stroke, b.style.stroke));
  if (a.style.text && b.style.text) {
    const TextStyle& ta = *a.style.text;
    const TextStyle& tb = *b.style.text;
    put(EdgeKind::SameFontFamily, ta.font_family && tb.font_family && *ta.font_family == *tb.font_family);
    put(EdgeKind::SameFontSize, near(ta.font_size, tb.font_size, kFontSizeTolerance));
  }
  put(EdgeKind::SameShapeKind,
      a.kind == b.kind && (a.kind == ElementKind::Shape || a.kind == ElementKind::Path));
  put(EdgeKind::Containment,
      contains_box(a.bbox, b.bbox, cfg.contain_margin) && a.bbox.area() > b.bbox.area());

  const BBox& p = a.bbox;
  const BBox& q = b.bbox;
  const double eps = cfg.align_epsilon;
  put(EdgeKind::AlignLeft, near(p.x, q.x, eps));
  put(EdgeKind::AlignRight, near(p.right(), q.right(), eps));
  put(EdgeKind::AlignTop, near(p.y, q.y, eps));
  put(EdgeKind::AlignBottom, near(p.bottom(), q.bottom(), eps));
  put(EdgeKind::AlignCenterX, near(p.center_x(), q.center_x(), eps));
  put(EdgeKind::AlignCenterY, near(p.center_y(), q.center_y(), eps));
  return out;
}

DesignGraph build_graph(const DesignDocument& doc, const GraphConfig& cfg) {
  cfg.validate();
  DesignGraph graph;
  graph.document_hash = doc.source_hash;
  const size_t n = doc.elements.size();
  graph.element_ids.reserve(n);
  for (const Element& e : doc.elements) graph.element_ids.push_back(e.id);
  graph.adjacency.resize(n);

  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const Element& ei = doc.elements[i];
      const Element& ej = doc.elements[j];
      const EdgeKindSet forward = edge_predicates(ei, ej, cfg);
      const bool i_first = ei.id < ej.id;
      for (size_t k = 0; k < kEdgeKindCount; ++k) {
        if (!forward.test(k)) continue;
        auto kind = static_cast<EdgeKind>(k);
        if (is_symmetric(kind)) {
          graph.edges.push_back(i_first ? Edge{i, j, kind} : Edge{j, i, kind});
        } else {
          graph.edges.push_back({i, j, kind});
        }
      }
      if (contains(cfg.enabled_kinds, EdgeKind::Containment)) {
        const EdgeKindSet backward = edge_predicates(ej, ei, cfg);
        if (backward.test(static_cast<size_t>(EdgeKind::Containment))) {
          graph.edges.push_back({j, i, EdgeKind::Containment});
        }
      }
    }
  }

  for (size_t idx = 0; idx < graph.edges.size(); ++idx) {
    graph.adjacency[graph.edges[idx].a].push_back(idx);
    graph.adjacency[graph.edges[idx].b].push_back(idx);
  }
  return graph;
}

std::string DesignGraph::dump() const {
  std::vector<std::string> lines;
  lines.reserve(edges.size());
  for (const Edge& e : edges) {
    std::string line(edge_kind_name(e.kind));
    line += '\t';
    line += element_ids[e.a];
    line += '\t';
    line += element_ids[e.b];
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace vst
