#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace vst {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Row-major 2x3 affine matrix in SVG order: matrix(a b c d e f) maps
// (x, y) to (a*x + c*y + e, b*x + d*y + f).
struct Affine {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0, e = 0.0, f = 0.0;

  static Affine translate(double tx, double ty) { return {1, 0, 0, 1, tx, ty}; }
  static Affine scale(double sx, double sy) { return {sx, 0, 0, sy, 0, 0}; }
  static Affine rotate_degrees(double degrees);
  static Affine skew_x_degrees(double degrees);
  static Affine skew_y_degrees(double degrees);

  Point apply(Point p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }
  // Linear part only.
  Point apply_vector(Point v) const { return {a * v.x + c * v.y, b * v.x + d * v.y}; }
  bool is_identity() const;

  friend bool operator==(const Affine&, const Affine&) = default;
};

// this * rhs: rhs applied first.
Affine operator*(const Affine& lhs, const Affine& rhs);

struct BBox {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  double right() const { return x + width; }
  double bottom() const { return y + height; }
  double center_x() const { return x + width / 2.0; }
  double center_y() const { return y + height / 2.0; }
  double area() const { return width * height; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Accumulates points into an axis-aligned box.
class BoundsAccumulator {
 public:
  void add(Point p);
  void add(const BBox& box);
  bool empty() const { return empty_; }
  BBox box() const;

 private:
  bool empty_ = true;
  double min_x_ = 0, min_y_ = 0, max_x_ = 0, max_y_ = 0;
};

enum class PathCommand { MoveTo, LineTo, CubicTo, QuadTo, ArcTo, Close };

// Absolute, normalized path segment. H/V become LineTo, S/T become
// CubicTo/QuadTo with the reflected control point made explicit.
struct PathSegment {
  PathCommand command = PathCommand::MoveTo;
  // MoveTo/LineTo: x y
  // CubicTo: x1 y1 x2 y2 x y
  // QuadTo: x1 y1 x y
  // ArcTo: rx ry rotation large_arc sweep x y
  std::array<double, 7> args{};

  friend bool operator==(const PathSegment&, const PathSegment&) = default;
};

struct RectGeometry {
  double x = 0, y = 0, width = 0, height = 0, rx = 0, ry = 0;
  friend bool operator==(const RectGeometry&, const RectGeometry&) = default;
};
struct CircleGeometry {
  double cx = 0, cy = 0, r = 0;
  friend bool operator==(const CircleGeometry&, const CircleGeometry&) = default;
};
struct EllipseGeometry {
  double cx = 0, cy = 0, rx = 0, ry = 0;
  friend bool operator==(const EllipseGeometry&, const EllipseGeometry&) = default;
};
struct LineGeometry {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  friend bool operator==(const LineGeometry&, const LineGeometry&) = default;
};
struct PolyGeometry {
  std::vector<Point> points;
  bool closed = false;  // polygon vs polyline
  friend bool operator==(const PolyGeometry&, const PolyGeometry&) = default;
};
struct PathGeometry {
  std::vector<PathSegment> segments;
  friend bool operator==(const PathGeometry&, const PathGeometry&) = default;
};
// Anchor point of the first baseline; extent comes from text metrics.
struct TextGeometry {
  double x = 0, y = 0;
  friend bool operator==(const TextGeometry&, const TextGeometry&) = default;
};
struct ImageGeometry {
  double x = 0, y = 0, width = 0, height = 0;
  friend bool operator==(const ImageGeometry&, const ImageGeometry&) = default;
};

using Geometry = std::variant<RectGeometry, CircleGeometry, EllipseGeometry, LineGeometry,
                              PolyGeometry, PathGeometry, TextGeometry, ImageGeometry>;

// Tight axis-aligned bounds of the painted outline (stroke excluded) after
// applying `transform`. Curves and arcs are bounded analytically. Text
// geometry contributes only its anchor point here.
BBox geometry_bounds(const Geometry& geometry, const Affine& transform);

// Parses SVG path data into normalized absolute segments.
// Throws Error(InvalidValue) on syntax errors.
std::vector<PathSegment> parse_path_data(std::string_view data);

// Parses an SVG transform list; throws Error(InvalidValue) on syntax errors.
Affine parse_transform(std::string_view text);

}  // namespace vst
