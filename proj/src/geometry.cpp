#include "vst/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vst/error.hpp"
#include "vst/numeric.hpp"

namespace vst {

namespace {

constexpr double kPi = std::numbers::pi;

double radians(double degrees) { return degrees * kPi / 180.0; }

// Roots of a*t^2 + b*t + c in (0, 1).
void unit_quadratic_roots(double a, double b, double c, std::vector<double>& out) {
  constexpr double eps = 1e-12;
  if (std::abs(a) < eps) {
    if (std::abs(b) > eps) {
      double t = -c / b;
      if (t > 0 && t < 1) out.push_back(t);
    }
    return;
  }
  double disc = b * b - 4 * a * c;
  if (disc < 0) return;
  double sq = std::sqrt(disc);
  for (double t : {(-b + sq) / (2 * a), (-b - sq) / (2 * a)}) {
    if (t > 0 && t < 1) out.push_back(t);
  }
}

double cubic_at(double p0, double p1, double p2, double p3, double t) {
  double mt = 1 - t;
  return mt * mt * mt * p0 + 3 * mt * mt * t * p1 + 3 * mt * t * t * p2 + t * t * t * p3;
}

double quad_at(double p0, double p1, double p2, double t) {
  double mt = 1 - t;
  return mt * mt * p0 + 2 * mt * t * p1 + t * t * p2;
}

// Bezier control points are transformed first; affine maps preserve curves.
void add_cubic(BoundsAccumulator& acc, Point p0, Point p1, Point p2, Point p3) {
  acc.add(p0);
  acc.add(p3);
  std::vector<double> ts;
  unit_quadratic_roots(-p0.x + 3 * p1.x - 3 * p2.x + p3.x, 2 * (p0.x - 2 * p1.x + p2.x),
                       p1.x - p0.x, ts);
  unit_quadratic_roots(-p0.y + 3 * p1.y - 3 * p2.y + p3.y, 2 * (p0.y - 2 * p1.y + p2.y),
                       p1.y - p0.y, ts);
  for (double t : ts) {
    acc.add(Point{cubic_at(p0.x, p1.x, p2.x, p3.x, t), cubic_at(p0.y, p1.y, p2.y, p3.y, t)});
  }
}

void add_quad(BoundsAccumulator& acc, Point p0, Point p1, Point p2) {
  acc.add(p0);
  acc.add(p2);
  for (int axis = 0; axis < 2; ++axis) {
    double a0 = axis == 0 ? p0.x : p0.y;
    double a1 = axis == 0 ? p1.x : p1.y;
    double a2 = axis == 0 ? p2.x : p2.y;
    double denom = a0 - 2 * a1 + a2;
    if (std::abs(denom) < 1e-12) continue;
    double t = (a0 - a1) / denom;
    if (t > 0 && t < 1) {
      acc.add(Point{quad_at(p0.x, p1.x, p2.x, t), quad_at(p0.y, p1.y, p2.y, t)});
    }
  }
}

// Ellipse arc in local space: center + R(phi) * (rx cos t, ry sin t) for t
// from start to start + sweep. Extremes are found on the transformed curve.
void add_elliptic_arc(BoundsAccumulator& acc, const Affine& transform, Point center, double rx,
                      double ry, double phi, double start, double sweep) {
  double cp = std::cos(phi), sp = std::sin(phi);
  // Local ellipse map: u -> center + R(phi) diag(rx, ry) u, then transform.
  Affine local{cp * rx, sp * rx, -sp * ry, cp * ry, center.x, center.y};
  Affine m = transform * local;
  auto at = [&](double t) { return m.apply({std::cos(t), std::sin(t)}); };
  acc.add(at(start));
  acc.add(at(start + sweep));
  auto within = [&](double t) {
    // Is angle t on the swept interval?
    double rel = sweep >= 0 ? t - start : start - t;
    rel = std::fmod(rel, 2 * kPi);
    if (rel < 0) rel += 2 * kPi;
    return rel <= std::abs(sweep);
  };
  bool full = std::abs(sweep) >= 2 * kPi - 1e-12;
  // x(t) = e + a cos t + c sin t, y(t) = f + b cos t + d sin t.
  for (double base : {std::atan2(m.c, m.a), std::atan2(m.d, m.b)}) {
    for (double t : {base, base + kPi}) {
      if (full || within(t)) acc.add(at(t));
    }
  }
}

struct ArcCenter {
  Point center;
  double rx, ry, phi, start, sweep;
};

// Endpoint to center parameterization for SVG arcs, with out-of-range
// radii scaled up as SVG requires. Returns false for degenerate arcs that
// render as straight lines.
bool arc_to_center(Point p0, const PathSegment& seg, ArcCenter& out) {
  double rx = std::abs(seg.args[0]);
  double ry = std::abs(seg.args[1]);
  double phi = radians(seg.args[2]);
  bool large = seg.args[3] != 0.0;
  bool sweep_flag = seg.args[4] != 0.0;
  Point p1{seg.args[5], seg.args[6]};
  if (rx == 0 || ry == 0) return false;
  if (p0 == p1) return false;
  double cp = std::cos(phi), sp = std::sin(phi);
  double dx = (p0.x - p1.x) / 2, dy = (p0.y - p1.y) / 2;
  double x1p = cp * dx + sp * dy;
  double y1p = -sp * dx + cp * dy;
  double lambda = (x1p * x1p) / (rx * rx) + (y1p * y1p) / (ry * ry);
  if (lambda > 1) {
    double s = std::sqrt(lambda);
    rx *= s;
    ry *= s;
  }
  double num = rx * rx * ry * ry - rx * rx * y1p * y1p - ry * ry * x1p * x1p;
  double den = rx * rx * y1p * y1p + ry * ry * x1p * x1p;
  double coef = den == 0 ? 0 : std::sqrt(std::max(0.0, num / den));
  if (large == sweep_flag) coef = -coef;
  double cxp = coef * rx * y1p / ry;
  double cyp = -coef * ry * x1p / rx;
  Point c{cp * cxp - sp * cyp + (p0.x + p1.x) / 2, sp * cxp + cp * cyp + (p0.y + p1.y) / 2};
  auto angle = [](double ux, double uy, double vx, double vy) {
    return std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
  };
  double ux = (x1p - cxp) / rx, uy = (y1p - cyp) / ry;
  double vx = (-x1p - cxp) / rx, vy = (-y1p - cyp) / ry;
  double start = angle(1, 0, ux, uy);
  double delta = angle(ux, uy, vx, vy);
  if (!sweep_flag && delta > 0) delta -= 2 * kPi;
  if (sweep_flag && delta < 0) delta += 2 * kPi;
  out = {c, rx, ry, phi, start, delta};
  return true;
}

void add_path(BoundsAccumulator& acc, const std::vector<PathSegment>& segments,
              const Affine& t) {
  Point current{}, subpath_start{};
  for (const auto& seg : segments) {
    const auto& a = seg.args;
    switch (seg.command) {
      case PathCommand::MoveTo:
        current = subpath_start = {a[0], a[1]};
        acc.add(t.apply(current));
        break;
      case PathCommand::LineTo:
        current = {a[0], a[1]};
        acc.add(t.apply(current));
        break;
      case PathCommand::CubicTo:
        add_cubic(acc, t.apply(current), t.apply({a[0], a[1]}), t.apply({a[2], a[3]}),
                  t.apply({a[4], a[5]}));
        current = {a[4], a[5]};
        break;
      case PathCommand::QuadTo:
        add_quad(acc, t.apply(current), t.apply({a[0], a[1]}), t.apply({a[2], a[3]}));
        current = {a[2], a[3]};
        break;
      case PathCommand::ArcTo: {
        ArcCenter arc{};
        if (arc_to_center(current, seg, arc)) {
          add_elliptic_arc(acc, t, arc.center, arc.rx, arc.ry, arc.phi, arc.start, arc.sweep);
        }
        current = {a[5], a[6]};
        acc.add(t.apply(current));
        break;
      }
      case PathCommand::Close:
        current = subpath_start;
        break;
    }
  }
}

std::vector<PathSegment> rounded_rect_outline(const RectGeometry& r) {
  double rx = std::min(r.rx, r.width / 2), ry = std::min(r.ry, r.height / 2);
  auto seg = [](PathCommand cmd, std::initializer_list<double> values) {
    PathSegment s;
    s.command = cmd;
    std::copy(values.begin(), values.end(), s.args.begin());
    return s;
  };
  double x0 = r.x, y0 = r.y, x1 = r.x + r.width, y1 = r.y + r.height;
  return {
      seg(PathCommand::MoveTo, {x0 + rx, y0}),
      seg(PathCommand::LineTo, {x1 - rx, y0}),
      seg(PathCommand::ArcTo, {rx, ry, 0, 0, 1, x1, y0 + ry}),
      seg(PathCommand::LineTo, {x1, y1 - ry}),
      seg(PathCommand::ArcTo, {rx, ry, 0, 0, 1, x1 - rx, y1}),
      seg(PathCommand::LineTo, {x0 + rx, y1}),
      seg(PathCommand::ArcTo, {rx, ry, 0, 0, 1, x0, y1 - ry}),
      seg(PathCommand::LineTo, {x0, y0 + ry}),
      seg(PathCommand::ArcTo, {rx, ry, 0, 0, 1, x0 + rx, y0}),
      seg(PathCommand::Close, {}),
  };
}

}  // namespace

Affine Affine::rotate_degrees(double degrees) {
  double r = radians(degrees);
  double cs = std::cos(r), sn = std::sin(r);
  return {cs, sn, -sn, cs, 0, 0};
}

Affine Affine::skew_x_degrees(double degrees) { return {1, 0, std::tan(radians(degrees)), 1, 0, 0}; }

Affine Affine::skew_y_degrees(double degrees) { return {1, std::tan(radians(degrees)), 0, 1, 0, 0}; }

bool Affine::is_identity() const { return *this == Affine{}; }

Affine operator*(const Affine& l, const Affine& r) {
  return {l.a * r.a + l.c * r.b,       l.b * r.a + l.d * r.b,
          l.a * r.c + l.c * r.d,       l.b * r.c + l.d * r.d,
          l.a * r.e + l.c * r.f + l.e, l.b * r.e + l.d * r.f + l.f};
}

void BoundsAccumulator::add(Point p) {
  if (empty_) {
    min_x_ = max_x_ = p.x;
    min_y_ = max_y_ = p.y;
    empty_ = false;
    return;
  }
  min_x_ = std::min(min_x_, p.x);
  max_x_ = std::max(max_x_, p.x);
  min_y_ = std::min(min_y_, p.y);
  max_y_ = std::max(max_y_, p.y);
}

void BoundsAccumulator::add(const BBox& box) {
  add(Point{box.x, box.y});
  add(Point{box.right(), box.bottom()});
}

BBox BoundsAccumulator::box() const {
  if (empty_) return {};
  return {min_x_, min_y_, max_x_ - min_x_, max_y_ - min_y_};
}

BBox geometry_bounds(const Geometry& geometry, const Affine& t) {
  BoundsAccumulator acc;
  auto add_box = [&](double x, double y, double w, double h) {
    acc.add(t.apply({x, y}));
    acc.add(t.apply({x + w, y}));
    acc.add(t.apply({x, y + h}));
    acc.add(t.apply({x + w, y + h}));
  };
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, RectGeometry>) {
          if (g.rx > 0 && g.ry > 0) {
            add_path(acc, rounded_rect_outline(g), t);
          } else {
            add_box(g.x, g.y, g.width, g.height);
          }
        } else if constexpr (std::is_same_v<G, CircleGeometry>) {
          add_elliptic_arc(acc, t, {g.cx, g.cy}, g.r, g.r, 0, 0, 2 * kPi);
        } else if constexpr (std::is_same_v<G, EllipseGeometry>) {
          add_elliptic_arc(acc, t, {g.cx, g.cy}, g.rx, g.ry, 0, 0, 2 * kPi);
        } else if constexpr (std::is_same_v<G, LineGeometry>) {
          acc.add(t.apply({g.x1, g.y1}));
          acc.add(t.apply({g.x2, g.y2}));
        } else if constexpr (std::is_same_v<G, PolyGeometry>) {
          for (auto p : g.points) acc.add(t.apply(p));
        } else if constexpr (std::is_same_v<G, PathGeometry>) {
          add_path(acc, g.segments, t);
        } else if constexpr (std::is_same_v<G, TextGeometry>) {
          acc.add(t.apply({g.x, g.y}));
        } else if constexpr (std::is_same_v<G, ImageGeometry>) {
          add_box(g.x, g.y, g.width, g.height);
        }
      },
      geometry);
  return acc.box();
}

namespace {

bool is_ws(char ch) { return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == ','; }

void skip_ws(std::string_view& s) {
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
}

// Arc flags may be written without separators ("a1 1 0 00 1 1").
std::optional<double> consume_flag(std::string_view& s) {
  skip_ws(s);
  if (s.empty() || (s.front() != '0' && s.front() != '1')) return std::nullopt;
  double v = s.front() == '1' ? 1.0 : 0.0;
  s.remove_prefix(1);
  return v;
}

[[noreturn]] void path_error(std::string_view data) {
  throw Error(ErrorCode::InvalidValue, "invalid path data: " + std::string(data.substr(0, 40)));
}

}  // namespace

std::vector<PathSegment> parse_path_data(std::string_view data) {
  std::vector<PathSegment> out;
  std::string_view s = data;
  Point current{}, start{};
  Point last_cubic_ctrl{}, last_quad_ctrl{};
  char prev_cmd = 0;
  char cmd = 0;
  auto number = [&]() {
    auto v = consume_number(s);
    if (!v) path_error(data);
    return *v;
  };
  auto push = [&](PathCommand c, std::initializer_list<double> values) {
    PathSegment seg;
    seg.command = c;
    std::copy(values.begin(), values.end(), seg.args.begin());
    out.push_back(seg);
  };
  while (true) {
    skip_ws(s);
    if (s.empty()) break;
    char ch = s.front();
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      cmd = ch;
      s.remove_prefix(1);
    } else if (cmd == 0 || cmd == 'Z' || cmd == 'z') {
      path_error(data);
    } else if (cmd == 'M') {
      cmd = 'L';
    } else if (cmd == 'm') {
      cmd = 'l';
    }
    bool rel = std::islower(static_cast<unsigned char>(cmd)) != 0;
    double ox = rel ? current.x : 0.0, oy = rel ? current.y : 0.0;
    switch (std::toupper(static_cast<unsigned char>(cmd))) {
      case 'M': {
        double x = number() + ox, y = number() + oy;
        current = start = {x, y};
        push(PathCommand::MoveTo, {x, y});
        break;
      }
      case 'L': {
        double x = number() + ox, y = number() + oy;
        current = {x, y};
        push(PathCommand::LineTo, {x, y});
        break;
      }
      case 'H': {
        double x = number() + ox;
        current.x = x;
        push(PathCommand::LineTo, {current.x, current.y});
        break;
      }
      case 'V': {
        double y = number() + oy;
        current.y = y;
        push(PathCommand::LineTo, {current.x, current.y});
        break;
      }
      case 'C': {
        double x1 = number() + ox, y1 = number() + oy, x2 = number() + ox, y2 = number() + oy;
        double x = number() + ox, y = number() + oy;
        push(PathCommand::CubicTo, {x1, y1, x2, y2, x, y});
        last_cubic_ctrl = {x2, y2};
        current = {x, y};
        break;
      }
      case 'S': {
        Point c1 = current;
        char p = static_cast<char>(std::toupper(static_cast<unsigned char>(prev_cmd)));
        if (p == 'C' || p == 'S') {
          c1 = {2 * current.x - last_cubic_ctrl.x, 2 * current.y - last_cubic_ctrl.y};
        }
        double x2 = number() + ox, y2 = number() + oy, x = number() + ox, y = number() + oy;
        push(PathCommand::CubicTo, {c1.x, c1.y, x2, y2, x, y});
        last_cubic_ctrl = {x2, y2};
        current = {x, y};
        break;
      }
      case 'Q': {
        double x1 = number() + ox, y1 = number() + oy, x = number() + ox, y = number() + oy;
        push(PathCommand::QuadTo, {x1, y1, x, y});
        last_quad_ctrl = {x1, y1};
        current = {x, y};
        break;
      }
      case 'T': {
        Point c1 = current;
        char p = static_cast<char>(std::toupper(static_cast<unsigned char>(prev_cmd)));
        if (p == 'Q' || p == 'T') {
          c1 = {2 * current.x - last_quad_ctrl.x, 2 * current.y - last_quad_ctrl.y};
        }
        double x = number() + ox, y = number() + oy;
        push(PathCommand::QuadTo, {c1.x, c1.y, x, y});
        last_quad_ctrl = c1;
        current = {x, y};
        break;
      }
      case 'A': {
        double rx = number(), ry = number(), rot = number();
        auto large = consume_flag(s);
        auto sweep = consume_flag(s);
        if (!large || !sweep) path_error(data);
        double x = number() + ox, y = number() + oy;
        push(PathCommand::ArcTo, {rx, ry, rot, *large, *sweep, x, y});
        current = {x, y};
        break;
      }
      case 'Z':
        push(PathCommand::Close, {});
        current = start;
        break;
      default:
        path_error(data);
    }
    prev_cmd = cmd;
  }
  if (!out.empty() && out.front().command != PathCommand::MoveTo) path_error(data);
  return out;
}

Affine parse_transform(std::string_view text) {
  Affine result;
  std::string_view s = text;
  auto fail = [&]() -> Affine {
    throw Error(ErrorCode::InvalidValue, "invalid transform: " + std::string(text));
  };
  while (true) {
    skip_ws(s);
    if (s.empty()) break;
    size_t open = s.find('(');
    if (open == std::string_view::npos) fail();
    std::string_view name = trim(s.substr(0, open));
    size_t close = s.find(')', open);
    if (close == std::string_view::npos) fail();
    std::string_view args_text = s.substr(open + 1, close - open - 1);
    std::vector<double> args;
    while (true) {
      auto v = consume_number(args_text);
      if (!v) break;
      args.push_back(*v);
    }
    skip_ws(args_text);
    if (!args_text.empty()) fail();
    Affine m;
    if (name == "matrix" && args.size() == 6) {
      m = {args[0], args[1], args[2], args[3], args[4], args[5]};
    } else if (name == "translate" && (args.size() == 1 || args.size() == 2)) {
      m = Affine::translate(args[0], args.size() == 2 ? args[1] : 0.0);
    } else if (name == "scale" && (args.size() == 1 || args.size() == 2)) {
      m = Affine::scale(args[0], args.size() == 2 ? args[1] : args[0]);
    } else if (name == "rotate" && (args.size() == 1 || args.size() == 3)) {
      m = Affine::rotate_degrees(args[0]);
      if (args.size() == 3) {
        m = Affine::translate(args[1], args[2]) * m * Affine::translate(-args[1], -args[2]);
      }
    } else if (name == "skewX" && args.size() == 1) {
      m = Affine::skew_x_degrees(args[0]);
    } else if (name == "skewY" && args.size() == 1) {
      m = Affine::skew_y_degrees(args[0]);
    } else {
      fail();
    }
    result = result * m;
    s.remove_prefix(close + 1);
  }
  return result;
}

}  // namespace vst
