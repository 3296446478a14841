#include "lineseg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "lineseg/error.hpp"
#include "geometry_internal.hpp"

namespace lineseg {

namespace {

bool near(const Point& a, const Point& b) {
  return std::abs(a.x - b.x) <= kGeometryEpsilon && std::abs(a.y - b.y) <= kGeometryEpsilon;
}

// Drops the closing vertex and consecutive duplicates.
std::vector<Point> dedupe(std::vector<Point> in) {
  std::vector<Point> out;
  out.reserve(in.size());
  for (const auto& p : in) {
    if (out.empty() || !near(out.back(), p)) out.push_back(p);
  }
  while (out.size() > 1 && near(out.front(), out.back())) out.pop_back();
  return out;
}

double signed_area(const std::vector<Point>& v) {
  double acc = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    acc += a.x * b.y - b.x * a.y;
  }
  return 0.5 * acc;
}

bool collinear(const std::vector<Point>& v) {
  const Point& o = v[0];
  const Point& d = v[1];
  const double len = std::hypot(d.x - o.x, d.y - o.y);
  for (std::size_t i = 2; i < v.size(); ++i) {
    const double cross = (d.x - o.x) * (v[i].y - o.y) - (d.y - o.y) * (v[i].x - o.x);
    if (std::abs(cross) > kGeometryEpsilon * len) return false;
  }
  return true;
}

BgPolygon ring_to_bg(const std::vector<Point>& v) {
  BgPolygon poly;
  auto& ring = poly.outer();
  ring.reserve(v.size() + 1);
  for (const auto& p : v) ring.emplace_back(p.x, p.y);
  ring.emplace_back(v.front().x, v.front().y);
  bg::correct(poly);
  return poly;
}

std::vector<Point> ring_points(const BgPolygon::ring_type& ring) {
  std::vector<Point> v;
  v.reserve(ring.size());
  for (const auto& p : ring) v.push_back({p.x(), p.y()});
  return dedupe(std::move(v));
}

// Even-odd region of an arbitrary closed vertex loop. A point lies in the
// even-odd interior iff it is covered by an odd number of the fan triangles
// (v0, vi, vi+1), so the region is the symmetric difference of those
// triangles.
BgMultiPolygon even_odd_region(const std::vector<Point>& v) {
  BgMultiPolygon acc;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    std::vector<Point> tri{v[0], v[i], v[i + 1]};
    if (std::abs(signed_area(tri)) < 1e-12) continue;
    BgPolygon t = ring_to_bg(tri);
    BgMultiPolygon next;
    bg::sym_difference(acc, t, next);
    acc = std::move(next);
  }
  return acc;
}

std::size_t largest_piece(const BgMultiPolygon& mp) {
  std::size_t best = 0;
  double best_area = -1.0;
  for (std::size_t i = 0; i < mp.size(); ++i) {
    double a = bg::area(mp[i]);
    if (a > best_area) {
      best_area = a;
      best = i;
    }
  }
  return best;
}

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const bg::exception& e) {
    throw GeometryError(fmt::format("polygon clipping failed: {}", e.what()));
  }
}

void collect_hole_free(const BgPolygon& piece, std::vector<Polygon>& out) {
  if (bg::area(piece) < 1e-12) return;
  if (piece.inners().empty()) {
    auto pts = ring_points(piece.outer());
    if (pts.size() >= 3) out.push_back(make_trusted_polygon(std::move(pts)));
    return;
  }
  // Cut vertically through the first hole. The hole's interior projects onto
  // the open interval (min x, max x), so the midpoint line crosses it.
  BgBox hole_box;
  bg::envelope(piece.inners().front(), hole_box);
  BgBox piece_box;
  bg::envelope(piece, piece_box);
  const double cut = 0.5 * (hole_box.min_corner().x() + hole_box.max_corner().x());
  const double y0 = piece_box.min_corner().y() - 1.0;
  const double y1 = piece_box.max_corner().y() + 1.0;
  BgBox left{{piece_box.min_corner().x() - 1.0, y0}, {cut, y1}};
  BgBox right{{cut, y0}, {piece_box.max_corner().x() + 1.0, y1}};
  for (const auto& half : {left, right}) {
    BgMultiPolygon parts;
    bg::intersection(piece, half, parts);
    for (const auto& part : parts) collect_hole_free(part, out);
  }
}

}  // namespace

Polygon make_trusted_polygon(std::vector<Point> vertices) {
  return Polygon(std::move(vertices), Polygon::Trusted{});
}

Polygon::Polygon(std::vector<Point> vertices, Trusted) : vertices_(std::move(vertices)) {}

Polygon::Polygon(std::vector<Point> vertices) {
  for (const auto& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw GeometryError("polygon vertex has a non-finite coordinate");
    }
  }
  auto v = dedupe(std::move(vertices));
  if (v.size() < 3) {
    throw GeometryError(
        fmt::format("degenerate polygon: {} distinct vertices, need at least 3", v.size()));
  }
  if (collinear(v)) {
    // Zero-area outline: kept verbatim, boolean operations treat it as empty.
    vertices_ = std::move(v);
    return;
  }
  BgPolygon poly = ring_to_bg(v);
  bg::validity_failure_type failure{};
  if (bg::is_valid(poly, failure)) {
    vertices_ = ring_points(poly.outer());
    return;
  }
  BgMultiPolygon region = guarded([&] { return even_odd_region(v); });
  if (region.empty()) throw GeometryError("self-intersecting polygon has an empty interior");
  auto pts = ring_points(region[largest_piece(region)].outer());
  if (pts.size() < 3) throw GeometryError("self-intersecting polygon has an empty interior");
  vertices_ = std::move(pts);
  repaired_ = true;
}

Polygon Polygon::rectangle(double x0, double y0, double x1, double y1) {
  if (x1 < x0) std::swap(x0, x1);
  if (y1 < y0) std::swap(y0, y1);
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

BgPolygon to_bg(const Polygon& p) {
  BgPolygon poly;
  auto& ring = poly.outer();
  const auto& v = p.vertices();
  ring.reserve(v.size() + 1);
  for (const auto& q : v) ring.emplace_back(q.x, q.y);
  ring.emplace_back(v.front().x, v.front().y);
  bg::correct(poly);
  return poly;
}

Polygon from_bg_ring(const BgPolygon::ring_type& ring) {
  return make_trusted_polygon(ring_points(ring));
}

double polygon_area(const Polygon& p) {
  if (p.size() < 3) throw GeometryError("degenerate polygon");
  return std::abs(signed_area(p.vertices()));
}

double intersection_area(const Polygon& a_in, const Polygon& b_in) {
  // Canonical argument order makes the result exactly symmetric.
  const bool swap = std::lexicographical_compare(
      b_in.vertices().begin(), b_in.vertices().end(), a_in.vertices().begin(), a_in.vertices().end(),
      [](const Point& l, const Point& r) { return l.x < r.x || (l.x == r.x && l.y < r.y); });
  const Polygon& a = swap ? b_in : a_in;
  const Polygon& b = swap ? a_in : b_in;
  if (!to_bounding_box(a).overlaps(to_bounding_box(b))) return 0.0;
  if (polygon_area(a) == 0.0 || polygon_area(b) == 0.0) return 0.0;
  return guarded([&] {
    BgMultiPolygon out;
    bg::intersection(to_bg(a), to_bg(b), out);
    return bg::area(out);
  });
}

double union_area(const Polygon& a, const Polygon& b) {
  return polygon_area(a) + polygon_area(b) - intersection_area(a, b);
}

double polygon_iou(const Polygon& a, const Polygon& b) {
  const double area_a = polygon_area(a);
  const double area_b = polygon_area(b);
  const double inter = intersection_area(a, b);
  const double uni = area_a + area_b - inter;
  if (uni <= 0.0) throw GeometryError("IoU undefined: both polygons have zero area");
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::vector<Polygon> polygon_difference(const Polygon& a, const Polygon& b) {
  if (!to_bounding_box(a).overlaps(to_bounding_box(b)) || polygon_area(b) == 0.0) return {a};
  return guarded([&] {
    BgMultiPolygon out;
    bg::difference(to_bg(a), to_bg(b), out);
    std::vector<Polygon> pieces;
    for (const auto& piece : out) collect_hole_free(piece, pieces);
    return pieces;
  });
}

std::optional<Polygon> inward_offset(const Polygon& p, double d) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw GeometryError(fmt::format("inward offset distance must be positive, got {}", d));
  }
  if (polygon_area(p) == 0.0) return std::nullopt;
  return guarded([&]() -> std::optional<Polygon> {
    bg::strategy::buffer::distance_symmetric<double> distance(-d);
    bg::strategy::buffer::join_miter join(2.0);
    bg::strategy::buffer::end_flat end;
    bg::strategy::buffer::point_circle circle(8);
    bg::strategy::buffer::side_straight side;
    BgMultiPolygon out;
    bg::buffer(to_bg(p), out, distance, side, join, end, circle);
    std::vector<Polygon> pieces;
    for (const auto& piece : out) collect_hole_free(piece, pieces);
    if (pieces.empty()) return std::nullopt;
    return pieces[largest_polygon(pieces)];
  });
}

Polygon scale_polygon(const Polygon& p, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw GeometryError(fmt::format("scale factor must be positive, got {}", s));
  }
  std::vector<Point> v = p.vertices();
  for (auto& q : v) {
    q.x *= s;
    q.y *= s;
  }
  return make_trusted_polygon(std::move(v));
}

Polygon translate_polygon(const Polygon& p, double dx, double dy) {
  std::vector<Point> v = p.vertices();
  for (auto& q : v) {
    q.x += dx;
    q.y += dy;
  }
  return make_trusted_polygon(std::move(v));
}

BoundingBox to_bounding_box(const Polygon& p) {
  const auto& v = p.vertices();
  BoundingBox box{v.front(), v.front()};
  for (const auto& q : v) {
    box.min.x = std::min(box.min.x, q.x);
    box.min.y = std::min(box.min.y, q.y);
    box.max.x = std::max(box.max.x, q.x);
    box.max.y = std::max(box.max.y, q.y);
  }
  return box;
}

Polygon box_polygon(const BoundingBox& box) {
  if (box.width() <= 0.0 || box.height() <= 0.0) {
    throw GeometryError("bounding box has zero extent");
  }
  return Polygon::rectangle(box.min.x, box.min.y, box.max.x, box.max.y);
}

double boundary_distance(const Polygon& a, const Polygon& b) {
  return guarded([&] { return bg::distance(to_bg(a), to_bg(b)); });
}

std::size_t largest_polygon(std::span<const Polygon> polygons) {
  if (polygons.empty()) throw GeometryError("largest_polygon: empty input");
  std::size_t best = 0;
  double best_area = polygon_area(polygons[0]);
  for (std::size_t i = 1; i < polygons.size(); ++i) {
    double a = polygon_area(polygons[i]);
    if (a > best_area) {
      best_area = a;
      best = i;
    }
  }
  return best;
}

}  // namespace lineseg
