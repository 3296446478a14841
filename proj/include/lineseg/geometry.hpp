#pragma once

#include <optional>
#include <span>
#include <vector>

namespace lineseg {

// Image-space point, origin at the top-left corner, y grows downward.
struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

struct BoundingBox {
  Point min;
  Point max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double area() const { return width() * height(); }
  bool contains(const Point& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  bool overlaps(const BoundingBox& o) const {
    return min.x <= o.max.x && o.min.x <= max.x && min.y <= o.max.y && o.min.y <= max.y;
  }

  bool operator==(const BoundingBox&) const = default;
};

// Simple polygon without holes, implicitly closed.
//
// Construction normalizes the vertex list (drops a repeated closing vertex
// and consecutive duplicates, fixes orientation) and validates it: at least
// three distinct finite vertices are required. Self-intersecting input is
// repaired by keeping the largest piece of its even-odd filled region;
// repaired() reports whether that happened.
class Polygon {
 public:
  explicit Polygon(std::vector<Point> vertices);

  static Polygon rectangle(double x0, double y0, double x1, double y1);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool repaired() const { return repaired_; }

  // Vertex-wise equality; two polygons covering the same region with a
  // different starting vertex compare unequal.
  bool operator==(const Polygon& o) const { return vertices_ == o.vertices_; }

 private:
  struct Trusted {};
  Polygon(std::vector<Point> vertices, Trusted);
  friend Polygon make_trusted_polygon(std::vector<Point> vertices);

  std::vector<Point> vertices_;
  bool repaired_ = false;
};

// Coincidence tolerance for vertices, in pixels.
inline constexpr double kGeometryEpsilon = 1e-9;

double polygon_area(const Polygon& p);
double intersection_area(const Polygon& a, const Polygon& b);
double union_area(const Polygon& a, const Polygon& b);

// Throws GeometryError when the union of both polygons has zero area.
double polygon_iou(const Polygon& a, const Polygon& b);

// a \ b as hole-free simple polygons. An empty result means b consumes a.
std::vector<Polygon> polygon_difference(const Polygon& a, const Polygon& b);

// Shrinks p by d along inward normals (miter joins, limit 2). Returns
// nullopt when nothing is left; several surviving pieces keep the largest.
// Throws GeometryError unless d > 0.
std::optional<Polygon> inward_offset(const Polygon& p, double d);

// Throws GeometryError unless s > 0.
Polygon scale_polygon(const Polygon& p, double s);

Polygon translate_polygon(const Polygon& p, double dx, double dy);

BoundingBox to_bounding_box(const Polygon& p);
Polygon box_polygon(const BoundingBox& box);

// Minimum distance between the two boundaries; 0 when they touch or overlap.
double boundary_distance(const Polygon& a, const Polygon& b);

// Index of the largest-area polygon (first one on ties). Requires non-empty.
std::size_t largest_polygon(std::span<const Polygon> polygons);

}  // namespace lineseg
