#pragma once

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>

#include "lineseg/geometry.hpp"

namespace lineseg {

namespace bg = boost::geometry;

using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint>;
using BgMultiPolygon = bg::model::multi_polygon<BgPolygon>;
using BgBox = bg::model::box<BgPoint>;

BgPolygon to_bg(const Polygon& p);

// Builds a Polygon from a ring already known to be simple and hole-free
// (Boost.Geometry output). Skips self-intersection checks.
Polygon make_trusted_polygon(std::vector<Point> vertices);

Polygon from_bg_ring(const BgPolygon::ring_type& ring);

}  // namespace lineseg
