#include <algorithm>
#include <cmath>

#include "lineseg/kernels.hpp"

namespace lineseg::kernels {

EdgeTable make_edge_table(const Polygon& p) {
  EdgeTable t;
  const auto& v = p.vertices();
  t.edges.reserve(v.size());
  t.min_y = v.front().y;
  t.max_y = v.front().y;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    t.min_y = std::min(t.min_y, a.y);
    t.max_y = std::max(t.max_y, a.y);
    if (a.y == b.y) continue;  // horizontal edges never cross a scanline
    t.edges.push_back({a.x, a.y, b.x, b.y});
  }
  return t;
}

namespace detail {

void fill_row(std::span<const EdgeTable> polygons, int y, std::span<std::uint8_t> row,
              std::vector<double>& crossings) {
  const double yc = y + 0.5;
  const int width = static_cast<int>(row.size());
  for (const auto& poly : polygons) {
    if (yc < poly.min_y || yc > poly.max_y) continue;
    crossings.clear();
    for (const auto& e : poly.edges) {
      // Half-open in y so a vertex on the scanline is counted once.
      if ((e.y0 > yc) != (e.y1 > yc)) {
        crossings.push_back(e.x0 + (yc - e.y0) * (e.x1 - e.x0) / (e.y1 - e.y0));
      }
    }
    std::sort(crossings.begin(), crossings.end());
    // Center x + 0.5 is inside iff c[2k] <= x + 0.5 < c[2k+1].
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      const double lo = std::ceil(crossings[k] - 0.5);
      const double hi = std::ceil(crossings[k + 1] - 0.5);
      const int first = static_cast<int>(std::clamp(lo, 0.0, static_cast<double>(width)));
      const int last = static_cast<int>(std::clamp(hi, 0.0, static_cast<double>(width)));
      for (int x = first; x < last; ++x) row[x] = 1;
    }
  }
}

}  // namespace detail

}  // namespace lineseg::kernels
