#include "lineseg/raster.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "lineseg/kernels.hpp"

namespace lineseg {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw DataError(fmt::format("raster dimensions must be positive, got {}x{}", width, height));
  }
}

}  // namespace

Mask::Mask(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

Mask::Mask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width, height);
  if (bits_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DataError(fmt::format("mask of {}x{} needs {} values, got {}", width, height,
                                static_cast<std::size_t>(width) * height, bits_.size()));
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

ProbabilityMap::ProbabilityMap(int width, int height, std::vector<float> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height);
  if (values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DataError("probability map size does not match its dimensions");
  }
  for (float v : values_) {
    if (!(v >= 0.0f && v <= 1.0f)) throw DataError("probability value outside [0, 1]");
  }
}

Mask rasterize(std::span<const Polygon> polygons, int width, int height, Warnings* warnings) {
  Mask out(width, height);
  std::vector<kernels::EdgeTable> tables;
  tables.reserve(polygons.size());
  const BoundingBox canvas{{0.0, 0.0}, {static_cast<double>(width), static_cast<double>(height)}};
  for (std::size_t i = 0; i < polygons.size(); ++i) {
    if (!to_bounding_box(polygons[i]).overlaps(canvas)) {
      warn(warnings, "", static_cast<int>(i), "polygon lies entirely outside the canvas");
      continue;
    }
    tables.push_back(kernels::make_edge_table(polygons[i]));
  }
  kernels::omp::rasterize(tables, out);
  return out;
}

Mask threshold(const ProbabilityMap& map, double t, ThresholdRule rule) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DataError(fmt::format("threshold must lie in [0, 1], got {}", t));
  }
  Mask out(map.width(), map.height());
  kernels::omp::threshold(map.values(), t, rule, out.bits());
  return out;
}

std::vector<Component> connected_components(const Mask& m) {
  const int w = m.width();
  const int h = m.height();
  const auto bits = m.bits();
  std::vector<std::uint8_t> seen(bits.size(), 0);
  std::vector<Component> out;
  std::vector<std::int64_t> stack;
  for (std::int64_t start = 0; start < static_cast<std::int64_t>(bits.size()); ++start) {
    if (!bits[start] || seen[start]) continue;
    Component c;
    c.min_x = c.max_x = static_cast<int>(start % w);
    c.min_y = c.max_y = static_cast<int>(start / w);
    seen[start] = 1;
    stack.assign(1, start);
    while (!stack.empty()) {
      const std::int64_t idx = stack.back();
      stack.pop_back();
      c.pixels.push_back(idx);
      const int x = static_cast<int>(idx % w);
      const int y = static_cast<int>(idx / w);
      c.min_x = std::min(c.min_x, x);
      c.max_x = std::max(c.max_x, x);
      c.min_y = std::min(c.min_y, y);
      c.max_y = std::max(c.max_y, y);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::int64_t n = static_cast<std::int64_t>(ny) * w + nx;
          if (bits[n] && !seen[n]) {
            seen[n] = 1;
            stack.push_back(n);
          }
        }
      }
    }
    std::sort(c.pixels.begin(), c.pixels.end());
    out.push_back(std::move(c));
  }
  return out;
}

Mask remove_small_components(const Mask& m, int min_cc) {
  if (min_cc < 0) throw DataError("min_cc must be non-negative");
  Mask out = m;
  if (min_cc == 0) return out;
  auto bits = out.bits();
  for (const auto& c : connected_components(m)) {
    if (c.area() >= static_cast<std::size_t>(min_cc)) continue;
    for (auto idx : c.pixels) bits[idx] = 0;
  }
  return out;
}

namespace {

struct Dir {
  int dx, dy;
  bool operator==(const Dir&) const = default;
};

// Traces the outer pixel-edge contour of one component. Coordinates are in
// image space; pixel (x, y) spans [x, x+1] x [y, y+1].
Polygon trace_component(const Component& c, int mask_width) {
  // Local grid with a one-cell empty border.
  const int gw = c.max_x - c.min_x + 3;
  const int gh = c.max_y - c.min_y + 3;
  std::vector<std::uint8_t> cell(static_cast<std::size_t>(gw) * gh, 0);
  auto at = [&](int x, int y) -> std::uint8_t& { return cell[static_cast<std::size_t>(y) * gw + x]; };
  for (auto idx : c.pixels) {
    at(static_cast<int>(idx % mask_width) - c.min_x + 1, static_cast<int>(idx / mask_width) - c.min_y + 1) = 1;
  }
  // Fill holes: everything not 4-reachable from the border is interior.
  {
    std::vector<std::uint8_t> outside(cell.size(), 0);
    std::vector<std::pair<int, int>> stack{{0, 0}};
    outside[0] = 1;
    while (!stack.empty()) {
      auto [x, y] = stack.back();
      stack.pop_back();
      const int nbr[4][2] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
      for (const auto& n : nbr) {
        if (n[0] < 0 || n[1] < 0 || n[0] >= gw || n[1] >= gh) continue;
        const auto k = static_cast<std::size_t>(n[1]) * gw + n[0];
        if (outside[k] || cell[k]) continue;
        outside[k] = 1;
        stack.emplace_back(n[0], n[1]);
      }
    }
    for (std::size_t k = 0; k < cell.size(); ++k) {
      if (!outside[k]) cell[k] = 1;
    }
  }

  // Directed boundary edges keyed by start vertex; at most two per vertex.
  struct Edge {
    int x0, y0, x1, y1;
    bool used = false;
  };
  std::vector<Edge> edges;
  std::map<std::pair<int, int>, std::vector<std::size_t>> outgoing;
  auto add = [&](int x0, int y0, int x1, int y1) {
    outgoing[{x0, y0}].push_back(edges.size());
    edges.push_back({x0, y0, x1, y1});
  };
  for (int y = 1; y < gh - 1; ++y) {
    for (int x = 1; x < gw - 1; ++x) {
      if (!at(x, y)) continue;
      if (!at(x, y - 1)) add(x, y, x + 1, y);
      if (!at(x + 1, y)) add(x + 1, y, x + 1, y + 1);
      if (!at(x, y + 1)) add(x + 1, y + 1, x, y + 1);
      if (!at(x - 1, y)) add(x, y + 1, x, y);
    }
  }

  // At a diagonal pinch, turn so that both diagonal cells stay on the same
  // contour (8-connectivity): pick the outgoing edge with cross(in, out) < 0.
  auto next_edge = [&](const Edge& e) {
    const auto& cands = outgoing.at({e.x1, e.y1});
    if (cands.size() == 1) return cands[0];
    const Dir in{e.x1 - e.x0, e.y1 - e.y0};
    for (auto k : cands) {
      const Dir out{edges[k].x1 - edges[k].x0, edges[k].y1 - edges[k].y0};
      if (in.dx * out.dy - in.dy * out.dx < 0) return k;
    }
    return cands[0];
  };

  std::vector<std::vector<std::size_t>> loops;
  for (std::size_t s = 0; s < edges.size(); ++s) {
    if (edges[s].used) continue;
    std::vector<std::size_t> loop;
    std::size_t k = s;
    while (!edges[k].used) {
      edges[k].used = true;
      loop.push_back(k);
      k = next_edge(edges[k]);
    }
    loops.push_back(std::move(loop));
  }
  const auto& loop = *std::max_element(loops.begin(), loops.end(),
                                       [](const auto& a, const auto& b) { return a.size() < b.size(); });

  constexpr double kChamfer = 1e-3;
  std::vector<Point> pts;
  const double ox = c.min_x - 1;
  const double oy = c.min_y - 1;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Edge& prev = edges[loop[(i + loop.size() - 1) % loop.size()]];
    const Edge& cur = edges[loop[i]];
    const Dir in{prev.x1 - prev.x0, prev.y1 - prev.y0};
    const Dir out{cur.x1 - cur.x0, cur.y1 - cur.y0};
    const double vx = cur.x0 + ox;
    const double vy = cur.y0 + oy;
    if (outgoing.at({cur.x0, cur.y0}).size() > 1) {
      pts.push_back({vx - kChamfer * in.dx, vy - kChamfer * in.dy});
      pts.push_back({vx + kChamfer * out.dx, vy + kChamfer * out.dy});
    } else if (!(in == out)) {
      pts.push_back({vx, vy});
    }
  }
  return Polygon(std::move(pts));
}

}  // namespace

std::vector<Polygon> extract_polygons(const Mask& m) {
  std::vector<Polygon> out;
  for (const auto& c : connected_components(m)) out.push_back(trace_component(c, m.width()));
  return out;
}

PixelConfusion pixel_confusion(const Mask& pred, const Mask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw DataError(fmt::format("mask dimensions differ: prediction {}x{}, ground truth {}x{}",
                                pred.width(), pred.height(), gt.width(), gt.height()));
  }
  return kernels::omp::confusion(pred.bits(), gt.bits());
}

Mask resize_nearest(const Mask& m, int width, int height) {
  Mask out(width, height);
  if (width == m.width() && height == m.height()) return m;
  kernels::omp::resize_nearest(m, out);
  return out;
}

Mask downscale_any(const Mask& m, int width, int height) {
  if (width > m.width() || height > m.height()) {
    throw DataError("downscale_any target must not exceed the source size");
  }
  if (width == m.width() && height == m.height()) return m;
  Mask out(width, height);
  kernels::omp::downscale_any(m, out);
  return out;
}

double mean_probability(const ProbabilityMap& map, std::span<const std::int64_t> pixels) {
  if (pixels.empty()) return 1.0;
  const auto values = map.values();
  double sum = 0.0;
  for (auto idx : pixels) sum += values[idx];
  return sum / static_cast<double>(pixels.size());
}

}  // namespace lineseg
