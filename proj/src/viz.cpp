#include "lineseg/viz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "lineseg/error.hpp"
#include "lineseg/kernels.hpp"

namespace lineseg {

RgbImage::RgbImage(int w, int h, Rgb fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw DataError(fmt::format("image size must be positive, got {}x{}", w, h));
  data.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < data.size(); i += 3) std::copy(fill.begin(), fill.end(), data.begin() + i);
}

Rgb RgbImage::at(int x, int y) const {
  const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
  return {data[i], data[i + 1], data[i + 2]};
}

void RgbImage::set(int x, int y, Rgb c) {
  const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
  std::copy(c.begin(), c.end(), data.begin() + i);
}

RgbImage confusion_overlay(const Mask& pred, const Mask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw DataError(fmt::format("overlay size mismatch: prediction {}x{}, ground truth {}x{}", pred.width(),
                                pred.height(), gt.width(), gt.height()));
  }
  RgbImage img(gt.width(), gt.height());
  kernels::omp::confusion_overlay(pred.bits(), gt.bits(), img.data);
  return img;
}

namespace {

int to_pixel(double v, int n) { return std::clamp(static_cast<int>(std::floor(v)), 0, n - 1); }

void draw_segment(RgbImage& img, Point a, Point b, Rgb c) {
  int x0 = to_pixel(a.x, img.width), y0 = to_pixel(a.y, img.height);
  const int x1 = to_pixel(b.x, img.width), y1 = to_pixel(b.y, img.height);
  const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    img.set(x0, y0, c);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

}  // namespace

RgbImage draw_polygons(int width, int height, std::span<const PolygonLayer> layers) {
  RgbImage img(width, height);
  for (const auto& layer : layers) {
    const double a = std::clamp(layer.fill_alpha, 0.0, 1.0);
    if (a > 0.0 && !layer.polygons.empty()) {
      const Mask fill = rasterize(layer.polygons, width, height);
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          if (!fill.at(x, y)) continue;
          Rgb px = img.at(x, y);
          for (int k = 0; k < 3; ++k) {
            px[k] = static_cast<std::uint8_t>(std::lround((1.0 - a) * px[k] + a * layer.color[k]));
          }
          img.set(x, y, px);
        }
      }
    }
    if (!layer.outline) continue;
    for (const auto& poly : layer.polygons) {
      const auto& v = poly.vertices();
      for (std::size_t i = 0; i < v.size(); ++i) draw_segment(img, v[i], v[(i + 1) % v.size()], layer.color);
    }
  }
  return img;
}

}  // namespace lineseg
