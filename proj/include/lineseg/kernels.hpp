#pragma once

// Per-pixel kernels behind the raster and visualization modules.
//
// Every kernel exists twice: a straightforward serial reference in
// kernels::serial and an OpenMP version in kernels::omp. Both must produce
// bit-identical output; the tests compare them and bench/ times them.

#include <cstdint>
#include <span>
#include <vector>

#include "lineseg/geometry.hpp"
#include "lineseg/raster.hpp"

namespace lineseg::kernels {

// Polygon outline prepared for scanline filling.
struct EdgeTable {
  struct Edge {
    double x0, y0, x1, y1;
  };
  std::vector<Edge> edges;
  double min_y = 0.0;
  double max_y = 0.0;
};

EdgeTable make_edge_table(const Polygon& p);

namespace serial {

void rasterize(std::span<const EdgeTable> polygons, Mask& out);
void threshold(std::span<const float> values, double t, ThresholdRule rule,
               std::span<std::uint8_t> out);
PixelConfusion confusion(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt);
void resize_nearest(const Mask& in, Mask& out);
void downscale_any(const Mask& in, Mask& out);
void confusion_overlay(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt,
                       std::span<std::uint8_t> rgb);

}  // namespace serial

namespace omp {

void rasterize(std::span<const EdgeTable> polygons, Mask& out);
void threshold(std::span<const float> values, double t, ThresholdRule rule,
               std::span<std::uint8_t> out);
PixelConfusion confusion(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt);
void resize_nearest(const Mask& in, Mask& out);
void downscale_any(const Mask& in, Mask& out);
void confusion_overlay(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt,
                       std::span<std::uint8_t> rgb);

}  // namespace omp

// Shared row/column helpers, identical for both variants.
namespace detail {

// Fills row `y` of `row` (width pixels) with the union of the even-odd
// interiors of `polygons` sampled at pixel centers. `crossings` is scratch.
void fill_row(std::span<const EdgeTable> polygons, int y, std::span<std::uint8_t> row,
              std::vector<double>& crossings);

// Source index range [first, last) covered by target index i when n_src
// pixels are mapped onto n_dst.
inline void covered_range(int i, int n_src, int n_dst, int& first, int& last) {
  const auto lo = static_cast<std::int64_t>(i) * n_src;
  const auto hi = static_cast<std::int64_t>(i + 1) * n_src;
  first = static_cast<int>(lo / n_dst);
  last = static_cast<int>((hi + n_dst - 1) / n_dst);
}

inline int nearest_source(int i, int n_src, int n_dst) {
  // Source pixel whose extent contains the target pixel center.
  const auto num = (2 * static_cast<std::int64_t>(i) + 1) * n_src;
  return static_cast<int>(num / (2 * static_cast<std::int64_t>(n_dst)));
}

inline constexpr std::uint8_t kOverlayColors[4][3] = {
    {0, 255, 0},    // true negative: green
    {0, 0, 0},      // true positive: black
    {0, 255, 255},  // false positive: cyan
    {255, 0, 0},    // false negative: red
};

// 0 TN, 1 TP, 2 FP, 3 FN.
inline int overlay_category(std::uint8_t pred, std::uint8_t gt) {
  constexpr int kTable[4] = {0, 3, 2, 1};  // index: pred * 2 + gt
  return kTable[(pred != 0) * 2 + (gt != 0)];
}

}  // namespace detail

}  // namespace lineseg::kernels
