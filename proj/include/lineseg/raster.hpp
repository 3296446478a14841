#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lineseg/error.hpp"
#include "lineseg/geometry.hpp"

namespace lineseg {

// Row-major binary raster; foreground (1) marks text-line pixels.
class Mask {
 public:
  Mask(int width, int height);
  Mask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool v) { bits_[index(x, y)] = v ? 1 : 0; }

  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<std::uint8_t> bits() { return bits_; }

  std::size_t count() const;

  bool operator==(const Mask&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

// Row-major per-pixel text-line probability, values in [0, 1].
class ProbabilityMap {
 public:
  ProbabilityMap(int width, int height, std::vector<float> values);

  int width() const { return width_; }
  int height() const { return height_; }
  float at(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }
  std::span<const float> values() const { return values_; }

 private:
  int width_;
  int height_;
  std::vector<float> values_;
};

struct PixelConfusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  PixelConfusion& operator+=(const PixelConfusion& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const PixelConfusion&) const = default;
};

struct Component {
  std::vector<std::int64_t> pixels;  // linear indices, raster order
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;

  std::size_t area() const { return pixels.size(); }
};

enum class ThresholdRule {
  kStrict,     // foreground iff value > t
  kInclusive,  // foreground iff value >= t
};

// Pixel (x, y) is foreground iff its center (x + 0.5, y + 0.5) lies inside
// any polygon under the even-odd rule. Points on a shared edge belong to
// exactly one side, so abutting polygons never share a pixel.
Mask rasterize(std::span<const Polygon> polygons, int width, int height,
               Warnings* warnings = nullptr);

Mask threshold(const ProbabilityMap& map, double t, ThresholdRule rule = ThresholdRule::kStrict);

// 8-connected components, ordered by their first pixel in raster order.
std::vector<Component> connected_components(const Mask& m);

// Erases components with fewer than min_cc pixels.
Mask remove_small_components(const Mask& m, int min_cc);

// Outer contour of every component (holes filled), in component order.
std::vector<Polygon> extract_polygons(const Mask& m);

PixelConfusion pixel_confusion(const Mask& pred, const Mask& gt);

// Nearest-neighbour resampling.
Mask resize_nearest(const Mask& m, int width, int height);

// Downscaling where a target pixel is foreground if any source pixel it
// covers is foreground.
Mask downscale_any(const Mask& m, int width, int height);

// Mean map value over the given pixels; 1.0 for an empty set.
double mean_probability(const ProbabilityMap& map, std::span<const std::int64_t> pixels);

}  // namespace lineseg
