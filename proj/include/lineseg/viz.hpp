#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "lineseg/geometry.hpp"
#include "lineseg/raster.hpp"

namespace lineseg {

using Rgb = std::array<std::uint8_t, 3>;

// Interleaved 8-bit RGB raster.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // width * height * 3

  RgbImage() = default;
  RgbImage(int w, int h, Rgb fill = {255, 255, 255});

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  bool operator==(const RgbImage&) const = default;
};

inline constexpr Rgb kTrueNegativeColor{0, 255, 0};
inline constexpr Rgb kTruePositiveColor{0, 0, 0};
inline constexpr Rgb kFalsePositiveColor{0, 255, 255};
inline constexpr Rgb kFalseNegativeColor{255, 0, 0};

// TP black, TN green, FP cyan, FN red. Throws DataError on a size mismatch.
RgbImage confusion_overlay(const Mask& pred, const Mask& gt);

struct PolygonLayer {
  std::vector<Polygon> polygons;
  Rgb color{255, 0, 0};
  double fill_alpha = 0.0;  // 0 draws outlines only
  bool outline = true;
};

// Layers are painted in order on a white canvas; later layers cover earlier
// ones. Fill is alpha-blended, outlines are opaque one-pixel lines.
RgbImage draw_polygons(int width, int height, std::span<const PolygonLayer> layers);

}  // namespace lineseg
