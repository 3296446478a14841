#include "lineseg/kernels.hpp"

namespace lineseg::kernels::serial {

void rasterize(std::span<const EdgeTable> polygons, Mask& out) {
  const int w = out.width();
  auto bits = out.bits();
  std::vector<double> crossings;
  for (int y = 0; y < out.height(); ++y) {
    detail::fill_row(polygons, y, bits.subspan(static_cast<std::size_t>(y) * w, w), crossings);
  }
}

void threshold(std::span<const float> values, double t, ThresholdRule rule,
               std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    out[i] = (rule == ThresholdRule::kStrict ? v > t : v >= t) ? 1 : 0;
  }
}

PixelConfusion confusion(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt) {
  PixelConfusion c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] != 0;
    const bool g = gt[i] != 0;
    c.tp += p && g;
    c.fp += p && !g;
    c.fn += !p && g;
  }
  return c;
}

void resize_nearest(const Mask& in, Mask& out) {
  for (int y = 0; y < out.height(); ++y) {
    const int sy = detail::nearest_source(y, in.height(), out.height());
    for (int x = 0; x < out.width(); ++x) {
      out.set(x, y, in.at(detail::nearest_source(x, in.width(), out.width()), sy));
    }
  }
}

void downscale_any(const Mask& in, Mask& out) {
  for (int y = 0; y < out.height(); ++y) {
    int y0, y1;
    detail::covered_range(y, in.height(), out.height(), y0, y1);
    for (int x = 0; x < out.width(); ++x) {
      int x0, x1;
      detail::covered_range(x, in.width(), out.width(), x0, x1);
      bool any = false;
      for (int sy = y0; sy < y1 && !any; ++sy) {
        for (int sx = x0; sx < x1 && !any; ++sx) any = in.at(sx, sy);
      }
      out.set(x, y, any);
    }
  }
}

void confusion_overlay(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt,
                       std::span<std::uint8_t> rgb) {
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const auto& c = detail::kOverlayColors[detail::overlay_category(pred[i], gt[i])];
    rgb[3 * i] = c[0];
    rgb[3 * i + 1] = c[1];
    rgb[3 * i + 2] = c[2];
  }
}

}  // namespace lineseg::kernels::serial
