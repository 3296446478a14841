#include <omp.h>

#include "lineseg/kernels.hpp"

namespace lineseg::kernels::omp {

void rasterize(std::span<const EdgeTable> polygons, Mask& out) {
  const int w = out.width();
  const int h = out.height();
  auto bits = out.bits();
#pragma omp parallel
  {
    std::vector<double> crossings;
#pragma omp for schedule(dynamic, 16)
    for (int y = 0; y < h; ++y) {
      detail::fill_row(polygons, y, bits.subspan(static_cast<std::size_t>(y) * w, w), crossings);
    }
  }
}

void threshold(std::span<const float> values, double t, ThresholdRule rule,
               std::span<std::uint8_t> out) {
  const auto n = static_cast<std::int64_t>(values.size());
  const bool strict = rule == ThresholdRule::kStrict;
  const float* src = values.data();
  std::uint8_t* dst = out.data();
  // Private copies: the byte output could otherwise alias shared captures.
#pragma omp parallel for schedule(static) firstprivate(src, dst, t, strict)
  for (std::int64_t i = 0; i < n; ++i) {
    const double v = src[i];
    dst[i] = (strict ? v > t : v >= t) ? 1 : 0;
  }
}

PixelConfusion confusion(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt) {
  std::int64_t tp = 0, fp = 0, fn = 0;
  const auto n = static_cast<std::int64_t>(pred.size());
#pragma omp parallel for schedule(static) reduction(+ : tp, fp, fn)
  for (std::int64_t i = 0; i < n; ++i) {
    const bool p = pred[i] != 0;
    const bool g = gt[i] != 0;
    tp += p && g;
    fp += p && !g;
    fn += !p && g;
  }
  return {tp, fp, fn};
}

void resize_nearest(const Mask& in, Mask& out) {
  const int h = out.height();
  const int w = out.width();
  std::vector<int> sx(w);
  for (int x = 0; x < w; ++x) sx[x] = detail::nearest_source(x, in.width(), w);
  auto src = in.bits();
  auto dst = out.bits();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const auto sy = static_cast<std::size_t>(detail::nearest_source(y, in.height(), h));
    const auto* srow = src.data() + sy * in.width();
    auto* drow = dst.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) drow[x] = srow[sx[x]];
  }
}

void downscale_any(const Mask& in, Mask& out) {
  const int h = out.height();
  const int w = out.width();
  auto src = in.bits();
  auto dst = out.bits();
#pragma omp parallel for schedule(dynamic, 8)
  for (int y = 0; y < h; ++y) {
    int y0, y1;
    detail::covered_range(y, in.height(), h, y0, y1);
    for (int x = 0; x < w; ++x) {
      int x0, x1;
      detail::covered_range(x, in.width(), w, x0, x1);
      std::uint8_t any = 0;
      for (int sy = y0; sy < y1 && !any; ++sy) {
        const auto* srow = src.data() + static_cast<std::size_t>(sy) * in.width();
        for (int sx = x0; sx < x1; ++sx) any |= srow[sx];
      }
      dst[static_cast<std::size_t>(y) * w + x] = any ? 1 : 0;
    }
  }
}

void confusion_overlay(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt,
                       std::span<std::uint8_t> rgb) {
  const auto n = static_cast<std::int64_t>(pred.size());
  const std::uint8_t* p = pred.data();
  const std::uint8_t* g = gt.data();
  std::uint8_t* dst = rgb.data();
#pragma omp parallel for schedule(static) firstprivate(p, g, dst)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& c = detail::kOverlayColors[detail::overlay_category(p[i], g[i])];
    dst[3 * i] = c[0];
    dst[3 * i + 1] = c[1];
    dst[3 * i + 2] = c[2];
  }
}

}  // namespace lineseg::kernels::omp
