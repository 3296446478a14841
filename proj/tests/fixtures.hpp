#pragma once

#include <random>
#include <string>

#include "lineseg/page.hpp"

namespace lineseg::fixture {

inline PageAnnotation page_of(std::vector<Polygon> polys, int w, int h, std::string id = "p") {
  PageAnnotation page{std::move(id), w, h, {}};
  for (auto& p : polys) page.lines.push_back({std::move(p), std::nullopt, std::nullopt});
  return page;
}

// Stacked lines whose consecutive pairs are randomly well separated,
// touching (gap below half a pixel at label scale), or overlapping by less
// than 20% of either line. Non-consecutive lines never come close.
inline PageAnnotation messy_page(std::uint64_t seed, int n_lines = 12, double scale_hint = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> height(30.0, 60.0);
  std::uniform_int_distribution<int> relation(0, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int width = 1200;
  PageAnnotation page{"messy-" + std::to_string(seed), width, 0, {}};
  double y = 20.0;
  double prev_h = 0.0;
  for (int i = 0; i < n_lines; ++i) {
    const double h = height(rng);
    if (i > 0) {
      switch (relation(rng)) {
        case 0:  // separated: at least 6 px at label scale
          y += (6.0 + 10.0 * u(rng)) / scale_hint;
          break;
        case 1:  // touching
          y += 0.9 * u(rng);
          break;
        default:  // overlap of 5-15% of the shorter line
          y -= (0.05 + 0.10 * u(rng)) * std::min(h, prev_h);
          break;
      }
    }
    const double x0 = 20.0 + 80.0 * u(rng);
    const double x1 = width - 20.0 - 80.0 * u(rng);
    page.lines.push_back({Polygon::rectangle(x0, y, x1, y + h), std::nullopt, std::nullopt});
    y += h;
    prev_h = h;
  }
  page.image_height = static_cast<int>(std::ceil(y + 20.0));
  return page;
}

}  // namespace lineseg::fixture
