#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lineseg/geometry.hpp"

namespace lineseg {

struct TextLine {
  Polygon polygon;
  std::optional<std::string> text;
  std::optional<double> confidence;

  bool operator==(const TextLine&) const = default;
};

struct PageAnnotation {
  std::string page_id;
  int image_width = 0;
  int image_height = 0;
  std::vector<TextLine> lines;

  bool operator==(const PageAnnotation&) const = default;

  std::vector<Polygon> polygons() const {
    std::vector<Polygon> out;
    out.reserve(lines.size());
    for (const auto& l : lines) out.push_back(l.polygon);
    return out;
  }
  bool all_lines_have_text() const {
    for (const auto& l : lines) {
      if (!l.text) return false;
    }
    return true;
  }
};

}  // namespace lineseg
