#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "lineseg/page.hpp"

namespace lineseg {

struct SynthSpec {
  int width = 1200;
  int height = 800;
  int line_count = 10;
  double line_height = 40.0;
  double gap = 20.0;
  double margin = 50.0;
  std::uint64_t seed = 1;
  // Line i moves down by frac(i * subpixel_step) px; staggered edges make
  // pixel counts change smoothly under dilation.
  double subpixel_step = 0.0;
  // Fixed text length; random in [20, 40] when absent.
  std::optional<int> text_length;
  std::string page_id = "synth";

  // Throws DataError when the lines do not fit or a field is out of range.
  void validate() const;
};

// line_count horizontal rectangles, top to bottom, each carrying a seeded
// pseudo-text of lowercase letters and single spaces.
PageAnnotation generate_page(const SynthSpec& spec);

// Replace lines i and j by the bounding rectangle of both, placed at the
// earlier index and carrying the earlier line's text.
struct MergeLines {
  std::size_t i = 0;
  std::size_t j = 1;
};
// Cut line i at its vertical midline; text is split at its middle character.
struct SplitLine {
  std::size_t i = 0;
};
// Grow every line's bounding rectangle by d px on each side, clipped to the page.
struct ThickenLines {
  double d = 1.0;
};
struct ShiftLines {
  double dx = 0.0;
  double dy = 0.0;
};
struct DropLine {
  std::size_t i = 0;
};
// Substitute each character of every text with probability `rate`.
struct NoiseText {
  double rate = 0.05;
  std::uint64_t seed = 1;
};

using Perturbation = std::variant<MergeLines, SplitLine, ThickenLines, ShiftLines, DropLine, NoiseText>;

// Throws DataError on invalid indices or parameters.
PageAnnotation perturb(const PageAnnotation& page, const Perturbation& op);

// Two predictions of `ground_truth` with matching pixel IoU: every line
// thickened (calibrated by bisection on d), versus two lines merged and a
// third dropped.
struct EqualIouFixture {
  PageAnnotation ground_truth;
  PageAnnotation thickened;
  PageAnnotation merged;
  double thicken_d = 0.0;
  double thickened_iou = 0.0;
  double merged_iou = 0.0;
};

EqualIouFixture equal_iou_fixture(const SynthSpec& spec, std::size_t merge_first = 0,
                                  std::optional<std::size_t> drop = std::nullopt);

}  // namespace lineseg
