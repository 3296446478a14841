#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lineseg/error.hpp"
#include "lineseg/geometry.hpp"
#include "lineseg/page.hpp"
#include "lineseg/raster.hpp"

namespace lineseg {

struct NormalizationConfig {
  // Pairs overlapping by less than this fraction of each line are split.
  double overlap_threshold = 0.20;
  // Inward offset applied to touching lines; 0 disables erosion.
  double erosion_px = 1.0;
  // Long side of the label image; nullopt keeps the original scale.
  std::optional<int> target_long_side = 768;
  // Replace every polygon by its enclosing bounding rectangle first.
  bool simplify_to_bbox = false;

  // Throws DataError on out-of-range values.
  void validate() const;
  bool operator==(const NormalizationConfig&) const = default;
};

enum class PairKind { kDisjoint, kTouching, kSmallOverlap, kLargeOverlap };

std::string_view to_string(PairKind kind);

struct PairClassification {
  PairKind kind = PairKind::kDisjoint;
  double ratio_a = 0.0;  // intersection area / area(a)
  double ratio_b = 0.0;
  double intersection = 0.0;
  double distance = 0.0;  // boundary distance, 0 when touching or overlapping
};

// Contacts below this area count as touching rather than overlapping.
inline constexpr double kTouchAreaPx2 = 1.0;
// Boundaries closer than this are touching.
inline constexpr double kTouchDistancePx = 1.0;

PairClassification classify_pair(const Polygon& a, const Polygon& b, const NormalizationConfig& cfg);

struct SplitResult {
  Polygon a;
  Polygon b;
  int loser = 1;  // 0: a lost the intersection, 1: b did
};

// The line with the smaller overlap ratio loses the intersection (largest
// remaining piece kept); on a tie the second argument loses. Throws
// GeometryError when the pair does not overlap or the loser would vanish.
SplitResult split_pair(const Polygon& a, const Polygon& b);

struct ErodeResult {
  Polygon a;
  Polygon b;
  bool a_vanished = false;  // erosion left nothing; original kept
  bool b_vanished = false;
};

ErodeResult erode_pair(const Polygon& a, const Polygon& b, double erosion_px);

struct PairAction {
  int line_a = 0;
  int line_b = 0;
  PairKind kind = PairKind::kDisjoint;
  double ratio_a = 0.0;
  double ratio_b = 0.0;
  std::string action;  // "eroded", "split", "kept"
  int loser = -1;      // line index that lost the intersection when split
};

struct NormalizationLog {
  std::string page_id;
  double scale = 1.0;
  int label_width = 0;
  int label_height = 0;
  std::vector<PairAction> actions;  // every non-disjoint pair
  Warnings warnings;

  // Number of actions that changed geometry (erosions and splits).
  std::size_t modifications() const;
};

struct NormalizedPage {
  PageAnnotation page;  // at label resolution
  Mask label{1, 1};
  NormalizationLog log;
};

// Scales s = target / max(W, H) and the label size (round(W s), round(H s)).
double label_scale(const PageAnnotation& page, const NormalizationConfig& cfg);
std::pair<int, int> label_size(const PageAnnotation& page, double scale);

// Bounding-rectangle simplification, rescaling, one pass of pair
// processing in document order on the scaled geometry, then rasterization
// at the scaled resolution.
NormalizedPage normalize_page(const PageAnnotation& page, const NormalizationConfig& cfg);

// Baseline label image: rasterize at the original size, then downscale so a
// target pixel is set if any source pixel under it is set.
Mask naive_label_image(const PageAnnotation& page, std::optional<int> target_long_side);

}  // namespace lineseg
