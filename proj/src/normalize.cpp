#include "lineseg/normalize.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace lineseg {

namespace {

// Buffered outlines carry ~1e-5 px of round-off; distance tests allow for it.
constexpr double kDistanceSlack = 1e-4;

bool boxes_within(const BoundingBox& a, const BoundingBox& b, double margin) {
  return a.min.x - margin <= b.max.x && b.min.x - margin <= a.max.x &&
         a.min.y - margin <= b.max.y && b.min.y - margin <= a.max.y;
}

}  // namespace

void NormalizationConfig::validate() const {
  if (!(overlap_threshold > 0.0 && overlap_threshold <= 1.0)) {
    throw DataError(fmt::format("overlap_threshold must lie in (0, 1], got {}", overlap_threshold));
  }
  if (!(erosion_px >= 0.0) || !std::isfinite(erosion_px)) {
    throw DataError(fmt::format("erosion_px must be >= 0, got {}", erosion_px));
  }
  if (target_long_side && *target_long_side < 16) {
    throw DataError(fmt::format("target_long_side must be >= 16, got {}", *target_long_side));
  }
}

std::string_view to_string(PairKind kind) {
  switch (kind) {
    case PairKind::kDisjoint: return "disjoint";
    case PairKind::kTouching: return "touching";
    case PairKind::kSmallOverlap: return "small_overlap";
    case PairKind::kLargeOverlap: return "large_overlap";
  }
  return "unknown";
}

PairClassification classify_pair(const Polygon& a, const Polygon& b, const NormalizationConfig& cfg) {
  const double area_a = polygon_area(a);
  const double area_b = polygon_area(b);
  if (area_a <= 0.0 || area_b <= 0.0) throw GeometryError("cannot classify a zero-area polygon");

  PairClassification c;
  const BoundingBox box_a = to_bounding_box(a);
  const BoundingBox box_b = to_bounding_box(b);
  if (!boxes_within(box_a, box_b, kTouchDistancePx)) {
    const double gx = std::max({0.0, box_b.min.x - box_a.max.x, box_a.min.x - box_b.max.x});
    const double gy = std::max({0.0, box_b.min.y - box_a.max.y, box_a.min.y - box_b.max.y});
    c.distance = std::hypot(gx, gy);
    return c;
  }
  c.intersection = intersection_area(a, b);
  c.ratio_a = std::min(1.0, c.intersection / area_a);
  c.ratio_b = std::min(1.0, c.intersection / area_b);
  c.distance = c.intersection > 0.0 ? 0.0 : boundary_distance(a, b);
  if (c.intersection < kTouchAreaPx2) {
    c.kind = c.distance < kTouchDistancePx - kDistanceSlack ? PairKind::kTouching : PairKind::kDisjoint;
  } else if (c.ratio_a < cfg.overlap_threshold && c.ratio_b < cfg.overlap_threshold) {
    c.kind = PairKind::kSmallOverlap;
  } else {
    c.kind = PairKind::kLargeOverlap;
  }
  return c;
}

SplitResult split_pair(const Polygon& a, const Polygon& b) {
  const double inter = intersection_area(a, b);
  if (inter < kTouchAreaPx2) {
    throw GeometryError(fmt::format("split_pair: polygons do not overlap (intersection {} px^2)", inter));
  }
  const double ratio_a = inter / polygon_area(a);
  const double ratio_b = inter / polygon_area(b);
  const bool a_loses = ratio_a < ratio_b;
  const Polygon& loser = a_loses ? a : b;
  const Polygon& keeper = a_loses ? b : a;
  auto pieces = polygon_difference(loser, keeper);
  if (pieces.empty()) throw GeometryError("split_pair: the losing line is entirely covered");
  Polygon rest = std::move(pieces[largest_polygon(pieces)]);
  if (a_loses) return {std::move(rest), b, 0};
  return {a, std::move(rest), 1};
}

ErodeResult erode_pair(const Polygon& a, const Polygon& b, double erosion_px) {
  auto ea = inward_offset(a, erosion_px);
  auto eb = inward_offset(b, erosion_px);
  ErodeResult r{ea ? *ea : a, eb ? *eb : b, !ea, !eb};
  return r;
}

std::size_t NormalizationLog::modifications() const {
  return static_cast<std::size_t>(std::count_if(actions.begin(), actions.end(), [](const PairAction& a) {
    return a.action == "eroded" || a.action == "split";
  }));
}

double label_scale(const PageAnnotation& page, const NormalizationConfig& cfg) {
  if (!cfg.target_long_side) return 1.0;
  const int long_side = std::max(page.image_width, page.image_height);
  if (long_side <= 0) throw DataError(fmt::format("page '{}' has no image size", page.page_id));
  return static_cast<double>(*cfg.target_long_side) / long_side;
}

std::pair<int, int> label_size(const PageAnnotation& page, double scale) {
  const int w = std::max(1, static_cast<int>(std::lround(page.image_width * scale)));
  const int h = std::max(1, static_cast<int>(std::lround(page.image_height * scale)));
  return {w, h};
}

NormalizedPage normalize_page(const PageAnnotation& page, const NormalizationConfig& cfg) {
  cfg.validate();
  if (page.image_width < 1 || page.image_height < 1) {
    throw DataError(fmt::format("page '{}' has no image size", page.page_id));
  }
  NormalizedPage out;
  NormalizationLog& log = out.log;
  log.page_id = page.page_id;
  log.scale = label_scale(page, cfg);
  std::tie(log.label_width, log.label_height) = label_size(page, log.scale);

  out.page = page;
  out.page.image_width = log.label_width;
  out.page.image_height = log.label_height;
  auto& lines = out.page.lines;
  for (auto& line : lines) {
    if (cfg.simplify_to_bbox) line.polygon = box_polygon(to_bounding_box(line.polygon));
    if (log.scale != 1.0) line.polygon = scale_polygon(line.polygon, log.scale);
  }

  auto note_vanished = [&](int line, const char* what) {
    warn(&log.warnings, page.page_id, line,
         fmt::format("{} would remove the whole line; original kept", what));
  };

  const int n = static_cast<int>(lines.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Polygon& pi = lines[i].polygon;
      Polygon& pj = lines[j].polygon;
      const auto c = classify_pair(pi, pj, cfg);
      if (c.kind == PairKind::kDisjoint) continue;
      PairAction act{i, j, c.kind, c.ratio_a, c.ratio_b, "kept", -1};
      switch (c.kind) {
        case PairKind::kTouching:
          if (cfg.erosion_px > 0.0) {
            auto r = erode_pair(pi, pj, cfg.erosion_px);
            if (r.a_vanished) note_vanished(i, "erosion");
            if (r.b_vanished) note_vanished(j, "erosion");
            if (!r.a_vanished || !r.b_vanished) act.action = "eroded";
            pi = std::move(r.a);
            pj = std::move(r.b);
          }
          break;
        case PairKind::kSmallOverlap: {
          auto r = split_pair(pi, pj);
          act.action = "split";
          act.loser = r.loser == 0 ? i : j;
          Polygon& lost = r.loser == 0 ? r.a : r.b;
          // The split leaves the loser sharing an edge with the keeper; pull
          // it back by the erosion distance so the pair ends up separated.
          if (cfg.erosion_px > 0.0) {
            if (auto shrunk = inward_offset(lost, cfg.erosion_px)) {
              lost = std::move(*shrunk);
            } else {
              note_vanished(act.loser, "erosion after split");
            }
          }
          pi = std::move(r.a);
          pj = std::move(r.b);
          break;
        }
        case PairKind::kLargeOverlap:
        case PairKind::kDisjoint:
          break;
      }
      log.actions.push_back(std::move(act));
    }
  }

  const auto polygons = out.page.polygons();
  Warnings raster_warnings;
  out.label = rasterize(polygons, log.label_width, log.label_height, &raster_warnings);
  for (auto& w : raster_warnings) {
    w.page_id = page.page_id;
    log.warnings.push_back(std::move(w));
  }
  return out;
}

Mask naive_label_image(const PageAnnotation& page, std::optional<int> target_long_side) {
  NormalizationConfig cfg;
  cfg.target_long_side = target_long_side;
  const double scale = label_scale(page, cfg);
  const auto [w, h] = label_size(page, scale);
  const auto polygons = page.polygons();
  const Mask full = rasterize(polygons, page.image_width, page.image_height);
  if (w <= full.width() && h <= full.height()) return downscale_any(full, w, h);
  return resize_nearest(full, w, h);
}

}  // namespace lineseg
