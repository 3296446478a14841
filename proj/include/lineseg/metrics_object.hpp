#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lineseg/geometry.hpp"

namespace lineseg {

struct Detection {
  Polygon polygon;
  double confidence = 1.0;
  std::size_t source_rank = 0;  // ranking tie-break, usually document order
};

struct Match {
  std::size_t pred = 0;
  std::size_t gt = 0;
  double iou = 0.0;
};

// One-to-one assignment between predictions and ground-truth objects.
struct Pairing {
  std::vector<Match> matches;  // descending IoU
  std::vector<std::size_t> unmatched_pred;
  std::vector<std::size_t> unmatched_gt;
  std::size_t n_pred = 0;
  std::size_t n_gt = 0;

  // IoU of the match involving prediction i, or -1 when it is unmatched.
  std::vector<double> iou_by_pred() const;
};

// Greedy global matching: all pairs with IoU > 0 are taken in descending
// IoU order (ties broken by prediction source_rank, then gt index) and
// accepted when both ends are still free. The pairing does not depend on
// any IoU threshold; thresholds only decide which matches count.
Pairing pair_objects(std::span<const Detection> preds, std::span<const Polygon> gts);

// A detection after pairing, ready for ranking.
struct RankedDetection {
  double confidence = 1.0;
  std::size_t page = 0;
  std::size_t source_rank = 0;
  double matched_iou = -1.0;  // -1 when unmatched
};

struct PRPoint {
  std::size_t rank = 0;  // 1-based
  double confidence = 0.0;
  bool tp = false;
  double precision = 0.0;
  double recall = 0.0;
};

struct PRCurve {
  std::vector<PRPoint> points;
  std::size_t total_gt = 0;
  // True for the vacuous case: no ground truth and no predictions.
  bool perfect = false;
};

// Ranks by confidence (descending), then page, then source_rank. A
// detection is a true positive iff its match has IoU strictly above t.
// P_k = TP_k / k and R_k = TP_k / total_gt; with no ground truth every
// point has zero precision and recall. Throws DataError unless 0 < t < 1.
PRCurve pr_curve(std::vector<RankedDetection> detections, std::size_t total_gt, double t);
PRCurve pr_curve(const Pairing& pairing, std::span<const Detection> preds, double t);

// All-point interpolated area under the curve: sum over recall increments
// of (r_i - r_{i-1}) * max{p_k : r_k >= r_i}.
double average_precision(const PRCurve& curve);

// IoU thresholds 0.50, 0.55, ..., 0.95 in percent.
std::vector<int> iou_threshold_grid();

// `grid` itself, or the default grid when empty. Throws DataError on values
// outside (0, 100).
std::vector<int> resolve_grid(std::span<const int> grid);

struct ObjectPage {
  std::string page_id;
  std::vector<Detection> predictions;
  std::vector<Polygon> ground_truth;
};

struct APResult {
  std::map<int, double> ap_by_threshold;  // key: threshold in percent
  double ap_range = 0.0;                  // mean over the grid
  double ap50 = 0.0;
  double ap75 = 0.0;
  // Same metrics averaged over pages instead of pooled.
  std::map<int, double> macro_ap_by_threshold;
  double macro_ap_range = 0.0;
  std::map<int, std::size_t> tp_by_threshold;
  std::size_t matches = 0;
  std::size_t n_pred = 0;
  std::size_t n_gt = 0;
};

// Pairs each page separately, pools all detections of the dataset into one
// ranked list and computes AP at every threshold of the grid (default
// grid when empty). AP@.5 and AP@.75 are always filled in.
// `grid` holds thresholds in percent, each in (0, 100).
APResult evaluate_objects(std::span<const ObjectPage> pages, std::span<const int> grid = {});

// Pooled AP from pairings computed elsewhere (pages[i] paired into
// pairings[i]).
APResult evaluate_pairings(std::span<const ObjectPage> pages, std::span<const Pairing> pairings,
                           std::span<const int> grid = {});

// Pooled ranked list of a whole dataset, for curve dumps.
std::vector<RankedDetection> ranked_detections(std::span<const ObjectPage> pages,
                                               std::span<const Pairing> pairings);

}  // namespace lineseg
