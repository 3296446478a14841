#include "lineseg/metrics_object.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "lineseg/error.hpp"

namespace lineseg {

std::vector<double> Pairing::iou_by_pred() const {
  std::vector<double> out(n_pred, -1.0);
  for (const auto& m : matches) out[m.pred] = m.iou;
  return out;
}

Pairing pair_objects(std::span<const Detection> preds, std::span<const Polygon> gts) {
  std::vector<BoundingBox> gt_boxes;
  gt_boxes.reserve(gts.size());
  for (const auto& g : gts) gt_boxes.push_back(to_bounding_box(g));

  std::vector<Match> candidates;
  for (std::size_t p = 0; p < preds.size(); ++p) {
    const BoundingBox pb = to_bounding_box(preds[p].polygon);
    const double pa = polygon_area(preds[p].polygon);
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (!pb.overlaps(gt_boxes[g])) continue;
      const double inter = intersection_area(preds[p].polygon, gts[g]);
      if (inter <= 0.0) continue;
      const double uni = pa + polygon_area(gts[g]) - inter;
      candidates.push_back({p, g, std::clamp(inter / uni, 0.0, 1.0)});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Match& a, const Match& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (preds[a.pred].source_rank != preds[b.pred].source_rank) {
      return preds[a.pred].source_rank < preds[b.pred].source_rank;
    }
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.gt < b.gt;
  });

  Pairing out;
  out.n_pred = preds.size();
  out.n_gt = gts.size();
  std::vector<bool> pred_used(preds.size(), false);
  std::vector<bool> gt_used(gts.size(), false);
  for (const auto& c : candidates) {
    if (pred_used[c.pred] || gt_used[c.gt]) continue;
    pred_used[c.pred] = true;
    gt_used[c.gt] = true;
    out.matches.push_back(c);
  }
  for (std::size_t p = 0; p < preds.size(); ++p) {
    if (!pred_used[p]) out.unmatched_pred.push_back(p);
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!gt_used[g]) out.unmatched_gt.push_back(g);
  }
  return out;
}

PRCurve pr_curve(std::vector<RankedDetection> detections, std::size_t total_gt, double t) {
  if (!(t > 0.0 && t < 1.0)) throw DataError(fmt::format("IoU threshold must lie in (0, 1), got {}", t));
  std::stable_sort(detections.begin(), detections.end(), [](const auto& a, const auto& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.page != b.page) return a.page < b.page;
    return a.source_rank < b.source_rank;
  });
  PRCurve curve;
  curve.total_gt = total_gt;
  curve.perfect = total_gt == 0 && detections.empty();
  std::size_t tp = 0;
  for (std::size_t k = 0; k < detections.size(); ++k) {
    PRPoint pt;
    pt.rank = k + 1;
    pt.confidence = detections[k].confidence;
    pt.tp = total_gt > 0 && detections[k].matched_iou > t;
    tp += pt.tp;
    if (total_gt > 0) {
      pt.precision = static_cast<double>(tp) / static_cast<double>(k + 1);
      pt.recall = static_cast<double>(tp) / static_cast<double>(total_gt);
    }
    curve.points.push_back(pt);
  }
  return curve;
}

PRCurve pr_curve(const Pairing& pairing, std::span<const Detection> preds, double t) {
  const auto ious = pairing.iou_by_pred();
  std::vector<RankedDetection> ranked;
  ranked.reserve(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    ranked.push_back({preds[i].confidence, 0, preds[i].source_rank, ious.at(i)});
  }
  return pr_curve(std::move(ranked), pairing.n_gt, t);
}

double average_precision(const PRCurve& curve) {
  if (curve.perfect) return 1.0;
  if (curve.total_gt == 0 || curve.points.empty()) return 0.0;
  const auto& pts = curve.points;
  // Interpolated precision: running maximum from the tail.
  std::vector<double> interp(pts.size());
  double best = 0.0;
  for (std::size_t k = pts.size(); k-- > 0;) {
    best = std::max(best, pts[k].precision);
    interp[k] = best;
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (pts[k].recall > prev_recall) {
      ap += (pts[k].recall - prev_recall) * interp[k];
      prev_recall = pts[k].recall;
    }
  }
  return ap;
}

std::vector<int> iou_threshold_grid() {
  std::vector<int> grid;
  for (int t = 50; t <= 95; t += 5) grid.push_back(t);
  return grid;
}

std::vector<int> resolve_grid(std::span<const int> grid) {
  if (grid.empty()) return iou_threshold_grid();
  std::vector<int> out(grid.begin(), grid.end());
  for (int pct : out) {
    if (pct <= 0 || pct >= 100) throw DataError(fmt::format("IoU grid value {}% outside (0, 100)", pct));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<RankedDetection> ranked_detections(std::span<const ObjectPage> pages,
                                               std::span<const Pairing> pairings) {
  std::vector<RankedDetection> pooled;
  for (std::size_t p = 0; p < pages.size(); ++p) {
    const auto ious = pairings[p].iou_by_pred();
    for (std::size_t i = 0; i < pages[p].predictions.size(); ++i) {
      const auto& d = pages[p].predictions[i];
      pooled.push_back({d.confidence, p, d.source_rank, ious[i]});
    }
  }
  return pooled;
}

APResult evaluate_pairings(std::span<const ObjectPage> pages, std::span<const Pairing> pairings,
                           std::span<const int> requested) {
  if (pages.size() != pairings.size()) throw DataError("one pairing per page is required");
  APResult r;
  for (std::size_t p = 0; p < pages.size(); ++p) {
    r.n_pred += pages[p].predictions.size();
    r.n_gt += pages[p].ground_truth.size();
    r.matches += pairings[p].matches.size();
  }
  const auto pooled = ranked_detections(pages, pairings);
  const auto grid = resolve_grid(requested);
  for (int pct : grid) {
    const double t = pct / 100.0;
    const PRCurve curve = pr_curve(pooled, r.n_gt, t);
    r.ap_by_threshold[pct] = average_precision(curve);
    r.tp_by_threshold[pct] = static_cast<std::size_t>(
        std::count_if(curve.points.begin(), curve.points.end(), [](const PRPoint& pt) { return pt.tp; }));
    double macro = 0.0;
    for (std::size_t p = 0; p < pages.size(); ++p) {
      macro += average_precision(pr_curve(pairings[p], pages[p].predictions, t));
    }
    r.macro_ap_by_threshold[pct] = pages.empty() ? 0.0 : macro / static_cast<double>(pages.size());
  }
  auto mean = [&](const std::map<int, double>& m) {
    double s = 0.0;
    for (const auto& [_, v] : m) s += v;
    return s / static_cast<double>(m.size());
  };
  r.ap_range = mean(r.ap_by_threshold);
  r.macro_ap_range = mean(r.macro_ap_by_threshold);
  auto ap_at = [&](int pct) {
    const auto it = r.ap_by_threshold.find(pct);
    return it != r.ap_by_threshold.end() ? it->second : average_precision(pr_curve(pooled, r.n_gt, pct / 100.0));
  };
  r.ap50 = ap_at(50);
  r.ap75 = ap_at(75);
  return r;
}

APResult evaluate_objects(std::span<const ObjectPage> pages, std::span<const int> grid) {
  std::vector<Pairing> pairings;
  pairings.reserve(pages.size());
  for (const auto& page : pages) pairings.push_back(pair_objects(page.predictions, page.ground_truth));
  return evaluate_pairings(pages, pairings, grid);
}

}  // namespace lineseg
