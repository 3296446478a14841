#include "lineseg/metrics_pixel.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace lineseg {

namespace {

double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

PixelScores pixel_scores(const PixelConfusion& c) {
  if (c.tp < 0 || c.fp < 0 || c.fn < 0) throw DataError("negative pixel count");
  PixelScores s;
  s.confusion = c;
  if (c.tp == 0 && c.fp == 0 && c.fn == 0) {
    s.precision = s.recall = s.iou = s.f1 = 1.0;
    return s;
  }
  s.precision = ratio(c.tp, c.tp + c.fp);
  s.recall = ratio(c.tp, c.tp + c.fn);
  s.iou = ratio(c.tp, c.tp + c.fp + c.fn);
  s.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  return s;
}

PixelEvaluation aggregate_pixel(std::vector<PagePixelScores> pages) {
  if (pages.empty()) throw DataError("pixel evaluation needs at least one page");
  std::sort(pages.begin(), pages.end(),
            [](const auto& a, const auto& b) { return a.page_id < b.page_id; });
  PixelEvaluation ev;
  PixelConfusion total;
  PixelScores mean;
  for (const auto& p : pages) {
    total += p.scores.confusion;
    mean.precision += p.scores.precision;
    mean.recall += p.scores.recall;
    mean.iou += p.scores.iou;
    mean.f1 += p.scores.f1;
  }
  const double n = static_cast<double>(pages.size());
  mean.precision /= n;
  mean.recall /= n;
  mean.iou /= n;
  mean.f1 /= n;
  mean.confusion = total;
  ev.micro = pixel_scores(total);
  ev.macro = mean;
  ev.pages = std::move(pages);
  return ev;
}

PixelEvaluation evaluate_pixel(const std::map<std::string, Mask>& predictions,
                               const std::map<std::string, Mask>& ground_truth) {
  if (ground_truth.empty() && predictions.empty()) {
    throw DataError("pixel evaluation needs at least one page");
  }
  std::vector<std::string> missing_pred, missing_gt;
  for (const auto& [id, _] : ground_truth) {
    if (!predictions.contains(id)) missing_pred.push_back(id);
  }
  for (const auto& [id, _] : predictions) {
    if (!ground_truth.contains(id)) missing_gt.push_back(id);
  }
  if (!missing_pred.empty() || !missing_gt.empty()) {
    throw DataError(fmt::format("unmatched page ids: without prediction [{}]; without ground truth [{}]",
                                fmt::join(missing_pred, ", "), fmt::join(missing_gt, ", ")));
  }
  std::vector<PagePixelScores> pages;
  for (const auto& [id, gt] : ground_truth) {
    const Mask& pred = predictions.at(id);
    const PixelConfusion c = (pred.width() == gt.width() && pred.height() == gt.height())
                                 ? pixel_confusion(pred, gt)
                                 : pixel_confusion(resize_nearest(pred, gt.width(), gt.height()), gt);
    pages.push_back({id, pixel_scores(c)});
  }
  return aggregate_pixel(std::move(pages));
}

}  // namespace lineseg
