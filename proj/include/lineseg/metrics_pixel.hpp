#pragma once

#include <map>
#include <string>
#include <vector>

#include "lineseg/raster.hpp"

namespace lineseg {

struct PixelScores {
  double precision = 0.0;
  double recall = 0.0;
  double iou = 0.0;
  double f1 = 0.0;
  PixelConfusion confusion;
};

// P = TP/(TP+FP), R = TP/(TP+FN), IoU = TP/(TP+FP+FN), F1 = 2TP/(2TP+FP+FN).
// An all-zero confusion (nothing to find, nothing predicted) scores 1.0
// everywhere; any other zero denominator gives 0.0.
PixelScores pixel_scores(const PixelConfusion& c);

struct PagePixelScores {
  std::string page_id;
  PixelScores scores;
};

struct PixelEvaluation {
  std::vector<PagePixelScores> pages;  // sorted by page id
  PixelScores micro;                   // from summed confusions
  PixelScores macro;                   // mean of per-page scores; confusion is the sum
};

// Prediction masks whose size differs from the ground truth are upscaled
// with nearest-neighbour sampling first. Throws DataError on an empty
// dataset or when page ids do not match (the message lists them).
PixelEvaluation evaluate_pixel(const std::map<std::string, Mask>& predictions,
                               const std::map<std::string, Mask>& ground_truth);

// Micro and macro aggregation over already-scored pages.
PixelEvaluation aggregate_pixel(std::vector<PagePixelScores> pages);

}  // namespace lineseg
