#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lineseg/config.hpp"
#include "lineseg/error.hpp"
#include "lineseg/metrics_object.hpp"
#include "lineseg/metrics_pixel.hpp"
#include "lineseg/metrics_text.hpp"
#include "lineseg/page.hpp"
#include "lineseg/raster.hpp"

namespace lineseg {

inline constexpr const char* kToolVersion = "0.1.0";

// Post-processing of a network output: threshold, drop components smaller
// than min_cc pixels, trace one polygon per remaining component. Confidence
// is the mean probability inside the component.
std::vector<TextLine> extract_lines(const ProbabilityMap& map, double t, int min_cc,
                                    ThresholdRule rule = ThresholdRule::kStrict);
// Binary masks: confidence 1.
std::vector<TextLine> extract_lines(const Mask& mask, int min_cc);

// Page JSON or, for .xml files, PAGE XML.
std::vector<PageAnnotation> load_any_pages(const std::filesystem::path& path, Warnings* warnings);

// One ground-truth page with its prediction. Raster predictions keep their
// mask for the pixel tier; their polygons are extracted and scaled to the
// ground-truth image size.
struct EvalPage {
  PageAnnotation ground_truth;
  PageAnnotation prediction;
  std::optional<Mask> prediction_mask;
};

// Pairs ground truth and predictions by page id from two page files, or
// from a manifest. Throws DataError when any ground-truth page lacks a
// prediction or a prediction has no ground truth. Result sorted by page id.
std::vector<EvalPage> load_eval_pages(const RunConfig& cfg, Warnings* warnings);

struct PageReport {
  std::string page_id;
  std::size_t gt_lines = 0;
  std::size_t pred_lines = 0;
  std::optional<PixelScores> pixel;
  std::optional<double> ap50;
  std::optional<double> ap_range;
  std::optional<PageErrorRate> text_page;
};

struct TextSummary {
  PageErrorRate page_pooled;  // errors and reference lengths summed over pages
  double page_cer_macro = 0.0;
  double page_wer_macro = 0.0;
  std::map<int, CerReport> line_by_threshold;  // pooled over pages
  double cer_range = 0.0;
  double wer_range = 0.0;
  std::size_t pages_scored = 0;
};

struct EvalReport {
  std::string tool_version = kToolVersion;
  std::string generated_at;
  RunConfig config;
  std::vector<PageReport> pages;
  std::optional<PixelEvaluation> pixel;
  std::optional<APResult> object;
  std::optional<TextSummary> text;
  std::vector<RankedDetection> ranked;  // pooled detections, for PR-curve dumps
  Warnings warnings;
};

// Runs the selected tiers over `pages` (cfg.tiers, cfg.iou_grid, cfg.jobs).
// Throws DataError when the text tier is selected and some line lacks text.
EvalReport evaluate_dataset(const std::vector<EvalPage>& pages, const RunConfig& cfg);

// UTC "YYYY-MM-DDTHH:MM:SSZ"; SOURCE_DATE_EPOCH overrides the clock.
std::string current_timestamp();

// Sorted-key JSON; CSV rows "scope,metric,value".
std::string report_to_json(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);
// "rank,confidence,tp,precision,recall" at cfg.pr_curve_threshold.
std::string pr_curve_csv(const EvalReport& report);

}  // namespace lineseg
