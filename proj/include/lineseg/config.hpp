#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lineseg/normalize.hpp"
#include "lineseg/raster.hpp"

namespace lineseg {

inline constexpr double kDefaultProbabilityThreshold = 0.7;
inline constexpr double kAruNetThreshold = 0.3;
inline constexpr int kDefaultMinComponent = 50;

struct Tiers {
  bool pixel = false;
  bool object = false;
  bool text = false;

  bool any() const { return pixel || object || text; }
  bool operator==(const Tiers&) const = default;
};

// Everything a run depends on. Reports echo it in full, and feeding the
// echo back through --config repeats the run.
struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string ground_truth;
  std::string predictions;
  std::string manifest;
  std::string output;
  std::string csv_output;
  std::string pr_curve;
  int pr_curve_threshold = 50;  // percent

  NormalizationConfig normalization;
  bool naive = false;

  double threshold = kDefaultProbabilityThreshold;
  ThresholdRule threshold_rule = ThresholdRule::kStrict;
  int min_cc = kDefaultMinComponent;
  std::vector<int> iou_grid;  // percent; empty means the default grid
  Tiers tiers;
  std::vector<std::string> report_formats{"json", "csv"};
  int jobs = 1;

  // Throws DataError on out-of-range values.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

// Two-space indented JSON with sorted keys.
std::string config_to_json(const RunConfig& cfg);

// Fields missing from the document keep the values already in `base`.
// Unknown keys are rejected so that typos do not pass silently. A full
// report is accepted too; its "config" member is used.
RunConfig parse_config(std::string_view json_text, RunConfig base = {});

}  // namespace lineseg
