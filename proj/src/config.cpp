#include "lineseg/config.hpp"

#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "lineseg/error.hpp"

namespace lineseg {

using nlohmann::json;

namespace {

json to_json(const RunConfig& c) {
  const auto& n = c.normalization;
  return {
      {"command", c.command},
      {"inputs", c.inputs},
      {"ground_truth", c.ground_truth},
      {"predictions", c.predictions},
      {"manifest", c.manifest},
      {"output", c.output},
      {"csv_output", c.csv_output},
      {"pr_curve", c.pr_curve},
      {"pr_curve_threshold", c.pr_curve_threshold},
      {"normalization",
       {{"overlap_threshold", n.overlap_threshold},
        {"erosion_px", n.erosion_px},
        {"target_long_side", n.target_long_side ? json(*n.target_long_side) : json(nullptr)},
        {"simplify_to_bbox", n.simplify_to_bbox}}},
      {"naive", c.naive},
      {"threshold", c.threshold},
      {"threshold_rule", c.threshold_rule == ThresholdRule::kStrict ? "strict" : "inclusive"},
      {"min_cc", c.min_cc},
      {"iou_grid", c.iou_grid},
      {"tiers", {{"pixel", c.tiers.pixel}, {"object", c.tiers.object}, {"text", c.tiers.text}}},
      {"report_formats", c.report_formats},
      {"jobs", c.jobs},
  };
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.contains(key)) throw DataError(fmt::format("{}: unknown key \"{}\"", where, key));
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw DataError(fmt::format("config: \"{}\" has the wrong type", key));
  }
}

}  // namespace

void RunConfig::validate() const {
  normalization.validate();
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw DataError(fmt::format("probability threshold must lie in [0, 1], got {}", threshold));
  }
  if (min_cc < 0) throw DataError("min_cc must be >= 0");
  for (int pct : iou_grid) {
    if (pct <= 0 || pct >= 100) throw DataError(fmt::format("IoU grid value {} outside (0, 100)", pct));
  }
  if (pr_curve_threshold <= 0 || pr_curve_threshold >= 100) throw DataError("PR-curve threshold outside (0, 100)");
  for (const auto& f : report_formats) {
    if (f != "json" && f != "csv") throw DataError(fmt::format("unknown report format \"{}\"", f));
  }
  if (jobs < 1) throw DataError("jobs must be >= 1");
}

std::string config_to_json(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

RunConfig parse_config(std::string_view json_text, RunConfig base) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(fmt::format("malformed config JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw DataError("config is not a JSON object");
  // A report: take its config echo.
  if (doc.contains("tool") && doc.contains("config")) doc = doc["config"];
  if (!doc.is_object()) throw DataError("config is not a JSON object");
  std::set<std::string> known;
  const json defaults = to_json(base);
  for (const auto& [key, _] : defaults.items()) known.insert(key);
  reject_unknown(doc, known, "config");

  RunConfig c = std::move(base);
  read(doc, "command", c.command);
  read(doc, "inputs", c.inputs);
  read(doc, "ground_truth", c.ground_truth);
  read(doc, "predictions", c.predictions);
  read(doc, "manifest", c.manifest);
  read(doc, "output", c.output);
  read(doc, "csv_output", c.csv_output);
  read(doc, "pr_curve", c.pr_curve);
  read(doc, "pr_curve_threshold", c.pr_curve_threshold);
  read(doc, "naive", c.naive);
  read(doc, "threshold", c.threshold);
  read(doc, "min_cc", c.min_cc);
  read(doc, "iou_grid", c.iou_grid);
  read(doc, "report_formats", c.report_formats);
  read(doc, "jobs", c.jobs);
  if (const auto it = doc.find("threshold_rule"); it != doc.end()) {
    const std::string rule = it->is_string() ? it->get<std::string>() : "";
    if (rule == "strict") {
      c.threshold_rule = ThresholdRule::kStrict;
    } else if (rule == "inclusive") {
      c.threshold_rule = ThresholdRule::kInclusive;
    } else {
      throw DataError("config: threshold_rule must be \"strict\" or \"inclusive\"");
    }
  }
  if (const auto it = doc.find("normalization"); it != doc.end()) {
    if (!it->is_object()) throw DataError("config: normalization must be an object");
    reject_unknown(*it, {"overlap_threshold", "erosion_px", "target_long_side", "simplify_to_bbox"},
                   "config.normalization");
    auto& n = c.normalization;
    read(*it, "overlap_threshold", n.overlap_threshold);
    read(*it, "erosion_px", n.erosion_px);
    read(*it, "simplify_to_bbox", n.simplify_to_bbox);
    if (const auto t = it->find("target_long_side"); t != it->end()) {
      if (t->is_null()) {
        n.target_long_side.reset();
      } else if (t->is_number_integer()) {
        n.target_long_side = t->get<int>();
      } else {
        throw DataError("config: target_long_side must be an integer or null");
      }
    }
  }
  if (const auto it = doc.find("tiers"); it != doc.end()) {
    if (!it->is_object()) throw DataError("config: tiers must be an object");
    reject_unknown(*it, {"pixel", "object", "text"}, "config.tiers");
    read(*it, "pixel", c.tiers.pixel);
    read(*it, "object", c.tiers.object);
    read(*it, "text", c.tiers.text);
  }
  c.validate();
  return c;
}

}  // namespace lineseg
