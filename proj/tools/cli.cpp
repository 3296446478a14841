#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <memory>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "lineseg/config.hpp"
#include "lineseg/evaluate.hpp"
#include "lineseg/io.hpp"
#include "lineseg/normalize.hpp"
#include "lineseg/synth.hpp"
#include "lineseg/viz.hpp"

namespace lineseg {

namespace fs = std::filesystem;

namespace {

// Options write into holders; after parsing, only options that were given
// are applied on top of defaults, LINESEG_JOBS and the --config file.
class Overrides {
 public:
  template <typename T>
  CLI::Option* option(CLI::App* app, const std::string& name, std::function<void(RunConfig&, const T&)> set,
                      const std::string& desc) {
    auto holder = std::make_shared<T>();
    CLI::Option* o = app->add_option(name, *holder, desc);
    apply_.push_back([o, holder, set](RunConfig& c) {
      if (o->count() > 0) set(c, *holder);
    });
    return o;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, std::function<void(RunConfig&)> set,
                    const std::string& desc) {
    CLI::Option* o = app->add_flag(name, desc);
    apply_.push_back([o, set](RunConfig& c) {
      if (o->count() > 0) set(c);
    });
    return o;
  }

  void apply(RunConfig& c) const {
    for (const auto& f : apply_) f(c);
  }

 private:
  std::vector<std::function<void(RunConfig&)>> apply_;
};

struct Command {
  CLI::App* app = nullptr;
  Overrides overrides;
  std::string config_file;
};

void add_common(Command& cmd) {
  cmd.app->add_option("--config", cmd.config_file, "JSON run configuration (same shape as the report's config echo)");
  cmd.overrides.option<int>(cmd.app, "-j,--jobs", [](RunConfig& c, const int& v) { c.jobs = v; },
                            "Pages processed in parallel (default: LINESEG_JOBS or 1)");
}

void add_threshold_options(Command& cmd) {
  auto& o = cmd.overrides;
  o.option<double>(cmd.app, "-t,--threshold", [](RunConfig& c, const double& v) { c.threshold = v; },
                   "Probability threshold (default 0.7)");
  o.flag(cmd.app, "--aru-net", [](RunConfig& c) { c.threshold = kAruNetThreshold; }, "Preset: threshold 0.3");
  o.flag(cmd.app, "--dhsegment", [](RunConfig& c) { c.threshold = kDefaultProbabilityThreshold; },
         "Preset: threshold 0.7");
  o.flag(cmd.app, "--inclusive", [](RunConfig& c) { c.threshold_rule = ThresholdRule::kInclusive; },
         "Foreground when value >= t instead of > t");
  o.option<int>(cmd.app, "--min-cc", [](RunConfig& c, const int& v) { c.min_cc = v; },
                "Drop components smaller than this many pixels (default 50)");
}

RunConfig resolve(const Command& cmd, const std::string& name) {
  RunConfig c;
  c.command = name;
  if (const char* env = std::getenv("LINESEG_JOBS")) {
    try {
      c.jobs = std::stoi(env);
    } catch (const std::exception&) {
      throw DataError(fmt::format("LINESEG_JOBS is not an integer: \"{}\"", env));
    }
  }
  if (!cmd.config_file.empty()) c = parse_config(read_text_file(cmd.config_file), c);
  c.command = name;
  cmd.overrides.apply(c);
  c.validate();
  return c;
}

std::vector<PageAnnotation> load_inputs(const RunConfig& cfg, Warnings* warnings) {
  if (cfg.inputs.empty()) throw DataError("no input files given");
  std::vector<PageAnnotation> pages;
  for (const auto& in : cfg.inputs) {
    auto more = load_any_pages(in, warnings);
    pages.insert(pages.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  }
  std::sort(pages.begin(), pages.end(),
            [](const PageAnnotation& a, const PageAnnotation& b) { return a.page_id < b.page_id; });
  for (std::size_t i = 1; i < pages.size(); ++i) {
    if (pages[i].page_id == pages[i - 1].page_id) {
      throw DataError(fmt::format("duplicate page_id \"{}\"", pages[i].page_id));
    }
  }
  return pages;
}

void print_warnings(const Warnings& warnings, std::ostream& err) {
  for (const auto& w : warnings) {
    if (w.line >= 0) {
      fmt::print(err, "warning: page {} line {}: {}\n", w.page_id, w.line, w.message);
    } else {
      fmt::print(err, "warning: page {}: {}\n", w.page_id, w.message);
    }
  }
}

// File-name-safe rendering of a page id.
std::string file_stem(const std::string& page_id) {
  std::string s = page_id;
  for (char& c : s) {
    if (c == '/' || c == '\\' || c == ':') c = '_';
  }
  return s;
}

int cmd_normalize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Warnings warnings;
  const auto pages = load_inputs(cfg, &warnings);
  if (cfg.output.empty()) throw DataError("--output directory is required");
  const fs::path dir(cfg.output);
  fs::create_directories(dir / "labels");

  const auto n = static_cast<std::ptrdiff_t>(pages.size());
  std::vector<NormalizedPage> results(pages.size());
  std::vector<Mask> naive(cfg.naive ? pages.size() : 0, Mask(1, 1));
  std::vector<std::exception_ptr> errors(pages.size());
#pragma omp parallel for schedule(dynamic) num_threads(cfg.jobs)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      if (cfg.naive) {
        naive[k] = naive_label_image(pages[k], cfg.normalization.target_long_side);
      } else {
        results[k] = normalize_page(pages[k], cfg.normalization);
      }
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  nlohmann::json log = nlohmann::json::array();
  std::vector<PageAnnotation> normalized;
  std::size_t modified = 0;
  for (std::size_t k = 0; k < pages.size(); ++k) {
    const auto label_path = dir / "labels" / (file_stem(pages[k].page_id) + ".png");
    if (cfg.naive) {
      write_mask_png(label_path, naive[k]);
      continue;
    }
    const auto& r = results[k];
    write_mask_png(label_path, r.label);
    normalized.push_back(r.page);
    warnings.insert(warnings.end(), r.log.warnings.begin(), r.log.warnings.end());
    modified += r.log.modifications();
    nlohmann::json actions = nlohmann::json::array();
    for (const auto& a : r.log.actions) {
      actions.push_back({{"line_a", a.line_a},
                         {"line_b", a.line_b},
                         {"kind", std::string(to_string(a.kind))},
                         {"ratio_a", a.ratio_a},
                         {"ratio_b", a.ratio_b},
                         {"action", a.action},
                         {"loser", a.loser}});
    }
    log.push_back({{"page_id", r.log.page_id},
                   {"scale", r.log.scale},
                   {"label_width", r.log.label_width},
                   {"label_height", r.log.label_height},
                   {"actions", std::move(actions)}});
  }
  if (!cfg.naive) {
    save_pages(dir / "pages.json", normalized);
    write_text_file(dir / "normalization_log.json", log.dump(2) + "\n");
  }
  write_text_file(dir / "config.json", config_to_json(cfg));
  print_warnings(warnings, err);
  fmt::print(out, "{} pages written to {} ({} pair modifications)\n", pages.size(), dir.string(), modified);
  return kExitOk;
}

int cmd_extract(const RunConfig& cfg, bool binary, std::ostream& out, std::ostream& err) {
  if (cfg.inputs.empty()) throw DataError("no input images given");
  if (cfg.output.empty()) throw DataError("--output page file is required");
  std::vector<PageAnnotation> pages(cfg.inputs.size());
  std::vector<std::exception_ptr> errors(cfg.inputs.size());
  const auto n = static_cast<std::ptrdiff_t>(cfg.inputs.size());
#pragma omp parallel for schedule(dynamic) num_threads(cfg.jobs)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      const fs::path path(cfg.inputs[k]);
      PageAnnotation& page = pages[k];
      page.page_id = path.stem().string();
      if (binary) {
        const Mask m = read_mask_png(path);
        page.image_width = m.width();
        page.image_height = m.height();
        page.lines = extract_lines(m, cfg.min_cc);
      } else {
        const ProbabilityMap map = read_probability_png(path);
        page.image_width = map.width();
        page.image_height = map.height();
        page.lines = extract_lines(map, cfg.threshold, cfg.min_cc, cfg.threshold_rule);
      }
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::sort(pages.begin(), pages.end(),
            [](const PageAnnotation& a, const PageAnnotation& b) { return a.page_id < b.page_id; });
  for (std::size_t i = 1; i < pages.size(); ++i) {
    if (pages[i].page_id == pages[i - 1].page_id) {
      throw DataError(fmt::format("two inputs map to page_id \"{}\"", pages[i].page_id));
    }
  }
  save_pages(cfg.output, pages);
  std::size_t lines = 0;
  for (const auto& p : pages) lines += p.lines.size();
  print_warnings({}, err);
  fmt::print(out, "{} lines extracted from {} pages\n", lines, pages.size());
  return kExitOk;
}

int cmd_evaluate(RunConfig cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.tiers.any()) cfg.tiers = {true, true, false};
  Warnings warnings;
  const auto pages = load_eval_pages(cfg, &warnings);
  EvalReport report = evaluate_dataset(pages, cfg);
  warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());
  report.warnings = warnings;
  print_warnings(warnings, err);

  const bool want_json = std::find(cfg.report_formats.begin(), cfg.report_formats.end(), "json") !=
                         cfg.report_formats.end();
  const bool want_csv = std::find(cfg.report_formats.begin(), cfg.report_formats.end(), "csv") !=
                        cfg.report_formats.end();
  const std::string json_text = report_to_json(report);
  if (cfg.output.empty()) {
    out << json_text;
  } else {
    if (want_json) write_text_file(cfg.output, json_text);
    if (want_csv) {
      const fs::path csv = cfg.csv_output.empty() ? fs::path(cfg.output).replace_extension(".csv")
                                                  : fs::path(cfg.csv_output);
      write_text_file(csv, report_to_csv(report));
    }
  }
  if (!cfg.pr_curve.empty()) write_text_file(cfg.pr_curve, pr_curve_csv(report));
  if (!cfg.output.empty()) {
    if (report.pixel) fmt::print(out, "pixel IoU {:.4f}  F1 {:.4f}\n", report.pixel->micro.iou, report.pixel->micro.f1);
    if (report.object) {
      fmt::print(out, "AP@.5 {:.4f}  AP@.75 {:.4f}  AP@[.5,.95] {:.4f}\n", report.object->ap50, report.object->ap75,
                 report.object->ap_range);
    }
    if (report.text) {
      fmt::print(out, "CER@page {:.4f}  CER@[.5,.95] {:.4f}\n", report.text->page_pooled.cer, report.text->cer_range);
    }
  }
  return kExitOk;
}

int cmd_visualize(const RunConfig& cfg, bool overlay, bool outlines, std::ostream& out, std::ostream& err) {
  if (cfg.output.empty()) throw DataError("--output directory is required");
  if (!overlay && !outlines) overlay = outlines = true;
  Warnings warnings;
  const auto pages = load_eval_pages(cfg, &warnings);
  const fs::path dir(cfg.output);
  fs::create_directories(dir);
  std::vector<std::exception_ptr> errors(pages.size());
  const auto n = static_cast<std::ptrdiff_t>(pages.size());
#pragma omp parallel for schedule(dynamic) num_threads(cfg.jobs)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      const auto& p = pages[k];
      const int w = p.ground_truth.image_width, h = p.ground_truth.image_height;
      const auto gt_polys = p.ground_truth.polygons();
      const auto pred_polys = p.prediction.polygons();
      const std::string stem = file_stem(p.ground_truth.page_id);
      if (overlay) {
        const Mask gt = rasterize(gt_polys, w, h);
        const Mask pred = p.prediction_mask ? resize_nearest(*p.prediction_mask, w, h) : rasterize(pred_polys, w, h);
        write_rgb_png(dir / (stem + "_overlay.png"), confusion_overlay(pred, gt));
      }
      if (outlines) {
        const std::vector<PolygonLayer> layers{{gt_polys, {0, 90, 255}, 0.25, true},
                                               {pred_polys, {230, 0, 0}, 0.0, true}};
        write_rgb_png(dir / (stem + "_outlines.png"), draw_polygons(w, h, layers));
      }
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  print_warnings(warnings, err);
  fmt::print(out, "{} pages rendered to {}\n", pages.size(), dir.string());
  return kExitOk;
}

Perturbation parse_perturbation(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  auto num = [&](std::size_t i) {
    if (i >= parts.size()) throw DataError(fmt::format("perturbation \"{}\" is missing an argument", text));
    try {
      std::size_t used = 0;
      const double v = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw DataError(fmt::format("perturbation \"{}\": \"{}\" is not a number", text, parts[i]));
    }
  };
  auto index = [&](std::size_t i) {
    const double v = num(i);
    if (v < 0 || v != std::floor(v)) throw DataError(fmt::format("perturbation \"{}\": bad line index", text));
    return static_cast<std::size_t>(v);
  };
  const std::string& op = parts[0];
  if (op == "merge" && parts.size() == 3) return MergeLines{index(1), index(2)};
  if (op == "split" && parts.size() == 2) return SplitLine{index(1)};
  if (op == "thicken" && parts.size() == 2) return ThickenLines{num(1)};
  if (op == "shift" && parts.size() == 3) return ShiftLines{num(1), num(2)};
  if (op == "drop" && parts.size() == 2) return DropLine{index(1)};
  if (op == "noise" && (parts.size() == 2 || parts.size() == 3)) {
    return NoiseText{num(1), parts.size() == 3 ? static_cast<std::uint64_t>(index(2)) : 1};
  }
  throw DataError(fmt::format(
      "unknown perturbation \"{}\" (use merge:i:j, split:i, thicken:d, shift:dx:dy, drop:i, noise:rate[:seed])", text));
}

struct SynthOptions {
  SynthSpec spec;
  int pages = 1;
  std::vector<std::string> perturbations;
  std::string fixture;
  bool masks = false;
};

int cmd_synth(const RunConfig& cfg, const SynthOptions& so, std::ostream& out) {
  if (cfg.output.empty()) throw DataError("--output directory is required");
  if (so.pages < 1) throw DataError("--pages must be >= 1");
  const fs::path dir(cfg.output);
  fs::create_directories(dir);
  std::vector<PageAnnotation> gts, preds;
  if (so.fixture == "equal-iou") {
    SynthSpec spec = so.spec;
    if (spec.subpixel_step == 0.0) spec.subpixel_step = 0.1;
    const auto f = equal_iou_fixture(spec);
    for (const auto& [suffix, pred] : {std::pair{"merged", f.merged}, std::pair{"thickened", f.thickened}}) {
      PageAnnotation g = f.ground_truth;
      g.page_id = spec.page_id + "-" + suffix;
      PageAnnotation p = pred;
      p.page_id = g.page_id;
      gts.push_back(std::move(g));
      preds.push_back(std::move(p));
    }
    fmt::print(out, "equal-IoU fixture: thicken d = {:.4f}, pixel IoU {:.4f} (thickened) vs {:.4f} (merged)\n",
               f.thicken_d, f.thickened_iou, f.merged_iou);
  } else if (!so.fixture.empty()) {
    throw DataError(fmt::format("unknown fixture \"{}\" (available: equal-iou)", so.fixture));
  } else {
    std::vector<Perturbation> ops;
    for (const auto& t : so.perturbations) ops.push_back(parse_perturbation(t));
    for (int i = 0; i < so.pages; ++i) {
      SynthSpec spec = so.spec;
      spec.seed = so.spec.seed + static_cast<std::uint64_t>(i);
      spec.page_id = so.pages == 1 ? so.spec.page_id : fmt::format("{}-{:04d}", so.spec.page_id, i);
      PageAnnotation gt = generate_page(spec);
      PageAnnotation pred = gt;
      for (const auto& op : ops) pred = perturb(pred, op);
      gts.push_back(std::move(gt));
      preds.push_back(std::move(pred));
    }
  }
  save_pages(dir / "gt.json", gts);
  save_pages(dir / "pred.json", preds);
  if (so.masks) {
    fs::create_directories(dir / "masks");
    for (std::size_t i = 0; i < gts.size(); ++i) {
      const auto g = gts[i].polygons();
      const auto p = preds[i].polygons();
      const std::string stem = file_stem(gts[i].page_id);
      write_mask_png(dir / "masks" / (stem + "_gt.png"), rasterize(g, gts[i].image_width, gts[i].image_height));
      write_mask_png(dir / "masks" / (stem + "_pred.png"), rasterize(p, gts[i].image_width, gts[i].image_height));
    }
  }
  fmt::print(out, "{} synthetic pages written to {}\n", gts.size(), dir.string());
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Text-line segmentation toolkit: label normalization, post-processing and evaluation", "lineseg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // normalize
  Command norm;
  norm.app = app.add_subcommand("normalize", "Unify line annotations and write label images");
  add_common(norm);
  {
    auto& o = norm.overrides;
    o.option<std::vector<std::string>>(norm.app, "-i,--input",
                                       [](RunConfig& c, const std::vector<std::string>& v) { c.inputs = v; },
                                       "Page JSON or PAGE XML files");
    o.option<std::string>(norm.app, "-o,--output", [](RunConfig& c, const std::string& v) { c.output = v; },
                          "Output directory");
    o.flag(norm.app, "--naive", [](RunConfig& c) { c.naive = true; },
           "Rasterize at full size and downscale, without pair processing");
    o.flag(norm.app, "--bbox", [](RunConfig& c) { c.normalization.simplify_to_bbox = true; },
           "Replace polygons by their bounding rectangles first");
    o.option<double>(norm.app, "--overlap-threshold",
                     [](RunConfig& c, const double& v) { c.normalization.overlap_threshold = v; },
                     "Overlap fraction separating small from large overlaps (default 0.2)");
    o.option<double>(norm.app, "--erosion", [](RunConfig& c, const double& v) { c.normalization.erosion_px = v; },
                     "Erosion of touching lines in label pixels (default 1, 0 disables)");
    o.option<int>(norm.app, "--target-long-side",
                  [](RunConfig& c, const int& v) {
                    c.normalization.target_long_side = v > 0 ? std::optional<int>(v) : std::nullopt;
                  },
                  "Label image long side (default 768, 0 keeps the original scale)");
  }

  // extract
  Command extract;
  extract.app = app.add_subcommand("extract", "Turn probability maps or masks into line polygons");
  add_common(extract);
  add_threshold_options(extract);
  bool binary_inputs = false;
  {
    auto& o = extract.overrides;
    o.option<std::vector<std::string>>(extract.app, "-i,--input",
                                       [](RunConfig& c, const std::vector<std::string>& v) { c.inputs = v; },
                                       "Probability-map PNGs (page id = file stem)");
    o.option<std::string>(extract.app, "-o,--output", [](RunConfig& c, const std::string& v) { c.output = v; },
                          "Output page JSON");
    extract.app->add_flag("--mask", binary_inputs, "Inputs are binary masks (>= 128 is foreground)");
  }

  // evaluate and visualize share their input options
  auto add_eval_inputs = [](Command& cmd) {
    auto& o = cmd.overrides;
    o.option<std::string>(cmd.app, "-g,--gt", [](RunConfig& c, const std::string& v) { c.ground_truth = v; },
                          "Ground-truth page JSON or PAGE XML");
    o.option<std::string>(cmd.app, "-p,--pred", [](RunConfig& c, const std::string& v) { c.predictions = v; },
                          "Predicted page JSON or PAGE XML");
    o.option<std::string>(cmd.app, "-m,--manifest", [](RunConfig& c, const std::string& v) { c.manifest = v; },
                          "Dataset manifest (replaces --gt/--pred)");
  };

  Command eval;
  eval.app = app.add_subcommand("evaluate", "Score predictions against ground truth");
  add_common(eval);
  add_threshold_options(eval);
  add_eval_inputs(eval);
  {
    auto& o = eval.overrides;
    o.option<std::string>(eval.app, "-o,--output", [](RunConfig& c, const std::string& v) { c.output = v; },
                          "Report JSON (printed to stdout when absent)");
    o.option<std::string>(eval.app, "--csv", [](RunConfig& c, const std::string& v) { c.csv_output = v; },
                          "CSV summary path (default: report path with .csv)");
    o.option<std::vector<std::string>>(eval.app, "--formats",
                                       [](RunConfig& c, const std::vector<std::string>& v) { c.report_formats = v; },
                                       "Report formats to write: json, csv");
    o.flag(eval.app, "--pixel", [](RunConfig& c) { c.tiers.pixel = true; }, "Pixel tier");
    o.flag(eval.app, "--object", [](RunConfig& c) { c.tiers.object = true; }, "Object tier (AP)");
    o.flag(eval.app, "--text", [](RunConfig& c) { c.tiers.text = true; }, "Text tier (CER/WER); needs transcriptions");
    o.flag(eval.app, "--all", [](RunConfig& c) { c.tiers = {true, true, true}; }, "All three tiers");
    o.option<std::vector<int>>(eval.app, "--iou-grid", [](RunConfig& c, const std::vector<int>& v) { c.iou_grid = v; },
                               "IoU thresholds in percent (default 50 55 ... 95)");
    o.option<std::string>(eval.app, "--pr-curve", [](RunConfig& c, const std::string& v) { c.pr_curve = v; },
                          "Write the pooled PR curve as CSV");
    o.option<int>(eval.app, "--pr-curve-threshold", [](RunConfig& c, const int& v) { c.pr_curve_threshold = v; },
                  "IoU threshold of the PR-curve dump in percent (default 50)");
  }

  Command viz;
  viz.app = app.add_subcommand("visualize", "Render confusion overlays and polygon outlines");
  add_common(viz);
  add_threshold_options(viz);
  add_eval_inputs(viz);
  bool want_overlay = false, want_outlines = false;
  viz.overrides.option<std::string>(viz.app, "-o,--output", [](RunConfig& c, const std::string& v) { c.output = v; },
                                    "Output directory");
  viz.app->add_flag("--overlay", want_overlay, "Confusion overlay (TP black, TN green, FP cyan, FN red)");
  viz.app->add_flag("--outlines", want_outlines, "Ground truth and prediction outlines");

  Command syn;
  syn.app = app.add_subcommand("synth", "Generate synthetic pages and perturbed predictions");
  add_common(syn);
  SynthOptions so;
  syn.overrides.option<std::string>(syn.app, "-o,--output", [](RunConfig& c, const std::string& v) { c.output = v; },
                                    "Output directory");
  syn.app->add_option("--pages", so.pages, "Number of pages (seeds seed, seed+1, ...)");
  syn.app->add_option("--lines", so.spec.line_count, "Lines per page");
  syn.app->add_option("--width", so.spec.width, "Page width px");
  syn.app->add_option("--height", so.spec.height, "Page height px");
  syn.app->add_option("--line-height", so.spec.line_height, "Line height px");
  syn.app->add_option("--gap", so.spec.gap, "Gap between lines px");
  syn.app->add_option("--margin", so.spec.margin, "Page margin px");
  syn.app->add_option("--seed", so.spec.seed, "Random seed");
  syn.app->add_option("--subpixel-step", so.spec.subpixel_step, "Sub-pixel stagger of successive lines");
  syn.app->add_option("--page-id", so.spec.page_id, "Page id (prefix when several pages)");
  auto* text_len = syn.app->add_option("--text-length", "Fixed text length (default random 20-40)")->type_name("INT");
  syn.app->add_option("--perturb", so.perturbations,
                      "Applied to predictions in order: merge:i:j split:i thicken:d shift:dx:dy drop:i noise:rate[:seed]");
  syn.app->add_option("--fixture", so.fixture, "Named fixture instead of random pages: equal-iou");
  syn.app->add_flag("--masks", so.masks, "Also write rasterized gt and prediction masks");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (norm.app->parsed()) return cmd_normalize(resolve(norm, "normalize"), out, err);
    if (extract.app->parsed()) return cmd_extract(resolve(extract, "extract"), binary_inputs, out, err);
    if (eval.app->parsed()) return cmd_evaluate(resolve(eval, "evaluate"), out, err);
    if (viz.app->parsed()) return cmd_visualize(resolve(viz, "visualize"), want_overlay, want_outlines, out, err);
    if (syn.app->parsed()) {
      if (text_len->count() > 0) so.spec.text_length = text_len->as<int>();
      return cmd_synth(resolve(syn, "synth"), so, out);
    }
  } catch (const DataError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitData;
  } catch (const GeometryError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace lineseg
