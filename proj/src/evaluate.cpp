#include "lineseg/evaluate.hpp"

#include <chrono>
#include <cstdlib>
#include <exception>
#include <set>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include "lineseg/io.hpp"

namespace lineseg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Polygon scale_axes(const Polygon& p, double sx, double sy) {
  std::vector<Point> v = p.vertices();
  for (auto& q : v) q = {q.x * sx, q.y * sy};
  return Polygon(std::move(v));
}

EvalPage raster_page(const PageAnnotation& gt, const PredictionSource& src, const RunConfig& cfg) {
  Mask mask(1, 1);
  std::vector<TextLine> lines;
  if (src.kind == PredictionSource::Kind::kMask) {
    mask = remove_small_components(read_mask_png(src.path), cfg.min_cc);
    lines = extract_lines(mask, 0);
  } else {
    const ProbabilityMap map = read_probability_png(src.path);
    const double t = src.threshold.value_or(cfg.threshold);
    mask = remove_small_components(threshold(map, t, cfg.threshold_rule), cfg.min_cc);
    lines = extract_lines(map, t, cfg.min_cc, cfg.threshold_rule);
  }
  const double sx = static_cast<double>(gt.image_width) / mask.width();
  const double sy = static_cast<double>(gt.image_height) / mask.height();
  if (sx != 1.0 || sy != 1.0) {
    for (auto& l : lines) l.polygon = scale_axes(l.polygon, sx, sy);
  }
  PageAnnotation pred{gt.page_id, gt.image_width, gt.image_height, std::move(lines)};
  return {gt, std::move(pred), std::move(mask)};
}

void add_paired(std::vector<EvalPage>& out, std::vector<PageAnnotation> gts, std::vector<PageAnnotation> preds) {
  std::map<std::string, PageAnnotation> by_id;
  for (auto& p : preds) by_id.emplace(p.page_id, std::move(p));
  std::vector<std::string> missing;
  for (auto& g : gts) {
    auto it = by_id.find(g.page_id);
    if (it == by_id.end()) {
      missing.push_back(g.page_id);
      continue;
    }
    out.push_back({std::move(g), std::move(it->second), std::nullopt});
    by_id.erase(it);
  }
  std::vector<std::string> extra;
  for (const auto& [id, _] : by_id) extra.push_back(id);
  if (!missing.empty() || !extra.empty()) {
    throw DataError(fmt::format("unmatched page ids: without prediction [{}]; without ground truth [{}]",
                                fmt::join(missing, ", "), fmt::join(extra, ", ")));
  }
}

json scores_json(const PixelScores& s) {
  return {{"precision", s.precision},
          {"recall", s.recall},
          {"iou", s.iou},
          {"f1", s.f1},
          {"tp", s.confusion.tp},
          {"fp", s.confusion.fp},
          {"fn", s.confusion.fn}};
}

json error_rate_json(const PageErrorRate& r) {
  return {{"cer", r.cer},
          {"wer", r.wer},
          {"char_errors", r.char_errors},
          {"ref_chars", r.ref_chars},
          {"word_errors", r.word_errors},
          {"ref_words", r.ref_words}};
}

json cer_report_json(const CerReport& r) {
  return {{"cer", r.cer},
          {"wer", r.wer},
          {"matched_char_fraction", r.matched_char_fraction},
          {"matched_pairs", r.matched_pairs},
          {"unmatched_gt", r.unmatched_gt},
          {"unmatched_pred", r.unmatched_pred},
          {"char_errors", r.char_errors},
          {"ref_chars", r.ref_chars}};
}

template <typename V>
json by_threshold(const std::map<int, V>& m) {
  json out = json::object();
  for (const auto& [pct, v] : m) out[fmt::format("{:02d}", pct)] = v;
  return out;
}

}  // namespace

std::vector<TextLine> extract_lines(const ProbabilityMap& map, double t, int min_cc, ThresholdRule rule) {
  const Mask m = remove_small_components(threshold(map, t, rule), min_cc);
  const auto comps = connected_components(m);
  const auto polys = extract_polygons(m);
  std::vector<TextLine> lines;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    lines.push_back({polys[i], std::nullopt, mean_probability(map, comps[i].pixels)});
  }
  return lines;
}

std::vector<TextLine> extract_lines(const Mask& mask, int min_cc) {
  std::vector<TextLine> lines;
  for (auto& p : extract_polygons(remove_small_components(mask, min_cc))) {
    lines.push_back({std::move(p), std::nullopt, 1.0});
  }
  return lines;
}

std::vector<PageAnnotation> load_any_pages(const fs::path& path, Warnings* warnings) {
  return path.extension() == ".xml" ? import_pagexml(path, warnings) : load_pages(path, warnings);
}

std::vector<EvalPage> load_eval_pages(const RunConfig& cfg, Warnings* warnings) {
  std::vector<EvalPage> out;
  if (!cfg.manifest.empty()) {
    const DatasetManifest m = load_manifest(cfg.manifest);
    for (const auto& e : m.entries) {
      auto gts = load_any_pages(e.ground_truth, warnings);
      if (e.prediction.kind == PredictionSource::Kind::kPages) {
        auto preds = load_any_pages(e.prediction.path, warnings);
        if (e.page_id) {
          std::erase_if(gts, [&](const PageAnnotation& p) { return p.page_id != *e.page_id; });
          std::erase_if(preds, [&](const PageAnnotation& p) { return p.page_id != *e.page_id; });
        }
        add_paired(out, std::move(gts), std::move(preds));
        continue;
      }
      const PageAnnotation* gt = nullptr;
      if (e.page_id) {
        for (const auto& p : gts) {
          if (p.page_id == *e.page_id) gt = &p;
        }
        if (gt == nullptr) {
          throw DataError(fmt::format("page \"{}\" not found in {}", *e.page_id, e.ground_truth.string()));
        }
      } else if (gts.size() == 1) {
        gt = &gts.front();
      } else {
        throw DataError(fmt::format("{} holds {} pages; a raster prediction needs \"page_id\"",
                                    e.ground_truth.string(), gts.size()));
      }
      out.push_back(raster_page(*gt, e.prediction, cfg));
    }
  } else {
    if (cfg.ground_truth.empty() || cfg.predictions.empty()) {
      throw DataError("evaluation needs ground truth and predictions, or a manifest");
    }
    add_paired(out, load_any_pages(cfg.ground_truth, warnings), load_any_pages(cfg.predictions, warnings));
  }
  std::sort(out.begin(), out.end(),
            [](const EvalPage& a, const EvalPage& b) { return a.ground_truth.page_id < b.ground_truth.page_id; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].ground_truth.page_id == out[i - 1].ground_truth.page_id) {
      throw DataError(fmt::format("duplicate page_id \"{}\"", out[i].ground_truth.page_id));
    }
  }
  return out;
}

EvalReport evaluate_dataset(const std::vector<EvalPage>& pages, const RunConfig& cfg) {
  cfg.validate();
  if (!cfg.tiers.any()) throw DataError("no evaluation tier selected");
  if (pages.empty()) throw DataError("evaluation needs at least one page");
  const auto grid = resolve_grid(cfg.iou_grid);
  if (cfg.tiers.text) {
    for (const auto& p : pages) {
      if (!p.ground_truth.all_lines_have_text() || !p.prediction.all_lines_have_text()) {
        throw DataError(fmt::format("text tier needs a transcription on every line; page \"{}\" has lines without text",
                                    p.ground_truth.page_id));
      }
    }
  }

  struct PageWork {
    PageReport report;
    std::optional<PixelConfusion> confusion;
    Pairing pairing;
    std::map<int, CerReport> text_lines;
    Warnings warnings;
    std::exception_ptr error;
  };
  const auto n = static_cast<std::ptrdiff_t>(pages.size());
  std::vector<PageWork> work(pages.size());

#pragma omp parallel for schedule(dynamic) num_threads(cfg.jobs)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const EvalPage& page = pages[static_cast<std::size_t>(i)];
    PageWork& w = work[static_cast<std::size_t>(i)];
    try {
      const auto& gt = page.ground_truth;
      const auto gt_polys = gt.polygons();
      w.report.page_id = gt.page_id;
      w.report.gt_lines = gt.lines.size();
      w.report.pred_lines = page.prediction.lines.size();
      if (cfg.tiers.pixel) {
        const Mask gt_mask = rasterize(gt_polys, gt.image_width, gt.image_height, &w.warnings);
        Mask pred_mask(1, 1);
        if (page.prediction_mask) {
          const Mask& m = *page.prediction_mask;
          pred_mask = (m.width() == gt.image_width && m.height() == gt.image_height)
                          ? m
                          : resize_nearest(m, gt.image_width, gt.image_height);
        } else {
          const auto pred_polys = page.prediction.polygons();
          pred_mask = rasterize(pred_polys, gt.image_width, gt.image_height, &w.warnings);
        }
        w.confusion = pixel_confusion(pred_mask, gt_mask);
        w.report.pixel = pixel_scores(*w.confusion);
      }
      std::vector<Detection> dets;
      for (std::size_t k = 0; k < page.prediction.lines.size(); ++k) {
        const auto& l = page.prediction.lines[k];
        dets.push_back({l.polygon, l.confidence.value_or(1.0), k});
      }
      if (cfg.tiers.object || cfg.tiers.text) w.pairing = pair_objects(dets, gt_polys);
      if (cfg.tiers.object) {
        double sum = 0.0;
        for (int pct : grid) sum += average_precision(pr_curve(w.pairing, dets, pct / 100.0));
        w.report.ap50 = average_precision(pr_curve(w.pairing, dets, 0.5));
        w.report.ap_range = sum / static_cast<double>(grid.size());
      }
      if (cfg.tiers.text) {
        auto transcribed = [](const PageAnnotation& p) {
          std::vector<TranscribedLine> out;
          for (const auto& l : p.lines) out.push_back({l.polygon, *l.text, l.confidence});
          return out;
        };
        const auto gt_lines = transcribed(gt);
        const auto pred_lines = transcribed(page.prediction);
        if (gt_lines.empty()) {
          warn(&w.warnings, gt.page_id, -1, "page has no ground-truth lines; skipped by the text tier");
        } else {
          w.report.text_page = cer_at_page(pred_lines, gt_lines);
          w.text_lines = score_grid(w.pairing, pred_lines, gt_lines, grid);
        }
      }
    } catch (...) {
      w.error = std::current_exception();
    }
  }

  EvalReport r;
  r.config = cfg;
  r.generated_at = current_timestamp();
  for (auto& w : work) {
    if (w.error) std::rethrow_exception(w.error);
    r.warnings.insert(r.warnings.end(), w.warnings.begin(), w.warnings.end());
    r.pages.push_back(w.report);
  }

  if (cfg.tiers.pixel) {
    std::vector<PagePixelScores> scored;
    for (const auto& w : work) scored.push_back({w.report.page_id, *w.report.pixel});
    r.pixel = aggregate_pixel(std::move(scored));
  }
  if (cfg.tiers.object) {
    std::vector<ObjectPage> obj;
    std::vector<Pairing> pairings;
    for (std::size_t i = 0; i < pages.size(); ++i) {
      ObjectPage op{pages[i].ground_truth.page_id, {}, pages[i].ground_truth.polygons()};
      for (std::size_t k = 0; k < pages[i].prediction.lines.size(); ++k) {
        const auto& l = pages[i].prediction.lines[k];
        op.predictions.push_back({l.polygon, l.confidence.value_or(1.0), k});
      }
      obj.push_back(std::move(op));
      pairings.push_back(work[i].pairing);
    }
    r.object = evaluate_pairings(obj, pairings, grid);
    r.ranked = ranked_detections(obj, pairings);
  }
  if (cfg.tiers.text) {
    TextSummary t;
    std::map<int, std::vector<CerReport>> per_threshold;
    for (const auto& w : work) {
      if (!w.report.text_page) continue;
      const auto& e = *w.report.text_page;
      ++t.pages_scored;
      t.page_pooled.char_errors += e.char_errors;
      t.page_pooled.ref_chars += e.ref_chars;
      t.page_pooled.word_errors += e.word_errors;
      t.page_pooled.ref_words += e.ref_words;
      t.page_cer_macro += e.cer;
      t.page_wer_macro += e.wer;
      for (const auto& [pct, rep] : w.text_lines) per_threshold[pct].push_back(rep);
    }
    if (t.pages_scored == 0) throw DataError("text tier: no page has ground-truth lines");
    const auto pages_scored = static_cast<double>(t.pages_scored);
    t.page_pooled.cer = static_cast<double>(t.page_pooled.char_errors) /
                        static_cast<double>(std::max<std::size_t>(t.page_pooled.ref_chars, 1));
    t.page_pooled.wer = static_cast<double>(t.page_pooled.word_errors) /
                        static_cast<double>(std::max<std::size_t>(t.page_pooled.ref_words, 1));
    t.page_cer_macro /= pages_scored;
    t.page_wer_macro /= pages_scored;
    for (const auto& [pct, reps] : per_threshold) {
      t.line_by_threshold[pct] = pool_reports(reps);
      t.cer_range += t.line_by_threshold[pct].cer;
      t.wer_range += t.line_by_threshold[pct].wer;
    }
    t.cer_range /= static_cast<double>(t.line_by_threshold.size());
    t.wer_range /= static_cast<double>(t.line_by_threshold.size());
    r.text = std::move(t);
  }
  return r;
}

std::string current_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      now = static_cast<std::time_t>(std::stoll(epoch));
    } catch (const std::exception&) {
      // Unparseable override: fall back to the clock.
    }
  }
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

std::string report_to_json(const EvalReport& r) {
  json doc;
  doc["tool"] = {{"name", "lineseg"}, {"version", r.tool_version}};
  doc["generated_at"] = r.generated_at;
  doc["config"] = json::parse(config_to_json(r.config));
  std::size_t gt_lines = 0, pred_lines = 0;
  json pages = json::array();
  for (const auto& p : r.pages) {
    gt_lines += p.gt_lines;
    pred_lines += p.pred_lines;
    json o = {{"page_id", p.page_id}, {"gt_lines", p.gt_lines}, {"pred_lines", p.pred_lines}};
    if (p.pixel) o["pixel"] = scores_json(*p.pixel);
    if (p.ap50) o["object"] = {{"ap50", *p.ap50}, {"ap_range", *p.ap_range}};
    if (p.text_page) o["text_page"] = error_rate_json(*p.text_page);
    pages.push_back(std::move(o));
  }
  doc["pages"] = std::move(pages);
  doc["dataset"] = {{"pages", r.pages.size()}, {"gt_lines", gt_lines}, {"pred_lines", pred_lines}};
  if (r.pixel) doc["pixel"] = {{"micro", scores_json(r.pixel->micro)}, {"macro", scores_json(r.pixel->macro)}};
  if (r.object) {
    const auto& o = *r.object;
    doc["object"] = {{"ap_by_threshold", by_threshold(o.ap_by_threshold)},
                     {"ap50", o.ap50},
                     {"ap75", o.ap75},
                     {"ap_range", o.ap_range},
                     {"macro_ap_by_threshold", by_threshold(o.macro_ap_by_threshold)},
                     {"macro_ap_range", o.macro_ap_range},
                     {"tp_by_threshold", by_threshold(o.tp_by_threshold)},
                     {"matches", o.matches},
                     {"n_pred", o.n_pred},
                     {"n_gt", o.n_gt}};
  }
  if (r.text) {
    const auto& t = *r.text;
    std::map<int, json> lines;
    for (const auto& [pct, rep] : t.line_by_threshold) lines[pct] = cer_report_json(rep);
    doc["text"] = {{"page_pooled", error_rate_json(t.page_pooled)},
                   {"page_cer_macro", t.page_cer_macro},
                   {"page_wer_macro", t.page_wer_macro},
                   {"line_by_threshold", by_threshold(lines)},
                   {"cer_range", t.cer_range},
                   {"wer_range", t.wer_range},
                   {"pages_scored", t.pages_scored}};
  }
  json warnings = json::array();
  for (const auto& w : r.warnings) {
    warnings.push_back({{"page_id", w.page_id}, {"line", w.line}, {"message", w.message}});
  }
  doc["warnings"] = std::move(warnings);
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& r) {
  std::string out = "scope,metric,value\n";
  auto row = [&](std::string_view scope, std::string_view metric, auto value) {
    out += fmt::format("{},{},{}\n", scope, metric, value);
  };
  if (r.pixel) {
    for (const auto& [name, s] : {std::pair{"micro", r.pixel->micro}, std::pair{"macro", r.pixel->macro}}) {
      row("dataset", fmt::format("pixel_{}_precision", name), s.precision);
      row("dataset", fmt::format("pixel_{}_recall", name), s.recall);
      row("dataset", fmt::format("pixel_{}_iou", name), s.iou);
      row("dataset", fmt::format("pixel_{}_f1", name), s.f1);
    }
  }
  if (r.object) {
    row("dataset", "ap50", r.object->ap50);
    row("dataset", "ap75", r.object->ap75);
    row("dataset", "ap_range", r.object->ap_range);
    for (const auto& [pct, v] : r.object->ap_by_threshold) row("dataset", fmt::format("ap_t{:02d}", pct), v);
  }
  if (r.text) {
    row("dataset", "cer_page", r.text->page_pooled.cer);
    row("dataset", "wer_page", r.text->page_pooled.wer);
    for (const auto& [pct, rep] : r.text->line_by_threshold) {
      row("dataset", fmt::format("cer_line_t{:02d}", pct), rep.cer);
      row("dataset", fmt::format("matched_char_fraction_t{:02d}", pct), rep.matched_char_fraction);
    }
    row("dataset", "cer_range", r.text->cer_range);
    row("dataset", "wer_range", r.text->wer_range);
  }
  for (const auto& p : r.pages) {
    // Page ids are free text; quote them when CSV would misread them.
    std::string scope = p.page_id;
    if (scope.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : scope) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      scope = q + "\"";
    }
    if (p.pixel) {
      row(scope, "pixel_iou", p.pixel->iou);
      row(scope, "pixel_f1", p.pixel->f1);
    }
    if (p.ap50) {
      row(scope, "ap50", *p.ap50);
      row(scope, "ap_range", *p.ap_range);
    }
    if (p.text_page) row(scope, "cer_page", p.text_page->cer);
  }
  return out;
}

std::string pr_curve_csv(const EvalReport& r) {
  if (!r.object) throw DataError("PR curve requires the object tier");
  std::size_t total_gt = r.object->n_gt;
  const PRCurve curve = pr_curve(r.ranked, total_gt, r.config.pr_curve_threshold / 100.0);
  std::string out = "rank,confidence,tp,precision,recall\n";
  for (const auto& p : curve.points) {
    out += fmt::format("{},{},{},{},{}\n", p.rank, p.confidence, p.tp ? 1 : 0, p.precision, p.recall);
  }
  return out;
}

}  // namespace lineseg
