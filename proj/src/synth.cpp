#include "lineseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "lineseg/error.hpp"
#include "lineseg/metrics_pixel.hpp"
#include "lineseg/raster.hpp"

namespace lineseg {

namespace {

constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz ";

std::string pseudo_text(std::mt19937_64& rng, std::optional<int> fixed_length) {
  const int len = fixed_length ? *fixed_length : 20 + static_cast<int>(rng() % 21);
  std::string s;
  s.reserve(static_cast<std::size_t>(len));
  for (int k = 0; k < len; ++k) {
    char c = kAlphabet[rng() % kAlphabet.size()];
    if (c == ' ' && (k == 0 || k == len - 1 || s.back() == ' ')) c = kAlphabet[rng() % 26];
    s.push_back(c);
  }
  return s;
}

void check_index(const PageAnnotation& page, std::size_t i) {
  if (i >= page.lines.size()) {
    throw DataError(fmt::format("line index {} out of range for page {} with {} lines", i, page.page_id,
                                page.lines.size()));
  }
}

BoundingBox box_of(const TextLine& l) { return to_bounding_box(l.polygon); }

PageAnnotation apply(const PageAnnotation& page, const MergeLines& op) {
  check_index(page, op.i);
  check_index(page, op.j);
  if (op.i == op.j) throw DataError("merge needs two distinct lines");
  const auto [lo, hi] = std::minmax(op.i, op.j);
  const BoundingBox a = box_of(page.lines[lo]), b = box_of(page.lines[hi]);
  PageAnnotation out = page;
  out.lines[lo].polygon = Polygon::rectangle(std::min(a.min.x, b.min.x), std::min(a.min.y, b.min.y),
                                             std::max(a.max.x, b.max.x), std::max(a.max.y, b.max.y));
  out.lines.erase(out.lines.begin() + static_cast<std::ptrdiff_t>(hi));
  return out;
}

PageAnnotation apply(const PageAnnotation& page, const SplitLine& op) {
  check_index(page, op.i);
  const BoundingBox b = box_of(page.lines[op.i]);
  const double mid = 0.5 * (b.min.x + b.max.x);
  TextLine left = page.lines[op.i], right = page.lines[op.i];
  left.polygon = Polygon::rectangle(b.min.x, b.min.y, mid, b.max.y);
  right.polygon = Polygon::rectangle(mid, b.min.y, b.max.x, b.max.y);
  if (const auto& t = page.lines[op.i].text) {
    left.text = t->substr(0, t->size() / 2);
    right.text = t->substr(t->size() / 2);
  }
  PageAnnotation out = page;
  out.lines[op.i] = std::move(left);
  out.lines.insert(out.lines.begin() + static_cast<std::ptrdiff_t>(op.i) + 1, std::move(right));
  return out;
}

PageAnnotation apply(const PageAnnotation& page, const ThickenLines& op) {
  if (!(op.d >= 0.0) || !std::isfinite(op.d)) throw DataError("thicken amount must be finite and >= 0");
  PageAnnotation out = page;
  const double w = page.image_width, h = page.image_height;
  for (auto& l : out.lines) {
    const BoundingBox b = box_of(l);
    l.polygon = Polygon::rectangle(std::max(0.0, b.min.x - op.d), std::max(0.0, b.min.y - op.d),
                                   std::min(w, b.max.x + op.d), std::min(h, b.max.y + op.d));
  }
  return out;
}

PageAnnotation apply(const PageAnnotation& page, const ShiftLines& op) {
  if (!std::isfinite(op.dx) || !std::isfinite(op.dy)) throw DataError("shift must be finite");
  PageAnnotation out = page;
  for (auto& l : out.lines) l.polygon = translate_polygon(l.polygon, op.dx, op.dy);
  return out;
}

PageAnnotation apply(const PageAnnotation& page, const DropLine& op) {
  check_index(page, op.i);
  PageAnnotation out = page;
  out.lines.erase(out.lines.begin() + static_cast<std::ptrdiff_t>(op.i));
  return out;
}

PageAnnotation apply(const PageAnnotation& page, const NoiseText& op) {
  if (!(op.rate >= 0.0 && op.rate <= 1.0)) throw DataError("noise rate must lie in [0, 1]");
  std::mt19937_64 rng(op.seed);
  PageAnnotation out = page;
  for (auto& l : out.lines) {
    if (!l.text) continue;
    for (char& c : *l.text) {
      // 53-bit uniform draw from a raw engine output.
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < op.rate) {
        const char sub = kAlphabet[rng() % 26];
        c = sub == c ? static_cast<char>('a' + (c - 'a' + 1) % 26) : sub;
      }
    }
  }
  return out;
}

double pixel_iou(const PageAnnotation& pred, const Mask& gt) {
  const auto polys = pred.polygons();
  const Mask m = rasterize(polys, gt.width(), gt.height());
  return pixel_scores(pixel_confusion(m, gt)).iou;
}

}  // namespace

void SynthSpec::validate() const {
  if (width <= 0 || height <= 0) throw DataError("synthetic page size must be positive");
  if (line_count < 0) throw DataError("line count must be >= 0");
  if (!(line_height > 0.0) || !(gap >= 0.0) || !(margin >= 0.0)) {
    throw DataError("line height must be > 0, gap and margin >= 0");
  }
  if (!(subpixel_step >= 0.0)) throw DataError("subpixel step must be >= 0");
  if (text_length && *text_length < 0) throw DataError("text length must be >= 0");
  if (2.0 * margin >= width) throw DataError("margins leave no room for lines");
  const double needed = 2.0 * margin + line_count * line_height + std::max(0, line_count - 1) * gap +
                        (subpixel_step > 0.0 ? 1.0 : 0.0);
  if (needed > height) {
    throw DataError(fmt::format("{} lines need {} px of page height, only {} available", line_count, needed, height));
  }
}

PageAnnotation generate_page(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  PageAnnotation page{spec.page_id, spec.width, spec.height, {}};
  for (int i = 0; i < spec.line_count; ++i) {
    const double offset = std::fmod(i * spec.subpixel_step, 1.0);
    const double y = spec.margin + i * (spec.line_height + spec.gap) + offset;
    page.lines.push_back({Polygon::rectangle(spec.margin, y, spec.width - spec.margin, y + spec.line_height),
                          pseudo_text(rng, spec.text_length), std::nullopt});
  }
  return page;
}

PageAnnotation perturb(const PageAnnotation& page, const Perturbation& op) {
  return std::visit([&](const auto& o) { return apply(page, o); }, op);
}

EqualIouFixture equal_iou_fixture(const SynthSpec& spec, std::size_t merge_first, std::optional<std::size_t> drop) {
  if (spec.line_count < 3) throw DataError("the equal-IoU fixture needs at least three lines");
  EqualIouFixture f;
  f.ground_truth = generate_page(spec);
  const std::size_t n = f.ground_truth.lines.size();
  if (merge_first + 1 >= n) throw DataError("merge index out of range");
  const std::size_t dropped = drop.value_or(merge_first + 2 < n ? n - 1 : 0);
  if (dropped == merge_first || dropped == merge_first + 1) throw DataError("dropped line must not be merged");
  check_index(f.ground_truth, dropped);

  // Drop first so the merge indices stay valid.
  const std::size_t shift = dropped < merge_first ? 1 : 0;
  f.merged = perturb(perturb(f.ground_truth, DropLine{dropped}), MergeLines{merge_first - shift, merge_first + 1 - shift});

  const auto gt_polys = f.ground_truth.polygons();
  const Mask gt = rasterize(gt_polys, spec.width, spec.height);
  f.merged_iou = pixel_iou(f.merged, gt);

  // Pixel IoU of the thickened page is non-increasing in d.
  double lo = 0.0, hi = std::max<double>(spec.width, spec.height);
  double best_d = 0.0, best_gap = std::abs(pixel_iou(f.ground_truth, gt) - f.merged_iou);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double iou = pixel_iou(perturb(f.ground_truth, ThickenLines{mid}), gt);
    if (std::abs(iou - f.merged_iou) < best_gap) {
      best_gap = std::abs(iou - f.merged_iou);
      best_d = mid;
    }
    if (iou > f.merged_iou) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  f.thicken_d = best_d;
  f.thickened = perturb(f.ground_truth, ThickenLines{best_d});
  f.thickened_iou = pixel_iou(f.thickened, gt);
  return f;
}

}  // namespace lineseg
