#include "lineseg/metrics_text.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "lineseg/error.hpp"

namespace lineseg {

namespace {

template <typename T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
  // Common prefix and suffix never contribute edits.
  std::size_t lo = 0;
  while (lo < a.size() && lo < b.size() && a[lo] == b[lo]) ++lo;
  std::size_t ha = a.size(), hb = b.size();
  while (ha > lo && hb > lo && a[ha - 1] == b[hb - 1]) {
    --ha;
    --hb;
  }
  a = a.subspan(lo, ha - lo);
  b = b.subspan(lo, hb - lo);
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return a.size();
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

double rate(std::size_t errors, std::size_t ref) {
  return static_cast<double>(errors) / static_cast<double>(std::max<std::size_t>(ref, 1));
}

struct PreparedLine {
  std::u32string chars;
  std::vector<std::u32string> words;
};

PreparedLine prepare(const std::string& text) {
  PreparedLine p{to_nfc_scalars(text), {}};
  p.words = split_words(p.chars);
  return p;
}

void check_threshold(double t) {
  if (!(t > 0.0 && t < 1.0)) throw DataError(fmt::format("IoU threshold must lie in (0, 1), got {}", t));
}

// Per-match edit distances, computed once and reused across thresholds.
struct CoupleCosts {
  std::vector<std::size_t> char_errors;  // indexed like pairing.matches
  std::vector<std::size_t> word_errors;
  std::vector<std::size_t> gt_chars;  // indexed by gt line
  std::vector<std::size_t> gt_words;
};

CoupleCosts couple_costs(const Pairing& pairing, std::span<const TranscribedLine> pred,
                         std::span<const TranscribedLine> gt) {
  std::vector<PreparedLine> gt_prep;
  gt_prep.reserve(gt.size());
  CoupleCosts c;
  for (const auto& l : gt) {
    gt_prep.push_back(prepare(l.text));
    c.gt_chars.push_back(gt_prep.back().chars.size());
    c.gt_words.push_back(gt_prep.back().words.size());
  }
  for (const auto& m : pairing.matches) {
    const PreparedLine hyp = prepare(pred[m.pred].text);
    const PreparedLine& ref = gt_prep[m.gt];
    c.char_errors.push_back(edit_distance(hyp.chars, ref.chars));
    c.word_errors.push_back(edit_distance(hyp.words, ref.words));
  }
  return c;
}

CerReport score(const Pairing& pairing, const CoupleCosts& costs, double t) {
  CerReport r;
  r.ref_chars = std::accumulate(costs.gt_chars.begin(), costs.gt_chars.end(), std::size_t{0});
  r.ref_words = std::accumulate(costs.gt_words.begin(), costs.gt_words.end(), std::size_t{0});
  std::size_t counted_gt_words = 0;
  for (std::size_t k = 0; k < pairing.matches.size(); ++k) {
    const Match& m = pairing.matches[k];
    if (!(m.iou > t)) continue;
    ++r.matched_pairs;
    r.char_errors += costs.char_errors[k];
    r.word_errors += costs.word_errors[k];
    r.matched_chars += costs.gt_chars[m.gt];
    counted_gt_words += costs.gt_words[m.gt];
  }
  // Every ground-truth line outside a counted couple costs its full length.
  r.char_errors += r.ref_chars - r.matched_chars;
  r.word_errors += r.ref_words - counted_gt_words;
  r.unmatched_gt = pairing.n_gt - r.matched_pairs;
  r.unmatched_pred = pairing.n_pred - r.matched_pairs;
  r.cer = rate(r.char_errors, r.ref_chars);
  r.wer = rate(r.word_errors, r.ref_words);
  r.matched_char_fraction =
      r.ref_chars == 0 ? (r.unmatched_gt == 0 ? 1.0 : 0.0)
                       : static_cast<double>(r.matched_chars) / static_cast<double>(r.ref_chars);
  return r;
}

}  // namespace

std::u32string to_nfc_scalars(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw DataError("ICU NFC normalizer unavailable");
  icu::UnicodeString in = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  if (in.indexOf(static_cast<char16_t>(0xFFFD)) >= 0 &&
      utf8.find("\xEF\xBF\xBD") == std::string_view::npos) {
    throw DataError("text is not valid UTF-8");
  }
  icu::UnicodeString out = nfc->normalize(in, status);
  if (U_FAILURE(status)) throw DataError("NFC normalization failed");
  std::u32string scalars(static_cast<std::size_t>(out.countChar32()), U'\0');
  UErrorCode conv = U_ZERO_ERROR;
  out.toUTF32(reinterpret_cast<UChar32*>(scalars.data()), static_cast<int32_t>(scalars.size()), conv);
  if (U_FAILURE(conv) && conv != U_STRING_NOT_TERMINATED_WARNING) throw DataError("UTF-32 conversion failed");
  return scalars;
}

std::vector<std::u32string> split_words(std::u32string_view text) {
  std::vector<std::u32string> words;
  std::u32string cur;
  for (char32_t c : text) {
    if (u_isUWhiteSpace(static_cast<UChar32>(c))) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  return levenshtein<char32_t>(std::span(a.data(), a.size()), std::span(b.data(), b.size()));
}

std::size_t edit_distance(std::span<const std::u32string> a, std::span<const std::u32string> b) {
  return levenshtein<std::u32string>(a, b);
}

double cer(std::string_view hyp, std::string_view ref) {
  const auto h = to_nfc_scalars(hyp);
  const auto r = to_nfc_scalars(ref);
  return rate(edit_distance(h, r), r.size());
}

double wer(std::string_view hyp, std::string_view ref) {
  const auto h = split_words(to_nfc_scalars(hyp));
  const auto r = split_words(to_nfc_scalars(ref));
  return rate(edit_distance(h, r), r.size());
}

std::vector<std::size_t> reading_order(std::span<const TranscribedLine> lines) {
  std::vector<BoundingBox> boxes;
  boxes.reserve(lines.size());
  for (const auto& l : lines) boxes.push_back(to_bounding_box(l.polygon));
  std::vector<std::size_t> idx(lines.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (boxes[a].min.y != boxes[b].min.y) return boxes[a].min.y < boxes[b].min.y;
    return boxes[a].min.x < boxes[b].min.x;
  });
  return idx;
}

PageErrorRate cer_at_page(std::span<const TranscribedLine> pred, std::span<const TranscribedLine> gt,
                          std::string_view joiner) {
  if (gt.empty()) throw DataError("CER@page needs at least one ground-truth line");
  auto join = [&](std::span<const TranscribedLine> lines) {
    std::string text;
    bool first = true;
    for (auto i : reading_order(lines)) {
      if (!first) text.append(joiner);
      text.append(lines[i].text);
      first = false;
    }
    return to_nfc_scalars(text);
  };
  const auto hyp = join(pred);
  const auto ref = join(gt);
  const auto hyp_words = split_words(hyp);
  const auto ref_words = split_words(ref);
  PageErrorRate r;
  r.char_errors = edit_distance(hyp, ref);
  r.ref_chars = ref.size();
  r.word_errors = edit_distance(hyp_words, ref_words);
  r.ref_words = ref_words.size();
  r.cer = rate(r.char_errors, r.ref_chars);
  r.wer = rate(r.word_errors, r.ref_words);
  return r;
}

std::vector<Detection> as_detections(std::span<const TranscribedLine> lines) {
  std::vector<Detection> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out.push_back({lines[i].polygon, lines[i].confidence.value_or(1.0), i});
  }
  return out;
}

CerReport score_couples(const Pairing& pairing, std::span<const TranscribedLine> pred,
                        std::span<const TranscribedLine> gt, double t) {
  check_threshold(t);
  if (gt.empty()) throw DataError("CER@line needs at least one ground-truth line");
  return score(pairing, couple_costs(pairing, pred, gt), t);
}

CerReport cer_at_line(std::span<const TranscribedLine> pred, std::span<const TranscribedLine> gt, double t) {
  check_threshold(t);
  if (gt.empty()) throw DataError("CER@line needs at least one ground-truth line");
  std::vector<Polygon> gt_polys;
  for (const auto& l : gt) gt_polys.push_back(l.polygon);
  const Pairing pairing = pair_objects(as_detections(pred), gt_polys);
  return score(pairing, couple_costs(pairing, pred, gt), t);
}

std::map<int, CerReport> score_grid(const Pairing& pairing, std::span<const TranscribedLine> pred,
                                    std::span<const TranscribedLine> gt, std::span<const int> grid) {
  if (gt.empty()) throw DataError("CER@line needs at least one ground-truth line");
  const CoupleCosts costs = couple_costs(pairing, pred, gt);
  std::map<int, CerReport> out;
  for (int pct : resolve_grid(grid)) out[pct] = score(pairing, costs, pct / 100.0);
  return out;
}

CerRange cer_range(std::span<const TranscribedLine> pred, std::span<const TranscribedLine> gt,
                   std::span<const int> grid) {
  if (gt.empty()) throw DataError("CER@line needs at least one ground-truth line");
  std::vector<Polygon> gt_polys;
  for (const auto& l : gt) gt_polys.push_back(l.polygon);
  const Pairing pairing = pair_objects(as_detections(pred), gt_polys);
  CerRange r;
  r.by_threshold = score_grid(pairing, pred, gt, grid);
  for (const auto& [_, rep] : r.by_threshold) {
    r.cer_range += rep.cer;
    r.wer_range += rep.wer;
  }
  r.cer_range /= static_cast<double>(r.by_threshold.size());
  r.wer_range /= static_cast<double>(r.by_threshold.size());
  return r;
}

CerReport pool_reports(std::span<const CerReport> reports) {
  CerReport r;
  for (const auto& x : reports) {
    r.matched_pairs += x.matched_pairs;
    r.unmatched_gt += x.unmatched_gt;
    r.unmatched_pred += x.unmatched_pred;
    r.char_errors += x.char_errors;
    r.ref_chars += x.ref_chars;
    r.word_errors += x.word_errors;
    r.ref_words += x.ref_words;
    r.matched_chars += x.matched_chars;
  }
  r.cer = rate(r.char_errors, r.ref_chars);
  r.wer = rate(r.word_errors, r.ref_words);
  r.matched_char_fraction = r.ref_chars == 0 ? (r.unmatched_gt == 0 ? 1.0 : 0.0)
                                             : static_cast<double>(r.matched_chars) / r.ref_chars;
  return r;
}

}  // namespace lineseg
