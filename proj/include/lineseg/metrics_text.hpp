#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lineseg/geometry.hpp"
#include "lineseg/metrics_object.hpp"

namespace lineseg {

// UTF-8 in, NFC-normalized Unicode scalar values out. Throws DataError on
// malformed UTF-8.
std::u32string to_nfc_scalars(std::string_view utf8);

// Splits on runs of Unicode whitespace; punctuation stays inside tokens.
std::vector<std::u32string> split_words(std::u32string_view text);

// Unit-cost Levenshtein distance.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);
std::size_t edit_distance(std::span<const std::u32string> a, std::span<const std::u32string> b);

// Character and word error rates: distance / max(|ref|, 1) after NFC.
double cer(std::string_view hyp, std::string_view ref);
double wer(std::string_view hyp, std::string_view ref);

struct TranscribedLine {
  Polygon polygon;
  std::string text;
  std::optional<double> confidence;
};

// Stable order by bounding-box top, then left edge, then input position.
std::vector<std::size_t> reading_order(std::span<const TranscribedLine> lines);

struct PageErrorRate {
  double cer = 0.0;
  double wer = 0.0;
  std::size_t char_errors = 0;
  std::size_t ref_chars = 0;
  std::size_t word_errors = 0;
  std::size_t ref_words = 0;
};

// Both sides put in reading order and joined with `joiner` into one text.
// Throws DataError when the ground-truth page has no lines.
PageErrorRate cer_at_page(std::span<const TranscribedLine> pred, std::span<const TranscribedLine> gt,
                          std::string_view joiner = " ");

struct CerReport {
  double cer = 0.0;
  double wer = 0.0;
  double matched_char_fraction = 0.0;
  std::size_t matched_pairs = 0;
  std::size_t unmatched_gt = 0;
  std::size_t unmatched_pred = 0;
  std::size_t char_errors = 0;
  std::size_t ref_chars = 0;
  std::size_t word_errors = 0;
  std::size_t ref_words = 0;
  std::size_t matched_chars = 0;
};

// Couples of `pairing` with IoU strictly above t contribute their edit
// distance; every other ground-truth line contributes its full length.
// Unmatched predictions are counted but add no errors.
CerReport score_couples(const Pairing& pairing, std::span<const TranscribedLine> pred,
                        std::span<const TranscribedLine> gt, double t);

// Pairs lines with pair_objects, then scores them at threshold t. Throws
// DataError when there are no ground-truth lines or t is not in (0, 1).
CerReport cer_at_line(std::span<const TranscribedLine> pred, std::span<const TranscribedLine> gt, double t);

struct CerRange {
  std::map<int, CerReport> by_threshold;  // key: threshold in percent
  double cer_range = 0.0;                 // mean CER over the grid
  double wer_range = 0.0;
};

// CER@line over an IoU grid in percent (default grid when empty), pairing once.
CerRange cer_range(std::span<const TranscribedLine> pred, std::span<const TranscribedLine> gt,
                   std::span<const int> grid = {});

// Reports per threshold from pairings computed elsewhere.
std::map<int, CerReport> score_grid(const Pairing& pairing, std::span<const TranscribedLine> pred,
                                    std::span<const TranscribedLine> gt, std::span<const int> grid = {});

// Detection view of transcribed lines (confidence defaults to 1, source
// rank = position).
std::vector<Detection> as_detections(std::span<const TranscribedLine> lines);

// Sums error counts of several pages into one report; ratios recomputed.
CerReport pool_reports(std::span<const CerReport> reports);

}  // namespace lineseg
