#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "lineseg/error.hpp"
#include "lineseg/metrics_text.hpp"
#include "oracles.hpp"

namespace lineseg {
namespace {

TranscribedLine line(double x0, double y0, double x1, double y1, std::string text) {
  return {Polygon::rectangle(x0, y0, x1, y1), std::move(text), std::nullopt};
}

// Rectangle with the same height as rectangle(0, y, 100, y + 10) and IoU `iou` against it.
TranscribedLine shifted_line(double iou, double y, std::string text) {
  const double dx = 100.0 * (1.0 - iou) / (1.0 + iou);
  return line(dx, y, 100.0 + dx, y + 10.0, std::move(text));
}

TEST(EditDistanceTest, Examples) {
  EXPECT_EQ(edit_distance(U"abc", U"abc"), 0u);
  EXPECT_EQ(edit_distance(U"abc", U"abd"), 1u);
  EXPECT_EQ(edit_distance(U"", U"abcd"), 4u);
  EXPECT_EQ(edit_distance(U"kitten", U"sitting"), 3u);
}

TEST(EditDistanceTest, CountsScalarsNotBytes) {
  EXPECT_EQ(to_nfc_scalars("\xC3\xA9t\xC3\xA9").size(), 3u);
  EXPECT_DOUBLE_EQ(cer("\xC3\xA9t\xC3\xA9", "ete"), 2.0 / 3.0);
}

TEST(EditDistanceTest, NfcEquatesComposedAndDecomposed) {
  // U+00E9 versus e + U+0301.
  EXPECT_EQ(cer("caf\xC3\xA9", "cafe\xCC\x81"), 0.0);
}

TEST(EditDistanceTest, MalformedUtf8Throws) { EXPECT_THROW(to_nfc_scalars("ab\xFF"), DataError); }

TEST(EditDistanceTest, AgreesWithFullMatrixOracle) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(0, 25), ch(0, 3);
  for (int trial = 0; trial < 500; ++trial) {
    std::u32string a, b;
    for (int i = len(rng); i > 0; --i) a.push_back(U'a' + ch(rng));
    for (int i = len(rng); i > 0; --i) b.push_back(U'a' + ch(rng));
    EXPECT_EQ(edit_distance(a, b), oracle::full_edit_distance(a, b));
    EXPECT_EQ(edit_distance(a, b), edit_distance(b, a));
  }
}

TEST(CerTest, Examples) {
  EXPECT_EQ(cer("same", "same"), 0.0);
  EXPECT_DOUBLE_EQ(cer("abd", "abc"), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(wer("x y", "a b c"), 1.0);
  EXPECT_DOUBLE_EQ(cer("abc", ""), 3.0);
  EXPECT_GT(cer("a much longer guess", "ab"), 1.0);
}

TEST(CerTest, WordsSplitOnUnicodeWhitespace) {
  const auto w = split_words(to_nfc_scalars("  one\ttwo\xE2\x80\x83three, four  "));
  ASSERT_EQ(w.size(), 4u);
  EXPECT_EQ(w[2], U"three,");
}

TEST(CerTest, DistanceSymmetryAcrossNormalisation) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> len(1, 20), ch(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::string h, r;
    for (int i = len(rng); i > 0; --i) h.push_back(static_cast<char>('a' + ch(rng)));
    for (int i = len(rng); i > 0; --i) r.push_back(static_cast<char>('a' + ch(rng)));
    EXPECT_NEAR(cer(h, r) * r.size(), cer(r, h) * h.size(), 1e-9);
    EXPECT_EQ(cer(h, r) == 0.0, h == r);
  }
}

TEST(ReadingOrderTest, Sorting) {
  const std::vector<TranscribedLine> stacked{line(0, 20, 10, 30, "c"), line(0, 0, 10, 10, "a"),
                                             line(0, 10, 10, 20, "b")};
  EXPECT_EQ(reading_order(stacked), (std::vector<std::size_t>{1, 2, 0}));
  const std::vector<TranscribedLine> side{line(50, 0, 60, 10, "r"), line(0, 0, 10, 10, "l")};
  EXPECT_EQ(reading_order(side), (std::vector<std::size_t>{1, 0}));
  const std::vector<TranscribedLine> same{line(0, 0, 10, 10, "x"), line(0, 0, 10, 10, "y")};
  EXPECT_EQ(reading_order(same), (std::vector<std::size_t>{0, 1}));
}

std::vector<TranscribedLine> three_lines() {
  return {line(0, 0, 100, 10, "first line"), line(0, 20, 100, 30, "second"), line(0, 40, 100, 50, "third one")};
}

TEST(CerAtPageTest, Examples) {
  const auto gt = three_lines();
  EXPECT_EQ(cer_at_page(gt, gt).cer, 0.0);

  auto pred = gt;
  pred.erase(pred.begin() + 1);
  // N = 10 + 6 + 9 chars, J = 2 join spaces, dropped L = 6.
  EXPECT_DOUBLE_EQ(cer_at_page(pred, gt).cer, (6.0 + 1.0) / (25.0 + 2.0));

  auto shuffled = gt;
  std::reverse(shuffled.begin(), shuffled.end());
  EXPECT_EQ(cer_at_page(shuffled, gt).cer, 0.0);

  EXPECT_THROW(cer_at_page(gt, std::vector<TranscribedLine>{}), DataError);
}

TEST(CerAtLineTest, PerfectInput) {
  const auto gt = three_lines();
  const auto r = cer_at_line(gt, gt, 0.5);
  EXPECT_EQ(r.cer, 0.0);
  EXPECT_EQ(r.matched_char_fraction, 1.0);
  EXPECT_EQ(r.matched_pairs, 3u);
  const auto range = cer_range(gt, gt);
  EXPECT_EQ(range.cer_range, 0.0);
  for (const auto& [pct, rep] : range.by_threshold) EXPECT_EQ(rep.cer, 0.0) << pct;
}

TEST(CerAtLineTest, UnmatchedLinesCostTheirLength) {
  const std::vector<TranscribedLine> gt{line(0, 0, 100, 10, "abcdefghij"), line(0, 50, 100, 60, "klmnopqrst")};
  const std::vector<TranscribedLine> pred{shifted_line(0.8, 0, "abcdefghXY")};
  const auto at50 = cer_at_line(pred, gt, 0.5);
  EXPECT_DOUBLE_EQ(at50.cer, 0.6);
  EXPECT_DOUBLE_EQ(at50.matched_char_fraction, 0.5);
  EXPECT_EQ(at50.unmatched_gt, 1u);
  EXPECT_EQ(at50.unmatched_pred, 0u);

  const auto range = cer_range(pred, gt);
  EXPECT_DOUBLE_EQ(range.by_threshold.at(75).cer, 0.6);
  EXPECT_DOUBLE_EQ(range.by_threshold.at(85).cer, 1.0);
  double mean = 0.0;
  for (const auto& [pct, rep] : range.by_threshold) mean += rep.cer;
  EXPECT_NEAR(range.cer_range, mean / 10.0, 1e-12);
  // Thresholds 0.50..0.75 keep the couple, 0.80..0.95 lose it.
  EXPECT_NEAR(range.cer_range, (6 * 0.6 + 4 * 1.0) / 10.0, 1e-9);
}

TEST(CerAtLineTest, BelowThresholdCoupleIsUnmatched) {
  const std::vector<TranscribedLine> gt{line(0, 0, 100, 10, "abcdefghij")};
  const std::vector<TranscribedLine> pred{shifted_line(0.6, 0, "abcdefghij")};
  EXPECT_EQ(cer_at_line(pred, gt, 0.5).cer, 0.0);
  const auto r = cer_at_line(pred, gt, 0.75);
  EXPECT_EQ(r.cer, 1.0);
  EXPECT_EQ(r.matched_pairs, 0u);
  EXPECT_EQ(r.unmatched_gt, 1u);
  EXPECT_EQ(r.unmatched_pred, 1u);
}

TEST(CerAtLineTest, ExtraPredictionsAreNotPenalised) {
  const auto gt = three_lines();
  auto pred = gt;
  pred.push_back(line(0, 400, 100, 410, "noise"));
  const auto r = cer_at_line(pred, gt, 0.5);
  EXPECT_EQ(r.cer, 0.0);
  EXPECT_EQ(r.unmatched_pred, 1u);
}

TEST(CerAtLineTest, Preconditions) {
  const auto gt = three_lines();
  EXPECT_THROW(cer_at_line(gt, {}, 0.5), DataError);
  EXPECT_THROW(cer_at_line(gt, gt, 0.0), DataError);
  EXPECT_THROW(cer_at_line(gt, gt, 1.0), DataError);
}

TEST(CerAtLinePropertyTest, MonotoneInThreshold) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> iou(0.3, 1.0);
  std::uniform_int_distribution<int> n_lines(1, 6), ch(0, 3), len(0, 12);
  std::bernoulli_distribution drop(0.2);
  auto text = [&] {
    std::string s;
    for (int i = len(rng); i > 0; --i) s.push_back(static_cast<char>('a' + ch(rng)));
    return s;
  };
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TranscribedLine> gt, pred;
    for (int i = n_lines(rng); i > 0; --i) {
      const double y = 20.0 * i;
      gt.push_back(line(0, y, 100, y + 10, text()));
      // Hypotheses no longer than their reference: a couple then never costs more than |ref|.
      std::string hyp = text();
      hyp.resize(std::min(hyp.size(), gt.back().text.size()));
      if (!drop(rng)) pred.push_back(shifted_line(iou(rng), y, hyp));
    }
    const auto range = cer_range(pred, gt);
    double prev_cer = -1.0, prev_frac = 2.0;
    for (const auto& [pct, rep] : range.by_threshold) {
      EXPECT_GE(rep.cer, prev_cer - 1e-12);
      EXPECT_LE(rep.matched_char_fraction, prev_frac + 1e-12);
      prev_cer = rep.cer;
      prev_frac = rep.matched_char_fraction;
    }
  }
}

TEST(CerAtLinePropertyTest, ForcingUnmatchedAddsLengthMinusDistance) {
  const std::vector<TranscribedLine> gt{line(0, 0, 100, 10, "reference"), line(0, 20, 100, 30, "other")};
  const std::vector<TranscribedLine> pred{line(0, 0, 100, 10, "referense"), line(0, 20, 100, 30, "other")};
  std::vector<Polygon> polys{gt[0].polygon, gt[1].polygon};
  Pairing pairing = pair_objects(as_detections(pred), polys);
  const auto before = score_couples(pairing, pred, gt, 0.5);
  pairing.matches.erase(std::remove_if(pairing.matches.begin(), pairing.matches.end(),
                                       [](const Match& m) { return m.gt == 0; }),
                        pairing.matches.end());
  const auto after = score_couples(pairing, pred, gt, 0.5);
  EXPECT_EQ(after.char_errors - before.char_errors, 9u - 1u);
}

}  // namespace
}  // namespace lineseg
