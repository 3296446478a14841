#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "lineseg/io.hpp"

namespace lineseg {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lineseg-io-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

constexpr const char* kMinimal = R"({"page_id": "p1", "image_width": 100, "image_height": 50,
  "lines": [{"polygon": [[0, 0], [10, 0], [10, 5], [0, 5]], "text": "hello"}]})";

TEST(PageJsonTest, MinimalPage) {
  Warnings w;
  const auto pages = parse_pages(kMinimal, &w);
  ASSERT_EQ(pages.size(), 1u);
  EXPECT_EQ(pages[0].page_id, "p1");
  EXPECT_EQ(pages[0].image_width, 100);
  ASSERT_EQ(pages[0].lines.size(), 1u);
  EXPECT_EQ(pages[0].lines[0].text, "hello");
  EXPECT_FALSE(pages[0].lines[0].confidence);
  EXPECT_NEAR(polygon_area(pages[0].lines[0].polygon), 50.0, 1e-12);
  EXPECT_TRUE(w.empty());
}

TEST(PageJsonTest, OutOfBoundsVertexIsClamped) {
  Warnings w;
  const auto pages = parse_pages(R"({"pages": [{"page_id": "q", "image_width": 20, "image_height": 10,
    "lines": [{"polygon": [[0, 0], [25, 0], [25, 5], [0, 5]]}]}]})",
                                 &w);
  const auto box = to_bounding_box(pages[0].lines[0].polygon);
  EXPECT_EQ(box.max.x, 20.0);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].page_id, "q");
  EXPECT_EQ(w[0].line, 0);
}

TEST(PageJsonTest, RejectsDocumentedMalformedCases) {
  try {
    parse_pages(R"({"pages": [{"page_id": "dup", "image_width": 5, "image_height": 5},
                              {"page_id": "dup", "image_width": 5, "image_height": 5}]})");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("dup"), std::string::npos);
  }
  EXPECT_THROW(parse_pages("{not json"), DataError);
  EXPECT_THROW(parse_pages(R"({"page_id": "a", "image_height": 5})"), DataError);
  EXPECT_THROW(parse_pages(R"({"page_id": "a", "image_width": 0, "image_height": 5})"), DataError);
  EXPECT_THROW(parse_pages(R"({"page_id": "a", "image_width": 5, "image_height": 5,
    "lines": [{"polygon": [[0, 0], [1, 1]]}]})"),
               DataError);
  EXPECT_THROW(parse_pages(R"({"page_id": "a", "image_width": 5, "image_height": 5,
    "lines": [{"polygon": [[0, 0], [1, 0], [1, 1]], "text": 3}]})"),
               DataError);
}

TEST_F(TempDir, PageRoundTrip) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<PageAnnotation> pages;
  for (int p = 0; p < 5; ++p) {
    PageAnnotation page{"page-" + std::to_string(p), 640, 480, {}};
    for (int i = 0; i < 7; ++i) {
      const double x0 = 600 * u(rng), y0 = 440 * u(rng);
      TextLine l{Polygon({{x0, y0}, {x0 + 30.125, y0 + 0.1}, {x0 + 31.7, y0 + 20.3}, {x0 + 0.3, y0 + 19.9}}),
                 std::nullopt, std::nullopt};
      if (i % 2 == 0) l.text = "caf\xC3\xA9 \"quoted\" line " + std::to_string(i);
      if (i % 3 == 0) l.confidence = u(rng);
      page.lines.push_back(std::move(l));
    }
    pages.push_back(std::move(page));
  }
  save_pages(dir_ / "pages.json", pages);
  EXPECT_EQ(load_pages(dir_ / "pages.json"), pages);
  EXPECT_EQ(serialize_pages(load_pages(dir_ / "pages.json")), serialize_pages(pages));
}

TEST_F(TempDir, MaskPngRoundTrip) {
  std::mt19937_64 rng(4);
  std::vector<std::uint8_t> bits(37 * 23);
  for (auto& b : bits) b = rng() % 2;
  const Mask m(37, 23, bits);
  write_mask_png(dir_ / "m.png", m);
  const Mask back = read_mask_png(dir_ / "m.png");
  EXPECT_EQ(back.width(), 37);
  EXPECT_EQ(back.height(), 23);
  EXPECT_TRUE(std::equal(back.bits().begin(), back.bits().end(), m.bits().begin()));
}

TEST_F(TempDir, ProbabilityAndRgbPng) {
  std::vector<float> v{0.0f, 0.2f, 0.7f, 1.0f};
  write_probability_png(dir_ / "p.png", ProbabilityMap(2, 2, v));
  const auto back = read_probability_png(dir_ / "p.png");
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(back.values()[i], v[i], 0.5 / 255.0 + 1e-6);

  RgbImage img(3, 2, {1, 2, 3});
  img.set(2, 1, {200, 100, 50});
  write_rgb_png(dir_ / "rgb.png", img);
  EXPECT_EQ(read_rgb_png(dir_ / "rgb.png"), img);

  EXPECT_THROW(read_mask_png(dir_ / "missing.png"), DataError);
}

TEST(PageXmlTest, CoordsTextAndMissingText) {
  const char* xml = R"(<?xml version="1.0" encoding="UTF-8"?>
<PcGts xmlns="http://schema.primaresearch.org/PAGE/gts/pagecontent/2019-07-15">
  <Page imageFilename="scans/folio_12.jpg" imageWidth="200" imageHeight="100">
    <TextRegion id="r1">
      <TextLine id="l1">
        <Coords points="0,0 10,0 10,5 0,5"/>
        <TextEquiv conf="0.9"><Unicode>first line</Unicode></TextEquiv>
      </TextLine>
      <TextLine id="l2">
        <Coords><Point x="20" y="20"/><Point x="40" y="20"/><Point x="40" y="30"/></Coords>
      </TextLine>
      <TextLine id="l3"><Coords points="1,2 nonsense"/></TextLine>
    </TextRegion>
  </Page>
</PcGts>)";
  Warnings w;
  const auto pages = parse_pagexml(xml, "fallback", &w);
  ASSERT_EQ(pages.size(), 1u);
  const auto& p = pages[0];
  EXPECT_EQ(p.page_id, "folio_12");
  EXPECT_EQ(p.image_width, 200);
  ASSERT_EQ(p.lines.size(), 2u);
  EXPECT_EQ(p.lines[0].polygon.size(), 4u);
  EXPECT_EQ(p.lines[0].text, "first line");
  EXPECT_EQ(p.lines[0].confidence, 0.9);
  EXPECT_FALSE(p.lines[1].text);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].line, 2);
}

TEST(PageXmlTest, EmptyPage) {
  const auto pages = parse_pagexml(R"(<PcGts><Page imageWidth="10" imageHeight="10"/></PcGts>)", "empty");
  ASSERT_EQ(pages.size(), 1u);
  EXPECT_EQ(pages[0].page_id, "empty");
  EXPECT_TRUE(pages[0].lines.empty());
  EXPECT_THROW(parse_pagexml("<PcGts><Page/></PcGts>", "x"), DataError);
}

TEST(ManifestTest, ParsesAndResolvesPaths) {
  const auto m = parse_manifest(R"({"name": "demo", "entries": [
      {"ground_truth": "gt/a.json", "prediction": {"pages": "pred/a.json"}},
      {"ground_truth": "/abs/b.json", "page_id": "b", "prediction": {"probability": "b.png", "threshold": 0.3}}]})",
                                "/data");
  EXPECT_EQ(m.name, "demo");
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_EQ(m.entries[0].ground_truth, fs::path("/data/gt/a.json"));
  EXPECT_EQ(m.entries[1].ground_truth, fs::path("/abs/b.json"));
  EXPECT_EQ(m.entries[1].prediction.kind, PredictionSource::Kind::kProbability);
  EXPECT_EQ(m.entries[1].prediction.threshold, 0.3);
  EXPECT_THROW(parse_manifest(R"({"entries": [{"ground_truth": "a", "prediction": {"pages": "x", "mask": "y"}}]})", "."),
               DataError);
  EXPECT_THROW(parse_manifest(R"({"entries": [{"ground_truth": "a", "prediction": {"mask": "y", "threshold": 0.5}}]})",
                              "."),
               DataError);
}

}  // namespace
}  // namespace lineseg
