#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lineseg/error.hpp"
#include "lineseg/page.hpp"
#include "lineseg/raster.hpp"
#include "lineseg/viz.hpp"

namespace lineseg {

// Page JSON: either {"pages": [page, ...]} or a single page object, where
//   page = {"page_id": str, "image_width": int, "image_height": int,
//           "lines": [{"polygon": [[x, y], ...], "text"?: str, "confidence"?: num}]}
// Vertices outside [0, width] x [0, height] are clamped with a warning.
// Throws DataError on malformed JSON, missing or non-positive dimensions,
// duplicate page ids and polygons that are invalid after clamping.
std::vector<PageAnnotation> parse_pages(std::string_view json_text, Warnings* warnings = nullptr);
std::vector<PageAnnotation> load_pages(const std::filesystem::path& path, Warnings* warnings = nullptr);

// Always writes the {"pages": [...]} form, two-space indented.
std::string serialize_pages(std::span<const PageAnnotation> pages);
void save_pages(const std::filesystem::path& path, std::span<const PageAnnotation> pages);

// PAGE XML subset: Page@imageWidth/imageHeight/imageFilename, TextLine with
// Coords@points (or Point children) and TextEquiv/Unicode. Lines with
// unparseable coordinates are skipped with a warning.
std::vector<PageAnnotation> parse_pagexml(std::string_view xml, const std::string& fallback_id,
                                          Warnings* warnings = nullptr);
std::vector<PageAnnotation> import_pagexml(const std::filesystem::path& path, Warnings* warnings = nullptr);

// PNG masks are 8-bit grayscale, 0 background and 255 foreground. Reading
// accepts any PNG; after conversion to gray, values >= 128 are foreground.
Mask read_mask_png(const std::filesystem::path& path);
void write_mask_png(const std::filesystem::path& path, const Mask& mask);

// Gray levels map to probabilities v / 255.
ProbabilityMap read_probability_png(const std::filesystem::path& path);
void write_probability_png(const std::filesystem::path& path, const ProbabilityMap& map);

RgbImage read_rgb_png(const std::filesystem::path& path);
void write_rgb_png(const std::filesystem::path& path, const RgbImage& image);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// One ground-truth file and where its predictions come from.
struct PredictionSource {
  enum class Kind { kPages, kMask, kProbability };
  Kind kind = Kind::kPages;
  std::filesystem::path path;
  std::optional<double> threshold;  // probability maps only; run default when absent
};

struct ManifestEntry {
  std::filesystem::path ground_truth;
  std::optional<std::string> page_id;  // required for raster sources on multi-page files
  PredictionSource prediction;
};

// {"name": str, "entries": [{"ground_truth": path, "page_id"?: str,
//   "prediction": {"pages" | "mask" | "probability": path, "threshold"?: num}}]}
// Relative paths are resolved against the manifest's directory.
struct DatasetManifest {
  std::string name;
  std::vector<ManifestEntry> entries;
};

DatasetManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir);
DatasetManifest load_manifest(const std::filesystem::path& path);

}  // namespace lineseg
