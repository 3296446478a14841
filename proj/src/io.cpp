#include "lineseg/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <png.h>

namespace lineseg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
T required(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError(fmt::format("{}: missing \"{}\"", where, key));
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw DataError(fmt::format("{}: \"{}\" has the wrong type", where, key));
  }
}

Polygon checked_polygon(std::vector<Point> pts, const PageAnnotation& page, int line, Warnings* warnings) {
  bool clamped = false;
  for (auto& p : pts) {
    const Point c{std::clamp(p.x, 0.0, static_cast<double>(page.image_width)),
                  std::clamp(p.y, 0.0, static_cast<double>(page.image_height))};
    if (!(c == p)) clamped = true;
    p = c;
  }
  if (clamped) warn(warnings, page.page_id, line, "polygon vertices outside the image were clamped");
  try {
    Polygon poly(std::move(pts));
    if (poly.repaired()) warn(warnings, page.page_id, line, "self-intersecting polygon repaired");
    return poly;
  } catch (const GeometryError& e) {
    throw DataError(fmt::format("page {} line {}: {}", page.page_id, line, e.what()));
  }
}

PageAnnotation page_from_json(const json& j, Warnings* warnings) {
  if (!j.is_object()) throw DataError("page entry is not an object");
  PageAnnotation page;
  page.page_id = required<std::string>(j, "page_id", "page");
  const std::string where = "page " + page.page_id;
  page.image_width = required<int>(j, "image_width", where);
  page.image_height = required<int>(j, "image_height", where);
  if (page.image_width <= 0 || page.image_height <= 0) {
    throw DataError(fmt::format("{}: image dimensions must be positive", where));
  }
  const auto lines = j.find("lines");
  if (lines == j.end()) return page;
  if (!lines->is_array()) throw DataError(where + ": \"lines\" is not an array");
  int index = 0;
  for (const auto& l : *lines) {
    const std::string lw = fmt::format("{} line {}", where, index);
    if (!l.is_object()) throw DataError(lw + ": not an object");
    const auto pts_json = l.find("polygon");
    if (pts_json == l.end() || !pts_json->is_array()) throw DataError(lw + ": missing polygon");
    std::vector<Point> pts;
    for (const auto& p : *pts_json) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw DataError(lw + ": vertices must be [x, y] number pairs");
      }
      pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    TextLine line{checked_polygon(std::move(pts), page, index, warnings), std::nullopt, std::nullopt};
    if (const auto t = l.find("text"); t != l.end() && !t->is_null()) {
      if (!t->is_string()) throw DataError(lw + ": text must be a string");
      line.text = t->get<std::string>();
    }
    if (const auto c = l.find("confidence"); c != l.end() && !c->is_null()) {
      if (!c->is_number()) throw DataError(lw + ": confidence must be a number");
      line.confidence = c->get<double>();
    }
    page.lines.push_back(std::move(line));
    ++index;
  }
  return page;
}

json page_to_json(const PageAnnotation& page) {
  json lines = json::array();
  for (const auto& l : page.lines) {
    json pts = json::array();
    for (const auto& p : l.polygon.vertices()) pts.push_back({p.x, p.y});
    json o = {{"polygon", std::move(pts)}};
    if (l.text) o["text"] = *l.text;
    if (l.confidence) o["confidence"] = *l.confidence;
    lines.push_back(std::move(o));
  }
  return {{"page_id", page.page_id},
          {"image_width", page.image_width},
          {"image_height", page.image_height},
          {"lines", std::move(lines)}};
}

// libpng simplified API wrappers.
std::vector<std::uint8_t> read_png(const fs::path& path, std::uint32_t format, int& w, int& h) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.string().c_str())) {
    throw DataError(fmt::format("cannot read PNG {}: {}", path.string(), img.message));
  }
  img.format = format;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&img);
    throw DataError(fmt::format("cannot decode PNG {}: {}", path.string(), img.message));
  }
  w = static_cast<int>(img.width);
  h = static_cast<int>(img.height);
  return buf;
}

void write_png(const fs::path& path, std::uint32_t format, int w, int h, const std::uint8_t* data) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(w);
  img.height = static_cast<png_uint_32>(h);
  img.format = format;
  if (!png_image_write_to_file(&img, path.string().c_str(), 0, data, 0, nullptr)) {
    throw DataError(fmt::format("cannot write PNG {}: {}", path.string(), img.message));
  }
}

std::string local_name(const std::string& tag) {
  const auto colon = tag.rfind(':');
  return colon == std::string::npos ? tag : tag.substr(colon + 1);
}

using boost::property_tree::ptree;

const ptree* child_named(const ptree& node, const std::string& name) {
  for (const auto& [tag, child] : node) {
    if (local_name(tag) == name) return &child;
  }
  return nullptr;
}

std::optional<std::string> attribute(const ptree& node, const std::string& name) {
  const auto attrs = node.get_child_optional("<xmlattr>");
  if (!attrs) return std::nullopt;
  for (const auto& [key, value] : *attrs) {
    if (local_name(key) == name) return value.data();
  }
  return std::nullopt;
}

std::optional<std::vector<Point>> parse_coords(const ptree& coords) {
  std::vector<Point> pts;
  if (const auto points = attribute(coords, "points")) {
    std::istringstream in(*points);
    std::string pair;
    while (in >> pair) {
      const auto comma = pair.find(',');
      if (comma == std::string::npos) return std::nullopt;
      try {
        std::size_t used_x = 0, used_y = 0;
        const double x = std::stod(pair.substr(0, comma), &used_x);
        const double y = std::stod(pair.substr(comma + 1), &used_y);
        if (used_x != comma || used_y != pair.size() - comma - 1) return std::nullopt;
        pts.push_back({x, y});
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
  } else {
    for (const auto& [tag, child] : coords) {
      if (local_name(tag) != "Point") continue;
      const auto x = attribute(child, "x");
      const auto y = attribute(child, "y");
      if (!x || !y) return std::nullopt;
      try {
        pts.push_back({std::stod(*x), std::stod(*y)});
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
  }
  if (pts.empty()) return std::nullopt;
  return pts;
}

void collect_text_lines(const ptree& node, std::vector<const ptree*>& out) {
  for (const auto& [tag, child] : node) {
    if (tag == "<xmlattr>") continue;
    if (local_name(tag) == "TextLine") {
      out.push_back(&child);
    } else {
      collect_text_lines(child, out);
    }
  }
}

void collect_pages(const ptree& node, std::vector<const ptree*>& out) {
  for (const auto& [tag, child] : node) {
    if (tag == "<xmlattr>") continue;
    if (local_name(tag) == "Page") {
      out.push_back(&child);
    } else {
      collect_pages(child, out);
    }
  }
}

std::string manifest_path(const json& j, const char* key, const std::string& where) {
  const auto p = required<std::string>(j, key, where);
  if (p.empty()) throw DataError(fmt::format("{}: \"{}\" is empty", where, key));
  return p;
}

}  // namespace

std::vector<PageAnnotation> parse_pages(std::string_view json_text, Warnings* warnings) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(fmt::format("malformed page JSON: {}", e.what()));
  }
  std::vector<PageAnnotation> pages;
  if (doc.is_object() && doc.contains("pages")) {
    if (!doc["pages"].is_array()) throw DataError("\"pages\" is not an array");
    for (const auto& p : doc["pages"]) pages.push_back(page_from_json(p, warnings));
  } else {
    pages.push_back(page_from_json(doc, warnings));
  }
  std::set<std::string> seen;
  for (const auto& p : pages) {
    if (!seen.insert(p.page_id).second) throw DataError(fmt::format("duplicate page_id \"{}\"", p.page_id));
  }
  return pages;
}

std::vector<PageAnnotation> load_pages(const fs::path& path, Warnings* warnings) {
  return parse_pages(read_text_file(path), warnings);
}

std::string serialize_pages(std::span<const PageAnnotation> pages) {
  json arr = json::array();
  for (const auto& p : pages) arr.push_back(page_to_json(p));
  return json{{"pages", std::move(arr)}}.dump(2) + "\n";
}

void save_pages(const fs::path& path, std::span<const PageAnnotation> pages) {
  write_text_file(path, serialize_pages(pages));
}

std::vector<PageAnnotation> parse_pagexml(std::string_view xml, const std::string& fallback_id,
                                          Warnings* warnings) {
  ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    boost::property_tree::read_xml(in, tree);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw DataError(fmt::format("malformed PAGE XML: {}", e.what()));
  }
  std::vector<const ptree*> page_nodes;
  collect_pages(tree, page_nodes);
  if (page_nodes.empty()) throw DataError("PAGE XML has no Page element");
  std::vector<PageAnnotation> pages;
  for (std::size_t k = 0; k < page_nodes.size(); ++k) {
    const ptree& node = *page_nodes[k];
    PageAnnotation page;
    const auto file = attribute(node, "imageFilename");
    page.page_id = file ? fs::path(*file).stem().string() : fallback_id;
    if (page_nodes.size() > 1 && !file) page.page_id += fmt::format("-{}", k);
    try {
      page.image_width = std::stoi(attribute(node, "imageWidth").value_or(""));
      page.image_height = std::stoi(attribute(node, "imageHeight").value_or(""));
    } catch (const std::exception&) {
      throw DataError(fmt::format("page {}: missing or invalid imageWidth/imageHeight", page.page_id));
    }
    if (page.image_width <= 0 || page.image_height <= 0) {
      throw DataError(fmt::format("page {}: image dimensions must be positive", page.page_id));
    }
    std::vector<const ptree*> text_lines;
    collect_text_lines(node, text_lines);
    for (std::size_t i = 0; i < text_lines.size(); ++i) {
      const int index = static_cast<int>(i);
      const ptree* coords = child_named(*text_lines[i], "Coords");
      auto pts = coords ? parse_coords(*coords) : std::nullopt;
      if (!pts) {
        warn(warnings, page.page_id, index, "TextLine coordinates unparseable; line skipped");
        continue;
      }
      std::optional<Polygon> poly;
      try {
        poly = checked_polygon(std::move(*pts), page, index, warnings);
      } catch (const DataError&) {
        warn(warnings, page.page_id, index, "TextLine polygon degenerate; line skipped");
        continue;
      }
      TextLine line{std::move(*poly), std::nullopt, std::nullopt};
      if (const ptree* equiv = child_named(*text_lines[i], "TextEquiv")) {
        if (const ptree* uni = child_named(*equiv, "Unicode")) line.text = uni->data();
        if (const auto conf = attribute(*equiv, "conf")) {
          try {
            line.confidence = std::stod(*conf);
          } catch (const std::exception&) {
            warn(warnings, page.page_id, index, "TextEquiv confidence unparseable; ignored");
          }
        }
      }
      page.lines.push_back(std::move(line));
    }
    pages.push_back(std::move(page));
  }
  return pages;
}

std::vector<PageAnnotation> import_pagexml(const fs::path& path, Warnings* warnings) {
  return parse_pagexml(read_text_file(path), path.stem().string(), warnings);
}

Mask read_mask_png(const fs::path& path) {
  int w = 0, h = 0;
  auto buf = read_png(path, PNG_FORMAT_GRAY, w, h);
  for (auto& v : buf) v = v >= 128 ? 1 : 0;
  return Mask(w, h, std::move(buf));
}

void write_mask_png(const fs::path& path, const Mask& mask) {
  std::vector<std::uint8_t> buf(mask.bits().begin(), mask.bits().end());
  for (auto& v : buf) v = v ? 255 : 0;
  write_png(path, PNG_FORMAT_GRAY, mask.width(), mask.height(), buf.data());
}

ProbabilityMap read_probability_png(const fs::path& path) {
  int w = 0, h = 0;
  const auto buf = read_png(path, PNG_FORMAT_GRAY, w, h);
  std::vector<float> values(buf.size());
  std::transform(buf.begin(), buf.end(), values.begin(), [](std::uint8_t v) { return v / 255.0f; });
  return ProbabilityMap(w, h, std::move(values));
}

void write_probability_png(const fs::path& path, const ProbabilityMap& map) {
  std::vector<std::uint8_t> buf(map.values().size());
  std::transform(map.values().begin(), map.values().end(), buf.begin(),
                 [](float v) { return static_cast<std::uint8_t>(std::lround(v * 255.0f)); });
  write_png(path, PNG_FORMAT_GRAY, map.width(), map.height(), buf.data());
}

RgbImage read_rgb_png(const fs::path& path) {
  int w = 0, h = 0;
  auto buf = read_png(path, PNG_FORMAT_RGB, w, h);
  RgbImage img(w, h);
  img.data = std::move(buf);
  return img;
}

void write_rgb_png(const fs::path& path, const RgbImage& image) {
  write_png(path, PNG_FORMAT_RGB, image.width, image.height, image.data.data());
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError(fmt::format("write failed for {}", path.string()));
}

DatasetManifest parse_manifest(std::string_view json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(fmt::format("malformed manifest JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw DataError("manifest is not an object");
  DatasetManifest m;
  m.name = doc.value("name", std::string{});
  const auto entries = doc.find("entries");
  if (entries == doc.end() || !entries->is_array()) throw DataError("manifest: missing \"entries\" array");
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  for (std::size_t i = 0; i < entries->size(); ++i) {
    const json& e = (*entries)[i];
    const std::string where = fmt::format("manifest entry {}", i);
    if (!e.is_object()) throw DataError(where + ": not an object");
    ManifestEntry entry;
    entry.ground_truth = resolve(manifest_path(e, "ground_truth", where));
    if (e.contains("page_id")) entry.page_id = required<std::string>(e, "page_id", where);
    const auto pred = e.find("prediction");
    if (pred == e.end() || !pred->is_object()) throw DataError(where + ": missing \"prediction\" object");
    int kinds = 0;
    for (const auto& [key, kind] : {std::pair{"pages", PredictionSource::Kind::kPages},
                                    std::pair{"mask", PredictionSource::Kind::kMask},
                                    std::pair{"probability", PredictionSource::Kind::kProbability}}) {
      if (!pred->contains(key)) continue;
      ++kinds;
      entry.prediction.kind = kind;
      entry.prediction.path = resolve(manifest_path(*pred, key, where));
    }
    if (kinds != 1) throw DataError(where + ": prediction needs exactly one of pages, mask, probability");
    if (pred->contains("threshold")) {
      entry.prediction.threshold = required<double>(*pred, "threshold", where);
      if (entry.prediction.kind != PredictionSource::Kind::kProbability) {
        throw DataError(where + ": threshold only applies to probability maps");
      }
    }
    m.entries.push_back(std::move(entry));
  }
  return m;
}

DatasetManifest load_manifest(const fs::path& path) {
  return parse_manifest(read_text_file(path), path.parent_path());
}

}  // namespace lineseg
