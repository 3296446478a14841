#pragma once

// Test-only reference computations. Nothing here calls into the code under
// test beyond reading plain vertex lists.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "lineseg/geometry.hpp"

namespace lineseg::oracle {

// Inside intervals of a closed vertex loop along the horizontal line y, by
// nonzero winding. Simple polygons make nonzero and even-odd agree.
inline std::vector<std::pair<double, double>> row_intervals(const std::vector<Point>& v, double y) {
  std::vector<std::pair<double, int>> hits;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    if (a.y <= y && b.y > y) hits.push_back({a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x), +1});
    if (b.y <= y && a.y > y) hits.push_back({a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x), -1});
  }
  std::sort(hits.begin(), hits.end());
  std::vector<std::pair<double, double>> out;
  int wind = 0;
  double open = 0.0;
  for (const auto& [x, d] : hits) {
    const int before = wind;
    wind += d;
    if (before == 0 && wind != 0) open = x;
    if (before != 0 && wind == 0) out.push_back({open, x});
  }
  return out;
}

inline bool inside(const std::vector<std::pair<double, double>>& iv, double x) {
  for (const auto& [lo, hi] : iv) {
    if (x >= lo && x < hi) return true;
  }
  return false;
}

struct GridAreas {
  double area_a = 0.0;
  double area_b = 0.0;
  double inter = 0.0;
  double uni = 0.0;
};

// Samples an n x n grid of cell centers over the joint bounding box and
// counts covered cells, scaled to area units.
inline GridAreas grid_areas(const Polygon& a, const Polygon& b, int n) {
  auto lo = a.vertices().front();
  auto hi = lo;
  for (const auto* poly : {&a, &b}) {
    for (const auto& p : poly->vertices()) {
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
  }
  const double cw = (hi.x - lo.x) / n;
  const double ch = (hi.y - lo.y) / n;
  std::int64_t ca = 0, cb = 0, ci = 0, cu = 0;
  for (int r = 0; r < n; ++r) {
    const double y = lo.y + (r + 0.5) * ch;
    const auto ia = row_intervals(a.vertices(), y);
    const auto ib = row_intervals(b.vertices(), y);
    for (int c = 0; c < n; ++c) {
      const double x = lo.x + (c + 0.5) * cw;
      const bool in_a = inside(ia, x);
      const bool in_b = inside(ib, x);
      ca += in_a;
      cb += in_b;
      ci += in_a && in_b;
      cu += in_a || in_b;
    }
  }
  const double cell = cw * ch;
  return {ca * cell, cb * cell, ci * cell, cu * cell};
}

// Star-shaped polygon around (cx, cy): sorted random angles with random radii
// is always simple.
inline Polygon random_star(std::mt19937_64& rng, double cx, double cy, double r_min, double r_max,
                           int n_min = 3, int n_max = 12) {
  std::uniform_int_distribution<int> count(n_min, n_max);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> radius(r_min, r_max);
  const int n = count(rng);
  std::vector<double> angles(n);
  for (auto& a : angles) a = angle(rng);
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-3; }),
               angles.end());
  if (angles.size() < 3) return random_star(rng, cx, cy, r_min, r_max, n_min, n_max);
  std::vector<Point> pts;
  for (double a : angles) {
    const double r = radius(rng);
    pts.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  return Polygon(std::move(pts));
}

// Pixel-center containment by brute force, one point at a time.
inline bool contains_point(const Polygon& p, double x, double y) {
  bool in = false;
  const auto& v = p.vertices();
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > y) != (v[j].y > y) &&
        x < v[j].x + (y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y)) {
      in = !in;
    }
  }
  return in;
}

// Brute-force average precision for one page. iou[i][j] is the overlap of
// prediction i with ground truth j; predictions are ranked by confidence
// (descending), ties by index. Greedy pairing repeatedly takes the largest
// remaining IoU among free pairs. AP = (1/G) * sum_{j=1..G} max_{k: TP_k>=j} TP_k/k.
inline double brute_force_ap(const std::vector<std::vector<double>>& iou, const std::vector<double>& conf,
                             std::size_t n_gt, double t) {
  const std::size_t n = iou.size();
  std::vector<double> matched(n, -1.0);
  std::vector<bool> pred_used(n, false), gt_used(n_gt, false);
  while (true) {
    double best = 0.0;
    std::size_t bi = 0, bj = 0;
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (pred_used[i]) continue;
      for (std::size_t j = 0; j < n_gt; ++j) {
        if (gt_used[j] || iou[i][j] <= 0.0) continue;
        if (!found || iou[i][j] > best) {
          best = iou[i][j];
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    if (!found) break;
    pred_used[bi] = true;
    gt_used[bj] = true;
    matched[bi] = best;
  }
  if (n_gt == 0) return n == 0 ? 1.0 : 0.0;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return conf[a] > conf[b]; });
  std::vector<std::size_t> tp_at(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) tp_at[k + 1] = tp_at[k] + (matched[order[k]] > t ? 1 : 0);
  double ap = 0.0;
  for (std::size_t j = 1; j <= n_gt; ++j) {
    double best = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      if (tp_at[k] >= j) best = std::max(best, static_cast<double>(tp_at[k]) / static_cast<double>(k));
    }
    ap += best;
  }
  return ap / static_cast<double>(n_gt);
}

// Full-matrix Levenshtein distance, no trimming or row reuse.
template <typename Seq>
std::size_t full_edit_distance(const Seq& a, const Seq& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

}  // namespace lineseg::oracle
