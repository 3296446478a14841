#include <random>

#include <gtest/gtest.h>

#include "lineseg/error.hpp"
#include "lineseg/geometry.hpp"
#include "oracles.hpp"

namespace lineseg {
namespace {

Polygon unit_square() { return Polygon::rectangle(0, 0, 1, 1); }

TEST(PolygonTest, RejectsDegenerateInput) {
  EXPECT_THROW(Polygon({{0, 0}, {1, 1}}), GeometryError);
  EXPECT_THROW(Polygon({{0, 0}, {1, 1}, {1, 1}, {0, 0}}), GeometryError);
  EXPECT_THROW(Polygon({{0, 0}, {1, 0}, {std::nan(""), 1}}), GeometryError);
}

TEST(PolygonTest, DropsClosingVertex) {
  Polygon p({{0, 0}, {4, 0}, {4, 3}, {0, 0}});
  EXPECT_EQ(p.size(), 3u);
}

TEST(PolygonTest, RepairsBowTie) {
  // Figure eight: two triangles meeting at (2, 1); lobes of area 2 and 4.
  Polygon p({{0, 0}, {4, 2}, {4, 0}, {0, 2}});
  EXPECT_TRUE(p.repaired());
  EXPECT_NEAR(polygon_area(p), 2.0, 1e-9);

  Polygon q({{0, 0}, {6, 3}, {6, 0}, {0, 2}});
  EXPECT_TRUE(q.repaired());
  EXPECT_GT(polygon_area(q), 2.0);
}

TEST(PolygonTest, ValidInputIsNotRepaired) {
  EXPECT_FALSE(unit_square().repaired());
}

TEST(GeometryTest, PolygonArea) {
  EXPECT_DOUBLE_EQ(polygon_area(unit_square()), 1.0);
  EXPECT_DOUBLE_EQ(polygon_area(Polygon::rectangle(0, 0, 100, 20)), 2000.0);
  EXPECT_DOUBLE_EQ(polygon_area(Polygon({{0, 0}, {4, 0}, {0, 3}})), 6.0);
  // Orientation does not matter.
  EXPECT_DOUBLE_EQ(polygon_area(Polygon({{0, 0}, {0, 3}, {4, 0}})), 6.0);
}

TEST(GeometryTest, IntersectionArea) {
  EXPECT_NEAR(intersection_area(unit_square(), unit_square()), 1.0, 1e-12);
  EXPECT_NEAR(intersection_area(Polygon::rectangle(0, 0, 2, 2), Polygon::rectangle(1, 1, 3, 3)),
              1.0, 1e-12);
  EXPECT_EQ(intersection_area(Polygon::rectangle(0, 0, 10, 10), Polygon::rectangle(10, 0, 20, 10)),
            0.0);
}

TEST(GeometryTest, IntersectionMatchesGridOracle) {
  const Polygon a = Polygon::rectangle(0, 0, 2, 2);
  const Polygon b = Polygon::rectangle(1, 1, 3, 3);
  const auto grid = oracle::grid_areas(a, b, 600);
  EXPECT_NEAR(grid.inter, 1.0, 1e-9);
  EXPECT_NEAR(grid.uni, 7.0, 1e-9);
}

TEST(GeometryTest, Iou) {
  EXPECT_DOUBLE_EQ(polygon_iou(unit_square(), unit_square()), 1.0);
  EXPECT_NEAR(polygon_iou(Polygon::rectangle(0, 0, 2, 2), Polygon::rectangle(1, 1, 3, 3)),
              1.0 / 7.0, 1e-12);
  EXPECT_EQ(polygon_iou(unit_square(), Polygon::rectangle(5, 5, 6, 6)), 0.0);
}

TEST(GeometryTest, IouOfZeroAreaPolygonsThrows) {
  Polygon flat({{0, 0}, {1, 0}, {2, 0}});
  EXPECT_THROW(polygon_iou(flat, flat), GeometryError);
}

TEST(GeometryTest, DifferenceOfSlabs) {
  auto pieces = polygon_difference(Polygon::rectangle(0, 0, 100, 38), Polygon::rectangle(0, 0, 100, 20));
  ASSERT_EQ(pieces.size(), 1u);
  const auto box = to_bounding_box(pieces[0]);
  EXPECT_NEAR(box.min.x, 0, 1e-9);
  EXPECT_NEAR(box.min.y, 20, 1e-9);
  EXPECT_NEAR(box.max.x, 100, 1e-9);
  EXPECT_NEAR(box.max.y, 38, 1e-9);
  EXPECT_NEAR(polygon_area(pieces[0]), 1800.0, 1e-9);
}

TEST(GeometryTest, DifferenceDisjointAndContained) {
  const Polygon a = Polygon::rectangle(0, 0, 1, 1);
  auto same = polygon_difference(a, Polygon::rectangle(3, 3, 4, 4));
  ASSERT_EQ(same.size(), 1u);
  EXPECT_EQ(same[0], a);
  EXPECT_TRUE(polygon_difference(Polygon::rectangle(2, 2, 3, 3), Polygon::rectangle(0, 0, 10, 10)).empty());
}

TEST(GeometryTest, DifferenceWithHoleIsCutIntoHoleFreePieces) {
  const Polygon a = Polygon::rectangle(0, 0, 10, 10);
  const Polygon b = Polygon::rectangle(4, 4, 6, 6);
  auto pieces = polygon_difference(a, b);
  ASSERT_GE(pieces.size(), 2u);
  double total = 0.0;
  for (const auto& p : pieces) total += polygon_area(p);
  EXPECT_NEAR(total, 96.0, 1e-9);
}

TEST(GeometryTest, InwardOffset) {
  auto shrunk = inward_offset(Polygon::rectangle(0, 0, 10, 10), 1.0);
  ASSERT_TRUE(shrunk.has_value());
  const auto box = to_bounding_box(*shrunk);
  EXPECT_NEAR(box.min.x, 1, 1e-9);
  EXPECT_NEAR(box.min.y, 1, 1e-9);
  EXPECT_NEAR(box.max.x, 9, 1e-9);
  EXPECT_NEAR(box.max.y, 9, 1e-9);
  EXPECT_NEAR(polygon_area(*shrunk), 64.0, 1e-9);

  EXPECT_FALSE(inward_offset(Polygon::rectangle(0, 0, 50, 1.5), 1.0).has_value());
  EXPECT_THROW(inward_offset(unit_square(), 0.0), GeometryError);
  EXPECT_THROW(inward_offset(unit_square(), -1.0), GeometryError);
}

TEST(GeometryTest, InwardOffsetOfNonConvexKeepsLargestPiece) {
  // Dumbbell: two squares joined by a 1px-wide bar; eroding by 1 cuts the bar.
  Polygon p({{0, 0}, {10, 0}, {10, 4}, {20, 4}, {20, 0}, {32, 0}, {32, 12}, {20, 12}, {20, 5},
             {10, 5}, {10, 10}, {0, 10}});
  auto shrunk = inward_offset(p, 1.0);
  ASSERT_TRUE(shrunk.has_value());
  EXPECT_NEAR(polygon_area(*shrunk), 10.0 * 10.0, 1.0);
}

TEST(GeometryTest, ScalePolygon) {
  auto half = scale_polygon(unit_square(), 768.0 / 1536.0);
  const auto box = to_bounding_box(half);
  EXPECT_EQ(box, (BoundingBox{{0, 0}, {0.5, 0.5}}));
  EXPECT_EQ(scale_polygon(unit_square(), 1.0), unit_square());
  auto quarter = scale_polygon(Polygon::rectangle(0, 0, 100, 20), 0.25);
  EXPECT_EQ(to_bounding_box(quarter), (BoundingBox{{0, 0}, {25, 5}}));
  EXPECT_DOUBLE_EQ(polygon_area(quarter), 125.0);
  EXPECT_THROW(scale_polygon(unit_square(), 0.0), GeometryError);
}

TEST(GeometryTest, BoundingBox) {
  EXPECT_EQ(to_bounding_box(Polygon({{0, 0}, {4, 0}, {0, 3}})), (BoundingBox{{0, 0}, {4, 3}}));
  const Polygon rect = Polygon::rectangle(2, 3, 7, 9);
  EXPECT_EQ(polygon_area(box_polygon(to_bounding_box(rect))), polygon_area(rect));
  Polygon star({{5, 1}, {6, 4}, {9, 5}, {6, 6}, {5, 8}, {2, 5}});
  EXPECT_EQ(to_bounding_box(star), (BoundingBox{{2, 1}, {9, 8}}));
}

TEST(GeometryTest, BoundaryDistance) {
  EXPECT_EQ(boundary_distance(Polygon::rectangle(0, 0, 10, 10), Polygon::rectangle(10, 0, 20, 10)), 0.0);
  EXPECT_NEAR(boundary_distance(Polygon::rectangle(0, 0, 10, 10), Polygon::rectangle(13, 0, 20, 10)), 3.0,
              1e-12);
}

class GeometryPropertyTest : public ::testing::TestWithParam<int> {};

TEST_P(GeometryPropertyTest, AreaIdentities) {
  std::mt19937_64 rng(GetParam());
  std::uniform_real_distribution<double> offset(-20.0, 20.0);
  for (int trial = 0; trial < 25; ++trial) {
    const Polygon a = oracle::random_star(rng, 50, 50, 10, 40);
    const Polygon b = oracle::random_star(rng, 50 + offset(rng), 50 + offset(rng), 10, 40);
    const double aa = polygon_area(a);
    const double ab = polygon_area(b);
    const double inter = intersection_area(a, b);
    EXPECT_LE(inter, std::min(aa, ab) * (1 + 1e-9));
    EXPECT_EQ(polygon_iou(a, b), polygon_iou(b, a));

    double diff = 0.0;
    for (const auto& piece : polygon_difference(a, b)) diff += polygon_area(piece);
    EXPECT_NEAR(diff + inter, aa, 1e-6 * aa);

    const double s = 0.37 + trial * 0.11;
    const Polygon back = scale_polygon(scale_polygon(a, s), 1.0 / s);
    ASSERT_EQ(back.size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(back.vertices()[i].x, a.vertices()[i].x, 1e-9);
      EXPECT_NEAR(back.vertices()[i].y, a.vertices()[i].y, 1e-9);
    }
  }
}

TEST_P(GeometryPropertyTest, AgreesWithGridOracle) {
  std::mt19937_64 rng(1000 + GetParam());
  std::uniform_real_distribution<double> offset(-15.0, 15.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Polygon a = oracle::random_star(rng, 50, 50, 15, 40);
    const Polygon b = oracle::random_star(rng, 50 + offset(rng), 50 + offset(rng), 15, 40);
    const auto grid = oracle::grid_areas(a, b, 1024);
    EXPECT_NEAR(intersection_area(a, b), grid.inter, 0.01 * grid.inter);
    EXPECT_NEAR(union_area(a, b), grid.uni, 0.01 * grid.uni);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, GeometryPropertyTest, ::testing::Range(1, 5));

}  // namespace
}  // namespace lineseg
