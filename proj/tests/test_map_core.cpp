#include <gtest/gtest.h>

#include <random>

#include "gplan/map_io.hpp"
#include "gplan/scenario.hpp"
#include "test_support.hpp"

using namespace gplan;

namespace {

std::vector<std::uint8_t> png_of(const RgbImage& img) { return encode_png(img); }

int count_color(const RgbImage& img, Rgb c) {
  int n = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) n += img.at(x, y) == c;
  return n;
}

}  // namespace

TEST(LoadMap, AllWhiteIsEmpty) {
  const GridMap m = load_map(png_of(RgbImage(128, 128, kWhite)));
  EXPECT_EQ(m.width(), 128);
  EXPECT_EQ(m.obstacle_count(), 0u);
}

TEST(LoadMap, AllBlackIsFull) {
  const GridMap m = load_map(png_of(RgbImage(128, 128, kBlack)));
  EXPECT_EQ(m.obstacle_count(), 16384u);
}

TEST(LoadMap, BlackBlockAtOrigin) {
  RgbImage img(128, 128, kWhite);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) img.set(x, y, kBlack);
  const GridMap m = load_map(png_of(img));
  EXPECT_EQ(m.obstacle_count(), 100u);
  EXPECT_TRUE(m.obstacle(9, 9));
  EXPECT_FALSE(m.obstacle(10, 9));
}

TEST(LoadMap, OverlayColorsAreFree) {
  RgbImage img(16, 16, kWhite);
  img.set(1, 1, kStartBlue);
  img.set(2, 2, kGoalRed);
  img.set(3, 3, kGuidanceGreen);
  img.set(4, 4, Rgb{40, 40, 40});
  const GridMap m = load_map(png_of(img));
  EXPECT_FALSE(m.obstacle(1, 1));
  EXPECT_FALSE(m.obstacle(2, 2));
  EXPECT_FALSE(m.obstacle(3, 3));
  EXPECT_TRUE(m.obstacle(4, 4));
}

TEST(LoadMap, RejectsGarbageAndTinyImages) {
  const std::vector<std::uint8_t> junk{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  EXPECT_THROW(load_map(junk), ImageError);
  auto png = png_of(RgbImage(128, 128));
  png.resize(png.size() / 2);
  EXPECT_THROW(load_map(png), ImageError);
  EXPECT_THROW(load_map(png_of(RgbImage(4, 4))), std::invalid_argument);
}

TEST(TaskImage, EmptyMapHasOneDiscEach) {
  const GridMap m = GridMap::empty(64, 64);
  const PlanningTask t{{10.5, 10.5}, {50.5, 40.5}, 2.0};
  const RgbImage img = decode_png(save_task_image(m, t));
  // Radius-2 digital disc: lattice points with dx^2 + dy^2 <= 4, counted by hand:
  // 1 (center) + 4 (axis, 1) + 4 (diagonals) + 4 (axis, 2) = 13.
  int lattice = 0;
  for (int dy = -2; dy <= 2; ++dy)
    for (int dx = -2; dx <= 2; ++dx) lattice += dx * dx + dy * dy <= 4;
  ASSERT_EQ(lattice, 13);
  EXPECT_EQ(count_color(img, kStartBlue), 13);
  EXPECT_EQ(count_color(img, kGoalRed), 13);
  const PlanningTask back = decode_task(img, 2.0);
  EXPECT_EQ(back, t);
}

TEST(TaskImage, OutOfBoundsTaskIsRejected) {
  const GridMap m = GridMap::empty(32, 32);
  EXPECT_THROW(save_task_image(m, {{40, 1}, {2, 2}, 2.0}), std::invalid_argument);
}

TEST(TaskImage, RoundTripPreservesOccupancyOnGeneratedMaps) {
  for (Family f : kAllFamilies) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const GridMap m = generate_map({f, 128, seed, {}});
      const PlanningTask t = sample_task(m, seed);
      const auto png = save_task_image(m, t);
      EXPECT_EQ(load_map(png), m) << to_string(f) << " seed " << seed;
      EXPECT_EQ(decode_task(decode_png(png), t.goal_radius), t) << to_string(f) << " seed " << seed;
    }
  }
}

TEST(TaskImage, DiscClippedByWallsDecodesToCenter) {
  // Start hugs a wall corner and the image border, goal sits in a 3-wide slot.
  std::vector<std::uint8_t> occ(32 * 32, 0);
  for (int i = 0; i < 32; ++i) {
    occ[static_cast<std::size_t>(2) * 32 + i] = i > 4;
    occ[static_cast<std::size_t>(i) * 32 + 20] = 1;
    occ[static_cast<std::size_t>(i) * 32 + 24] = 1;
  }
  const GridMap m(32, 32, occ);
  const PlanningTask t{{0.5, 3.5}, {22.5, 17.5}, 2.0};
  ASSERT_TRUE(m.free(cell_of(t.start)) && m.free(cell_of(t.goal)));
  const RgbImage img = decode_png(save_task_image(m, t));
  EXPECT_EQ(decode_task(img, 2.0), t);
}

TEST(SegmentFree, EmptyMapAlwaysFree) {
  const GridMap m = GridMap::empty(32, 32);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 31.999);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_TRUE(segment_free(m, {u(gen), u(gen)}, {u(gen), u(gen)}));
  }
}

TEST(SegmentFree, DegenerateSegmentChecksOneCell) {
  std::vector<std::uint8_t> occ(64, 0);
  occ[3 * 8 + 3] = 1;
  const GridMap m(8, 8, occ);
  EXPECT_TRUE(segment_free(m, {2.5, 2.5}, {2.5, 2.5}));
  EXPECT_FALSE(segment_free(m, {3.5, 3.5}, {3.5, 3.5}));
}

TEST(SegmentFree, OneCellWallBlocks) {
  std::vector<std::uint8_t> occ(32 * 32, 0);
  for (int y = 0; y < 32; ++y) occ[static_cast<std::size_t>(y) * 32 + 16] = 1;
  const GridMap m(32, 32, occ);
  const State a{10.3, 5.7}, b{20.9, 25.1};
  EXPECT_FALSE(segment_free(m, a, b));
  EXPECT_FALSE(oracle_ref::supersampled_segment_free(m, a, b));
  EXPECT_TRUE(segment_free(m, {10.3, 5.7}, {15.99, 30.0}));
}

TEST(SegmentFree, CornerClipIsCaught) {
  // Obstacle at cell (5,5); the segment clips its lower-left corner.
  std::vector<std::uint8_t> occ(100, 0);
  occ[5 * 10 + 5] = 1;
  const GridMap m(10, 10, occ);
  EXPECT_FALSE(segment_free(m, {4.9, 5.2}, {5.2, 4.9}));
  EXPECT_TRUE(segment_free(m, {4.8, 5.1}, {5.1, 4.8}));
}

TEST(SegmentFree, SymmetricAndMatchesSupersampling) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int disagreements = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const GridMap m = oracle_ref::random_map(24, 24, 0.12, gen);
    const State a{u(gen) * 24, u(gen) * 24};
    const State b{std::clamp(a.x + (u(gen) - 0.5) * 12, 0.0, 23.999),
                  std::clamp(a.y + (u(gen) - 0.5) * 12, 0.0, 23.999)};
    const bool fwd = segment_free(m, a, b);
    ASSERT_EQ(fwd, segment_free(m, b, a));
    disagreements += fwd != oracle_ref::supersampled_segment_free(m, a, b);
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(Traverse, VisitsEndpointsCells) {
  std::vector<Cell> cells;
  traverse_segment({0.5, 0.5}, {3.5, 0.5}, [&](Cell c) {
    cells.push_back(c);
    return true;
  });
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells.front(), (Cell{0, 0}));
  EXPECT_EQ(cells.back(), (Cell{3, 0}));
}
