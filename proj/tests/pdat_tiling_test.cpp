// Copyright 2026 The omnipano Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "omnipano/pdat_tiling.hpp"

#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace omnipano {
namespace {

std::vector<int> Sides(const TilingSpec& t) {
  std::vector<int> out;
  for (const auto& r : t.regions()) out.push_back(r.tile_side);
  return out;
}

std::vector<int> Heights(const TilingSpec& t) {
  std::vector<int> out;
  for (const auto& r : t.regions()) out.push_back(r.height());
  return out;
}

/// Every cell covered exactly once, checked by painting all tiles.
void ExpectExactCover(const TilingSpec& t) {
  std::vector<int> hits(static_cast<std::size_t>(t.feature_height()) * t.feature_width(), 0);
  long area = 0;
  for (const Tile& tile : t.tiles()) {
    ASSERT_GT(tile.area(), 0);
    area += tile.area();
    for (int r = tile.row_start; r < tile.row_end; ++r)
      for (int c = tile.col_start; c < tile.col_end; ++c) ++hits[static_cast<std::size_t>(r) * t.feature_width() + c];
  }
  EXPECT_EQ(area, static_cast<long>(t.feature_height()) * t.feature_width());
  for (int h : hits) ASSERT_EQ(h, 1);
}

TEST(BuildTilingTest, Layout128x512) {
  const TilingSpec t = build_tiling(128, 512);
  EXPECT_EQ(Sides(t), (std::vector<int>{2, 4, 8, 16, 32}));
  EXPECT_EQ(Heights(t), (std::vector<int>{4, 4, 8, 16, 96}));
  ExpectExactCover(t);
  EXPECT_EQ(t.region(1).rows_of_tiles, 2);
  EXPECT_EQ(t.region(3).rows_of_tiles, 1);
  EXPECT_EQ(t.region(5).rows_of_tiles, 3);
}

TEST(BuildTilingTest, Layout192x768) {
  const TilingSpec t = build_tiling(192, 768, 5, 2);
  EXPECT_EQ(Sides(t), (std::vector<int>{3, 6, 12, 24, 48}));
  EXPECT_EQ(Heights(t), (std::vector<int>{6, 6, 12, 24, 144}));
  ExpectExactCover(t);
  // 2 rows x 256 + 128 + 64 + 32 + 3 x 16
  EXPECT_EQ(t.tiles().size(), 512u + 128u + 64u + 32u + 48u);
}

TEST(BuildTilingTest, MinimalTwoRegions) {
  const TilingSpec t = build_tiling(8, 8, 2, 2);
  EXPECT_EQ(Sides(t), (std::vector<int>{1, 2}));
  EXPECT_EQ(Heights(t), (std::vector<int>{2, 6}));
  ExpectExactCover(t);
}

TEST(BuildTilingTest, HalvingAndSmallestRatioBeforeRounding) {
  for (int k = 2; k <= 7; ++k) {
    const TilingSpec t = build_tiling(4 << k, 64, k);
    const auto& r = t.regions();
    for (int i = 1; i + 1 < k; ++i) EXPECT_DOUBLE_EQ(2.0 * r[i].exact_side, r[i + 1].exact_side);
    EXPECT_DOUBLE_EQ(r.front().exact_side, r.back().exact_side / (1 << (k - 1)));
    ExpectExactCover(t);
  }
}

TEST(BuildTilingTest, RoundsFractionalSides) {
  // a_1 = 2.5: second row rounds to 3, the top row absorbs the rest.
  const TilingSpec t = build_tiling(160, 640);
  EXPECT_EQ(Sides(t), (std::vector<int>{3, 5, 10, 20, 40}));
  EXPECT_EQ(t.region(1).row_bounds, (std::vector<int>{0, 2, 5}));
  EXPECT_DOUBLE_EQ(t.region(1).exact_side, 2.5);
  EXPECT_EQ(t.region(5).row_start, 40);
  ExpectExactCover(t);
}

TEST(BuildTilingTest, ColumnRemainderTiles) {
  const TilingSpec t = build_tiling(64, 70, 3);
  ExpectExactCover(t);
  const Tile& last = tile_of(t, 63, 69);
  EXPECT_EQ(last.region, 3);
  EXPECT_EQ(last.col_start, 64);
  EXPECT_EQ(last.cols(), 6);
  EXPECT_EQ(last.rows(), 16);
}

TEST(BuildTilingTest, Errors) {
  EXPECT_THROW(build_tiling(130, 512), std::invalid_argument);
  EXPECT_THROW(build_tiling(0, 512), std::invalid_argument);
  EXPECT_THROW(build_tiling(128, 512, 5, 3), UnsupportedConfiguration);
  EXPECT_THROW(build_tiling(128, 512, 1), UnsupportedConfiguration);
  EXPECT_THROW(build_tiling(8, 8, 5), UnsupportedConfiguration);
}

TEST(TileOfTest, Corners) {
  const TilingSpec t = build_tiling(192, 768);
  const Tile& first = tile_of(t, 0, 0);
  EXPECT_EQ(first.region, 1);
  EXPECT_EQ(first.row_index, 0);
  EXPECT_EQ(first.col_index, 0);
  const Tile& last = tile_of(t, 191, 767);
  EXPECT_EQ(last.region, 5);
  EXPECT_EQ(&last, &t.tiles().back());
  EXPECT_THROW(tile_of(t, 192, 0), std::invalid_argument);
  EXPECT_THROW(tile_of(t, 0, -1), std::invalid_argument);
}

TEST(TileOfTest, MatchesLinearScan) {
  const TilingSpec t = build_tiling(160, 333);
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> row(0, 159), col(0, 332);
  for (int i = 0; i < 3000; ++i) {
    const int r = row(rng), c = col(rng);
    const Tile* scan = nullptr;
    for (const Tile& tile : t.tiles())
      if (tile.contains(r, c)) scan = &tile;
    ASSERT_NE(scan, nullptr);
    ASSERT_EQ(&tile_of(t, r, c), scan);
  }
}

TEST(WCoefficientTest, Values) {
  EXPECT_EQ(w_coefficient(2), (Rational{1, 3}));
  EXPECT_EQ(w_coefficient(3), (Rational{1, 2}));
  EXPECT_DOUBLE_EQ(w_coefficient(9).value(), 0.8);
  EXPECT_THROW(w_coefficient(1), std::invalid_argument);
}

TEST(WCoefficientTest, FromTileCenters) {
  // Two stacked tiles of side b and M*b: horizontal over vertical offset of
  // their centers.
  for (int m = 2; m <= 20; ++m) {
    const double b = 1.0;
    const double du = m * b / 2 - b / 2;
    const double dv = b * (m + 2) / 2 - b / 2;
    EXPECT_NEAR(w_coefficient(m).value(), du / dv, 1e-15);
  }
}

TEST(WCoefficientTest, StrictlyIncreasingMinimumAtTwo) {
  for (int m = 3; m <= 100; ++m) {
    EXPECT_LT(w_coefficient(m - 1), w_coefficient(m));
    EXPECT_LT(w_coefficient(2), w_coefficient(m));
  }
}

}  // namespace
}  // namespace omnipano
