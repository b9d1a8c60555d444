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

// Panoramic distortion-aware tiling of a feature map.
//
// The bottom three quarters of the map are one region of square tiles with
// side H/4. The top quarter is split into K-1 strips whose tile sides halve
// toward the top (the horizon, where people look smallest): strip k holds a
// single row of a_k-sided tiles, and the topmost strip holds two rows of the
// smallest tiles so that the strips add up to exactly H/4:
//
//     2*a_1 + a_2 + ... + a_{K-1} = a_K = H/4,   a_k = a_{k+1} / 2.

#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "omnipano/errors.hpp"

namespace omnipano {

struct Tile {
  int region = 0;     ///< 1-based region index, top to bottom
  int row_index = 0;  ///< tile row within the region
  int col_index = 0;
  int row_start = 0;
  int row_end = 0;  ///< exclusive
  int col_start = 0;
  int col_end = 0;  ///< exclusive

  int rows() const { return row_end - row_start; }
  int cols() const { return col_end - col_start; }
  long area() const { return static_cast<long>(rows()) * cols(); }
  bool contains(int row, int col) const {
    return row >= row_start && row < row_end && col >= col_start && col < col_end;
  }
  friend bool operator==(const Tile&, const Tile&) = default;
};

struct RegionSpec {
  int index = 0;  ///< 1-based
  int row_start = 0;
  int row_end = 0;
  int tile_side = 0;       ///< integer side used as the column stride
  double exact_side = 0.0; ///< side before rounding
  int rows_of_tiles = 0;
  std::vector<int> row_bounds;  ///< tile-row boundaries, rows_of_tiles + 1 entries

  int height() const { return row_end - row_start; }
};

class TilingSpec {
 public:
  int feature_height() const { return height_; }
  int feature_width() const { return width_; }
  int num_regions() const { return static_cast<int>(regions_.size()); }
  int division_factor() const { return division_; }
  const std::vector<RegionSpec>& regions() const { return regions_; }
  const RegionSpec& region(int k) const { return regions_.at(k - 1); }
  const std::vector<Tile>& tiles() const { return tiles_; }

  /// Index into tiles() of the tile containing (row, col).
  std::size_t tile_index(int row, int col) const {
    if (row < 0 || row >= height_ || col < 0 || col >= width_) {
      std::ostringstream msg;
      msg << "feature cell (" << row << ", " << col << ") outside " << height_ << "x" << width_;
      throw std::invalid_argument(msg.str());
    }
    const TileRow& tr = tile_rows_[row_to_tile_row_[row]];
    return tr.first_tile + static_cast<std::size_t>(col / tr.stride);
  }

 private:
  friend TilingSpec build_tiling(int, int, int, int);

  struct TileRow {
    std::size_t first_tile = 0;
    int stride = 1;
  };

  int height_ = 0;
  int width_ = 0;
  int division_ = 2;
  std::vector<RegionSpec> regions_;
  std::vector<Tile> tiles_;
  std::vector<TileRow> tile_rows_;
  std::vector<int> row_to_tile_row_;
};

/// Builds the K-region tiling of an H_f x W_f feature map. Only the halving
/// division (M = 2) is supported. Fractional sides are rounded to the nearest
/// integer and the top tile row of region 1 absorbs the residual.
inline TilingSpec build_tiling(int feature_height, int feature_width, int num_regions = 5,
                               int division_factor = 2) {
  if (feature_height <= 0 || feature_width <= 0) {
    throw std::invalid_argument("feature map size must be positive");
  }
  if (feature_height % 4 != 0) {
    throw std::invalid_argument("feature height must be divisible by 4");
  }
  if (division_factor != 2) {
    throw UnsupportedConfiguration("only division factor M = 2 can be tiled");
  }
  if (num_regions < 2 || num_regions > 24) {
    throw UnsupportedConfiguration("number of regions must be in [2, 24]");
  }
  const int k_regions = num_regions;
  const int quarter = feature_height / 4;

  // exact[k] and side[k] for k = 1..K (index 0 unused).
  std::vector<double> exact(k_regions + 1);
  std::vector<int> side(k_regions + 1);
  exact[k_regions] = quarter;
  side[k_regions] = quarter;
  for (int k = k_regions - 1; k >= 1; --k) {
    exact[k] = exact[k + 1] / 2.0;
    side[k] = static_cast<int>(std::lround(exact[k]));
  }
  int used = side[1];
  for (int k = 2; k < k_regions; ++k) used += side[k];
  const int top_row = quarter - used;
  for (int k = 1; k <= k_regions; ++k) {
    if (side[k] < 1 || top_row < 1) {
      std::ostringstream msg;
      msg << "feature height " << feature_height << " is too small for " << k_regions << " regions";
      throw UnsupportedConfiguration(msg.str());
    }
  }

  TilingSpec spec;
  spec.height_ = feature_height;
  spec.width_ = feature_width;
  spec.division_ = division_factor;
  spec.row_to_tile_row_.resize(feature_height);

  int row = 0;
  for (int k = 1; k <= k_regions; ++k) {
    RegionSpec r;
    r.index = k;
    r.row_start = row;
    r.tile_side = side[k];
    r.exact_side = exact[k];
    r.row_bounds.push_back(row);
    std::vector<int> heights;
    if (k == 1) {
      heights = {top_row, side[1]};
    } else if (k == k_regions) {
      heights = {side[k], side[k], side[k]};
    } else {
      heights = {side[k]};
    }
    for (int h : heights) {
      const int tile_row_id = static_cast<int>(spec.tile_rows_.size());
      spec.tile_rows_.push_back({spec.tiles_.size(), r.tile_side});
      const int row_index = static_cast<int>(r.row_bounds.size()) - 1;
      for (int c = 0, col_index = 0; c < feature_width; c += r.tile_side, ++col_index) {
        spec.tiles_.push_back(Tile{k, row_index, col_index, row, row + h, c,
                                   std::min(c + r.tile_side, feature_width)});
      }
      for (int y = row; y < row + h; ++y) spec.row_to_tile_row_[y] = tile_row_id;
      row += h;
      r.row_bounds.push_back(row);
    }
    r.rows_of_tiles = static_cast<int>(heights.size());
    r.row_end = row;
    spec.regions_.push_back(std::move(r));
  }
  return spec;
}

inline const Tile& tile_of(const TilingSpec& spec, int row, int col) {
  return spec.tiles()[spec.tile_index(row, col)];
}

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b) { return a.num * b.den < b.num * a.den; }
};

/// Slope (M-1)/(M+1) of the line through the centers of adjacent tiles when
/// each tile is M times its neighbor.
inline Rational w_coefficient(int division_factor) {
  if (division_factor < 2) throw std::invalid_argument("division factor must be >= 2");
  const std::int64_t num = division_factor - 1;
  const std::int64_t den = division_factor + 1;
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

}  // namespace omnipano
