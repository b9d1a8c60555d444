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

// Per-tile max-significance boosting over a PDAT tiling.

#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "omnipano/parallel.hpp"
#include "omnipano/pdat_tiling.hpp"

namespace omnipano {

/// Row-major non-negative map, typically an attention significance map.
template <typename T>
class SignificanceMap {
 public:
  SignificanceMap(int height, int width, std::vector<T> values)
      : height_(height), width_(width), values_(std::move(values)) {
    if (height <= 0 || width <= 0) throw std::invalid_argument("map size must be positive");
    if (values_.size() != static_cast<std::size_t>(height) * width) {
      throw std::invalid_argument("map data length does not match height*width");
    }
    for (const T& v : values_) {
      if (!(v >= T(0))) throw std::invalid_argument("significance values must be non-negative");
    }
  }

  SignificanceMap(int height, int width, T fill = T{})
      : SignificanceMap(height, width, std::vector<T>(static_cast<std::size_t>(height) * width, fill)) {}

  int height() const { return height_; }
  int width() const { return width_; }
  const T& at(int row, int col) const { return values_[index(row, col)]; }
  const std::vector<T>& values() const { return values_; }

  friend bool operator==(const SignificanceMap&, const SignificanceMap&) = default;

  /// Scales one entry; factor must be non-negative.
  void multiply(int row, int col, double factor) {
    if (!(factor >= 0.0)) throw std::invalid_argument("factor must be non-negative");
    T& v = values_.at(index(row, col));
    v = static_cast<T>(v * factor);
  }

 private:
  std::size_t index(int row, int col) const { return static_cast<std::size_t>(row) * width_ + col; }

  int height_;
  int width_;
  std::vector<T> values_;
};

struct ScaleConfig {
  double alpha = 2.0;

  explicit ScaleConfig(double a = 2.0) : alpha(a) {
    if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw std::invalid_argument("scale factor must be >= 1");
  }

  /// Factors above 3 over-amplify small tiles in practice.
  bool above_recommended() const { return alpha > 3.0; }
};

template <typename T>
struct TileMax {
  std::size_t tile = 0;  ///< index into TilingSpec::tiles()
  int row = 0;
  int col = 0;
  T value{};
};

namespace detail {

template <typename T>
void check_dimensions(const SignificanceMap<T>& s, const TilingSpec& tiling) {
  if (s.height() != tiling.feature_height() || s.width() != tiling.feature_width()) {
    std::ostringstream msg;
    msg << "significance map is " << s.height() << "x" << s.width() << " but the tiling covers "
        << tiling.feature_height() << "x" << tiling.feature_width();
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace detail

/// Maximum of every tile. Ties resolve to the first cell in row-major order.
template <typename T>
std::vector<TileMax<T>> per_tile_argmax(const SignificanceMap<T>& s, const TilingSpec& tiling,
                                        int threads = 1) {
  detail::check_dimensions(s, tiling);
  const auto& tiles = tiling.tiles();
  std::vector<TileMax<T>> out(tiles.size());
  parallel_for(static_cast<int>(tiles.size()), threads, [&](int i) {
    const Tile& t = tiles[i];
    TileMax<T> best{static_cast<std::size_t>(i), t.row_start, t.col_start, s.at(t.row_start, t.col_start)};
    for (int r = t.row_start; r < t.row_end; ++r) {
      const T* row = s.values().data() + static_cast<std::size_t>(r) * s.width();
      for (int c = t.col_start; c < t.col_end; ++c) {
        if (row[c] > best.value) best = {best.tile, r, c, row[c]};
      }
    }
    out[i] = best;
  });
  return out;
}

/// Multiplies each tile's maximum by alpha; every other entry is copied.
template <typename T>
SignificanceMap<T> pdat_scale(const SignificanceMap<T>& s, const TilingSpec& tiling, const ScaleConfig& cfg,
                              int threads = 1) {
  const auto maxima = per_tile_argmax(s, tiling, threads);
  SignificanceMap<T> out = s;
  for (const TileMax<T>& m : maxima) {
    out.multiply(m.row, m.col, cfg.alpha);
  }
  return out;
}

}  // namespace omnipano
