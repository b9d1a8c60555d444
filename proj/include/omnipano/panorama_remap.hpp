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

// Fisheye <-> hemispherical equirectangular panorama mapping.
//
// Panorama columns cover azimuth [0, 2pi) starting at `azimuth_origin`;
// rows cover the incident angle from pi/2 (row 0, the horizon) down to 0
// (bottom edge, the nadir). Coordinates follow the same continuous
// convention as the fisheye image: pixel (i, j) covers [i, i+1) x [j, j+1).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "omnipano/camera_model.hpp"
#include "omnipano/image.hpp"
#include "omnipano/parallel.hpp"

namespace omnipano {

class EquirectSpec {
 public:
  EquirectSpec(int width, int height, double azimuth_origin = 0.0)
      : width_(width), height_(height), origin_(normalize_azimuth(azimuth_origin)) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("panorama size must be positive");
    if (width != 4 * height) {
      std::ostringstream msg;
      msg << "hemispherical panorama must be 4:1, got " << width << "x" << height;
      throw std::invalid_argument(msg.str());
    }
    const double cols = origin_ * width_ / kTwoPi;
    const double nearest = std::round(cols);
    if (std::abs(cols - nearest) <= 1e-9) {
      origin_columns_ = static_cast<int>(nearest) % width_;
    }
  }

  /// Panorama of the given width; height is width / 4.
  static EquirectSpec from_width(int width, double azimuth_origin = 0.0) {
    if (width <= 0 || width % 4 != 0) {
      throw std::invalid_argument("panorama width must be a positive multiple of 4");
    }
    return EquirectSpec(width, width / 4, azimuth_origin);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double azimuth_origin() const { return origin_; }

  /// Pixels per radian along either axis.
  double pixels_per_radian() const { return height_ / kHalfPi; }

  /// Set when the origin is a whole number of columns; lets column shifts
  /// reproduce bit-identical sample positions.
  std::optional<int> origin_columns() const { return origin_columns_; }

  friend bool operator==(const EquirectSpec& a, const EquirectSpec& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.origin_ == b.origin_;
  }

 private:
  int width_;
  int height_;
  double origin_;
  std::optional<int> origin_columns_;
};

/// Recommended panorama width for a square fisheye of side `side_px`: the
/// image-circle circumference pi*side rounded down to a multiple of 512
/// (3072 for a 1024 px fisheye).
inline int default_panorama_width(int side_px) {
  if (side_px <= 0) throw std::invalid_argument("fisheye side must be positive");
  const int blocks = static_cast<int>(std::floor(kPi * side_px / 512.0));
  return std::max(1, blocks) * 512;
}

/// Direction of a continuous panorama point (x along azimuth, y along rows).
inline SpherePoint pano_point_to_sphere(const EquirectSpec& spec, double x, double y) {
  const double theta = kHalfPi * (1.0 - y / spec.height());
  double phi;
  if (auto k = spec.origin_columns()) {
    double col = std::fmod(x + *k, static_cast<double>(spec.width()));
    if (col < 0.0) col += spec.width();
    phi = kTwoPi * col / spec.width();
  } else {
    phi = spec.azimuth_origin() + kTwoPi * x / spec.width();
  }
  return SpherePoint(std::clamp(theta, 0.0, kHalfPi), phi);
}

/// Direction of the center of panorama pixel (u, v).
inline SpherePoint pano_to_sphere(const EquirectSpec& spec, const PixelCoord& px) {
  if (!(px.u >= 0.0 && px.u < spec.width() && px.v >= 0.0 && px.v < spec.height())) {
    std::ostringstream msg;
    msg << "panorama pixel (" << px.u << ", " << px.v << ") outside " << spec.width() << "x"
        << spec.height();
    throw std::invalid_argument(msg.str());
  }
  return pano_point_to_sphere(spec, px.u + 0.5, px.v + 0.5);
}

/// Continuous panorama point of a direction; x in [0, width).
inline PixelCoord sphere_to_pano_point(const EquirectSpec& spec, const SpherePoint& p) {
  const double x = spec.width() * normalize_azimuth(p.phi() - spec.azimuth_origin()) / kTwoPi;
  const double y = spec.height() * (1.0 - p.theta() / kHalfPi);
  return {x >= spec.width() ? 0.0 : x, y};
}

/// New spec whose column 0 starts `delta` radians further along the azimuth.
inline EquirectSpec shift_azimuth_origin(const EquirectSpec& spec, double delta) {
  return EquirectSpec(spec.width(), spec.height(), spec.azimuth_origin() + delta);
}

/// Per-panorama-pixel fisheye sample positions.
class RemapTable {
 public:
  RemapTable(EquirectSpec spec, ImageSize fisheye_size, std::vector<PixelCoord> samples)
      : spec_(spec), fisheye_size_(fisheye_size), samples_(std::move(samples)) {
    if (samples_.size() != static_cast<std::size_t>(spec_.width()) * spec_.height()) {
      throw std::invalid_argument("remap table size does not match the panorama spec");
    }
  }

  const EquirectSpec& spec() const { return spec_; }
  const ImageSize& fisheye_size() const { return fisheye_size_; }

  const PixelCoord& sample(int u, int v) const {
    return samples_[static_cast<std::size_t>(v) * spec_.width() + u];
  }
  static bool is_sentinel(const PixelCoord& p) { return std::isnan(p.u); }
  std::size_t sentinel_count() const {
    return static_cast<std::size_t>(
        std::count_if(samples_.begin(), samples_.end(), [](const PixelCoord& p) { return is_sentinel(p); }));
  }
  std::span<const PixelCoord> samples() const { return samples_; }

 private:
  EquirectSpec spec_;
  ImageSize fisheye_size_;
  std::vector<PixelCoord> samples_;
};

inline RemapTable build_remap_table(const StereographicCamera& cam, const EquirectSpec& spec,
                                    int threads = 1) {
  const int w = spec.width();
  std::vector<PixelCoord> samples(static_cast<std::size_t>(w) * spec.height());
  const double limit = cam.image_circle_radius_px() + kCircleTolerancePx;
  const PixelCoord center = cam.principal_point();
  parallel_for(spec.height(), threads, [&](int v) {
    for (int u = 0; u < w; ++u) {
      PixelCoord s = project(cam, pano_to_sphere(spec, {double(u), double(v)}));
      if (!(distance(s, center) <= limit)) {
        s = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
      }
      samples[static_cast<std::size_t>(v) * w + u] = s;
    }
  });
  return RemapTable(spec, cam.image_size(), std::move(samples));
}

namespace detail {

template <typename T>
T convert_sample(double value) {
  if constexpr (std::is_integral_v<T>) {
    const double lo = static_cast<double>(std::numeric_limits<T>::min());
    const double hi = static_cast<double>(std::numeric_limits<T>::max());
    return static_cast<T>(std::clamp(std::round(value), lo, hi));
  } else {
    return static_cast<T>(value);
  }
}

}  // namespace detail

/// Bilinear sample at a continuous position, edges clamped.
template <typename T>
double sample_bilinear(const Image<T>& img, const PixelCoord& p, int channel) {
  const double x = p.u - 0.5;
  const double y = p.v - 0.5;
  const double xf = std::floor(x);
  const double yf = std::floor(y);
  const double ax = x - xf;
  const double ay = y - yf;
  const int x0 = std::clamp(static_cast<int>(xf), 0, img.width() - 1);
  const int x1 = std::clamp(static_cast<int>(xf) + 1, 0, img.width() - 1);
  const int y0 = std::clamp(static_cast<int>(yf), 0, img.height() - 1);
  const int y1 = std::clamp(static_cast<int>(yf) + 1, 0, img.height() - 1);
  const double top = (1.0 - ax) * img.at(x0, y0, channel) + ax * img.at(x1, y0, channel);
  const double bottom = (1.0 - ax) * img.at(x0, y1, channel) + ax * img.at(x1, y1, channel);
  return (1.0 - ay) * top + ay * bottom;
}

/// Resamples a fisheye image into the panorama described by `table`.
/// Sentinel samples produce zeros.
template <typename T>
Image<T> remap_image(const Image<T>& img, const RemapTable& table, int threads = 1) {
  if (img.width() != table.fisheye_size().width || img.height() != table.fisheye_size().height) {
    std::ostringstream msg;
    msg << "image is " << img.width() << "x" << img.height() << " but the remap table expects "
        << table.fisheye_size().width << "x" << table.fisheye_size().height;
    throw std::invalid_argument(msg.str());
  }
  const EquirectSpec& spec = table.spec();
  Image<T> out(spec.width(), spec.height(), img.channels());
  parallel_for(spec.height(), threads, [&](int v) {
    for (int u = 0; u < spec.width(); ++u) {
      const PixelCoord& s = table.sample(u, v);
      if (RemapTable::is_sentinel(s)) continue;
      for (int c = 0; c < img.channels(); ++c) {
        out.at(u, v, c) = detail::convert_sample<T>(sample_bilinear(img, s, c));
      }
    }
  });
  return out;
}

/// Crop/pad placement of a raw fisheye frame inside the square working image.
struct SquareFraming {
  int side = 0;
  /// Position of the raw image's top-left corner in the square image
  /// (negative when cropped).
  int offset_u = 0;
  int offset_v = 0;
};

/// Center-crops to the short side; when `circle_radius_px` says the image
/// circle is truncated, zero-pads to the full circle diameter instead.
inline SquareFraming square_framing(int width, int height,
                                    std::optional<double> circle_radius_px = std::nullopt) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("image size must be positive");
  int side = std::min(width, height);
  if (circle_radius_px && *circle_radius_px > 0.5 * side) {
    side = static_cast<int>(std::ceil(2.0 * *circle_radius_px - 1e-9));
  }
  // floor division so odd differences put the extra row/column at the end.
  auto offset = [](int diff) { return diff >= 0 ? diff / 2 : -((-diff + 1) / 2); };
  return {side, offset(side - width), offset(side - height)};
}

template <typename T>
Image<T> normalize_input(const Image<T>& img, std::optional<double> circle_radius_px = std::nullopt) {
  if (img.empty()) throw std::invalid_argument("empty input image");
  const SquareFraming f = square_framing(img.width(), img.height(), circle_radius_px);
  if (f.side == img.width() && f.side == img.height()) return img;
  Image<T> out(f.side, f.side, img.channels());
  for (int y = 0; y < f.side; ++y) {
    const int sy = y - f.offset_v;
    if (sy < 0 || sy >= img.height()) continue;
    for (int x = 0; x < f.side; ++x) {
      const int sx = x - f.offset_u;
      if (sx < 0 || sx >= img.width()) continue;
      for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at(sx, sy, c);
    }
  }
  return out;
}

/// Output column u takes input column (u + shift) mod width.
template <typename T>
Image<T> circular_shift_columns(const Image<T>& img, int shift) {
  Image<T> out(img.width(), img.height(), img.channels());
  const int w = img.width();
  const int s = ((shift % w) + w) % w;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at((x + s) % w, y, c);
    }
  }
  return out;
}

}  // namespace omnipano
