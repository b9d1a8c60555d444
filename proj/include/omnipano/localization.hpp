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

// Ground-plane localization from panorama boxes: the ray through the
// bottom-center of a box is intersected with the floor.

#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "omnipano/box_geometry.hpp"
#include "omnipano/errors.hpp"
#include "omnipano/panorama_remap.hpp"

namespace omnipano {

/// Camera-centered floor position in meters; x/y follow the azimuth
/// convention (azimuth 0 along +x).
struct GroundPosition {
  double x_m = 0.0;
  double y_m = 0.0;
  double distance_m = 0.0;

  static GroundPosition from_xy(double x, double y) { return {x, y, std::hypot(x, y)}; }
};

/// Floor point seen at incident angle theta and azimuth phi from a camera
/// `camera_height_m` above the floor.
inline GroundPosition ground_point(double theta, double phi, double camera_height_m) {
  if (!(camera_height_m > 0.0)) throw std::invalid_argument("camera height must be positive");
  if (!(theta < kHalfPi)) throw HorizonError("foot ray does not reach the ground (incident angle >= 90 deg)");
  const double d = camera_height_m * std::tan(theta);
  return {d * std::cos(phi), d * std::sin(phi), d};
}

inline GroundPosition locate_from_box(const PanoBox& box, const EquirectSpec& spec, double camera_height_m) {
  validate(box, spec);
  if (!(camera_height_m > 0.0)) throw std::invalid_argument("camera height must be positive");
  if (box.v_max <= 0.0) throw HorizonError("box bottom lies on the horizon row");
  const SpherePoint foot = pano_point_to_sphere(spec, box.center_u(spec.width()), box.v_max);
  return ground_point(foot.theta(), foot.phi(), camera_height_m);
}

inline double position_error(const GroundPosition& est, const GroundPosition& gt) {
  return std::hypot(est.x_m - gt.x_m, est.y_m - gt.y_m);
}

enum class DistanceBin { kNear, kMid, kFar };

inline constexpr double kNearLimitM = 10.0;
inline constexpr double kFarLimitM = 20.0;

/// [0, 10) near, [10, 20) mid, [20, inf) far.
inline DistanceBin distance_bin(double distance_m) {
  if (!(distance_m >= 0.0)) throw std::invalid_argument("distance must be non-negative");
  if (distance_m < kNearLimitM) return DistanceBin::kNear;
  if (distance_m < kFarLimitM) return DistanceBin::kMid;
  return DistanceBin::kFar;
}

inline std::string_view to_string(DistanceBin bin) {
  switch (bin) {
    case DistanceBin::kNear:
      return "near";
    case DistanceBin::kMid:
      return "mid";
    case DistanceBin::kFar:
      return "far";
  }
  return "?";
}

/// Worst-case distance error from quantizing the foot row by one panorama
/// row at incident angle theta.
inline double one_row_distance_bound(double theta, double camera_height_m, const EquirectSpec& spec) {
  const double row = 1.0 / spec.pixels_per_radian();
  const double hi = std::min(theta + row, std::nextafter(kHalfPi, 0.0));
  return camera_height_m * (std::tan(hi) - std::tan(theta));
}

}  // namespace omnipano
