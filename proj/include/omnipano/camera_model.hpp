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

// Stereographic fisheye camera model.
//
// Image coordinates are continuous with the origin at the top-left corner
// of the image, u to the right and v downward; pixel (i, j) covers
// [i, i+1) x [j, j+1). The azimuth phi is measured from +u toward +v, so a
// direction (theta, phi) lands at (c_u + r cos phi, c_v + r sin phi).
// theta is the incident angle from the optical axis (0 = nadir for an
// overhead camera, pi/2 = horizon).

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "omnipano/errors.hpp"

namespace omnipano {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;

inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Wraps an angle into [0, 2pi).
inline double normalize_azimuth(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round back up to exactly 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

struct PixelCoord {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

inline double distance(const PixelCoord& a, const PixelCoord& b) {
  return std::hypot(a.u - b.u, a.v - b.v);
}

/// Viewing direction on the lower hemisphere.
class SpherePoint {
 public:
  SpherePoint() = default;

  /// theta must lie in [0, pi/2]; phi is wrapped into [0, 2pi).
  SpherePoint(double theta, double phi) : theta_(theta), phi_(normalize_azimuth(phi)) {
    if (!(theta >= 0.0 && theta <= kHalfPi)) {
      std::ostringstream msg;
      msg << "incident angle out of [0, pi/2]: " << theta;
      throw std::invalid_argument(msg.str());
    }
  }

  double theta() const { return theta_; }
  double phi() const { return phi_; }

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// Focal length (pixel units) whose 90 degree ray lands on the image circle:
/// 2 f tan(pi/4) = radius.
inline double fit_focal_from_circle(double radius_px) {
  if (!(radius_px > 0.0) || !std::isfinite(radius_px)) {
    throw std::invalid_argument("image circle radius must be positive");
  }
  return radius_px / 2.0;
}

struct ImageSize {
  int width = 0;
  int height = 0;

  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

/// Stereographic fisheye intrinsics. Sensor pitch is folded into a
/// pixel-unit focal length, and extrinsics are the identity.
class StereographicCamera {
 public:
  /// Camera with the image circle inscribed in the image, centered.
  static StereographicCamera centered(ImageSize size) {
    const double radius = 0.5 * std::min(size.width, size.height);
    return StereographicCamera(size, radius, PixelCoord{0.5 * size.width, 0.5 * size.height});
  }

  StereographicCamera(ImageSize size, double circle_radius_px, PixelCoord principal_point)
      : size_(size), radius_(circle_radius_px), principal_(principal_point) {
    if (size.width <= 0 || size.height <= 0) {
      throw std::invalid_argument("camera image size must be positive");
    }
    focal_ = fit_focal_from_circle(circle_radius_px);
    if (!(principal_point.u >= 0.0 && principal_point.u <= size.width &&
          principal_point.v >= 0.0 && principal_point.v <= size.height)) {
      throw std::invalid_argument("principal point outside the image");
    }
    if (circle_radius_px > 0.5 * std::min(size.width, size.height) + 0.5) {
      throw std::invalid_argument("image circle larger than the image");
    }
  }

  StereographicCamera(ImageSize size, double circle_radius_px)
      : StereographicCamera(size, circle_radius_px,
                            PixelCoord{0.5 * size.width, 0.5 * size.height}) {}

  double focal_length_px() const { return focal_; }
  const PixelCoord& principal_point() const { return principal_; }
  const ImageSize& image_size() const { return size_; }
  double image_circle_radius_px() const { return radius_; }

  /// Radial image distance of a ray at incident angle theta.
  double radius_at(double theta) const { return 2.0 * focal_ * std::tan(0.5 * theta); }

  /// Incident angle of a point at radial image distance gamma.
  double theta_at(double gamma) const { return 2.0 * std::atan(gamma / (2.0 * focal_)); }

 private:
  ImageSize size_;
  double radius_ = 0.0;
  double focal_ = 0.0;
  PixelCoord principal_;
};

inline PixelCoord project(const StereographicCamera& cam, const SpherePoint& p) {
  const double gamma = cam.radius_at(p.theta());
  const PixelCoord& c = cam.principal_point();
  return {c.u + gamma * std::cos(p.phi()), c.v + gamma * std::sin(p.phi())};
}

/// Pixels up to this far beyond the image circle still backproject (clamped
/// to the horizon).
inline constexpr double kCircleTolerancePx = 0.5;

/// Inverse of project(). Throws OutOfCircleError beyond the image circle
/// plus `tolerance_px`. At the principal point phi is 0.
inline SpherePoint backproject(const StereographicCamera& cam, const PixelCoord& px,
                               double tolerance_px = kCircleTolerancePx) {
  const PixelCoord& c = cam.principal_point();
  const double du = px.u - c.u;
  const double dv = px.v - c.v;
  const double gamma = std::hypot(du, dv);
  const double radius = cam.image_circle_radius_px();
  if (!(gamma <= radius + tolerance_px)) {
    std::ostringstream msg;
    msg << "pixel (" << px.u << ", " << px.v << ") is " << gamma
        << " px from the principal point, outside the image circle of radius " << radius;
    throw OutOfCircleError(msg.str());
  }
  const double theta = std::min(cam.theta_at(gamma), kHalfPi);
  const double phi = gamma > 0.0 ? std::atan2(dv, du) : 0.0;
  return SpherePoint(theta, phi);
}

}  // namespace omnipano
