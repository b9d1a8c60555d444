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

// Apparent person size in the panorama as a function of the incident angle.
//
// A person of height s stands at horizontal distance d from a camera
// mounted at height c. The foot and head are seen at depression angles
// (below the camera's horizontal plane) atan(c/d) and atan((c-s)/d); a
// depression angle equals pi/2 minus the incident angle.

#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>

#include "omnipano/box_geometry.hpp"
#include "omnipano/camera_model.hpp"
#include "omnipano/panorama_remap.hpp"

namespace omnipano {

class SceneConfig {
 public:
  /// Requires c > 0, 0 <= s < c and d > 0. s = 0 is accepted as the
  /// degenerate zero-height person.
  SceneConfig(double camera_height_m, double person_height_m, double distance_m)
      : c_(camera_height_m), s_(person_height_m), d_(distance_m) {
    if (!(c_ > 0.0 && s_ >= 0.0 && s_ < c_ && d_ > 0.0)) {
      std::ostringstream msg;
      msg << "invalid scene: camera " << c_ << " m, person " << s_ << " m, distance " << d_ << " m";
      throw std::invalid_argument(msg.str());
    }
  }

  double camera_height_m() const { return c_; }
  double person_height_m() const { return s_; }
  double distance_m() const { return d_; }

 private:
  double c_;
  double s_;
  double d_;
};

struct BoxAngles {
  double head = 0.0;  ///< depression angle of the head, radians
  double foot = 0.0;  ///< depression angle of the foot, radians
};

inline BoxAngles box_angles(const SceneConfig& scene) {
  const double c = scene.camera_height_m();
  const double d = scene.distance_m();
  return {std::atan((c - scene.person_height_m()) / d), std::atan(c / d)};
}

/// lambda: pixels per radian of the panorama's vertical axis.
inline void check_pixels_per_radian(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("pixels-per-radian must be positive");
  }
}

inline double exact_box_height(const SceneConfig& scene, double pixels_per_radian) {
  check_pixels_per_radian(pixels_per_radian);
  const BoxAngles a = box_angles(scene);
  return pixels_per_radian * (a.foot - a.head);
}

/// Small-angle approximation: height grows linearly with the head's
/// depression angle, s/(c-s) * lambda * head.
inline double linearized_box_height(const SceneConfig& scene, double pixels_per_radian) {
  check_pixels_per_radian(pixels_per_radian);
  const double c = scene.camera_height_m();
  const double s = scene.person_height_m();
  if (c - s == 0.0) throw std::domain_error("person as tall as the camera");
  return s / (c - s) * pixels_per_radian * box_angles(scene).head;
}

struct BoxHeightResult {
  double foot_angle = 0.0;
  double head_angle = 0.0;
  double exact_height = 0.0;
  double linearized_height = 0.0;
};

inline BoxHeightResult box_height(const SceneConfig& scene, double pixels_per_radian) {
  const BoxAngles a = box_angles(scene);
  return {a.foot, a.head, exact_box_height(scene, pixels_per_radian),
          linearized_box_height(scene, pixels_per_radian)};
}

/// Ground-plane length seen between incident angles theta -/+ delta/2.
inline double ground_interval_width(double camera_height_m, double theta, double delta_theta) {
  if (!(camera_height_m > 0.0)) throw std::invalid_argument("camera height must be positive");
  const double lo = theta - 0.5 * delta_theta;
  const double hi = theta + 0.5 * delta_theta;
  if (!(delta_theta >= 0.0 && lo > 0.0 && hi < kHalfPi)) {
    std::ostringstream msg;
    msg << "incident interval [" << lo << ", " << hi << "] must lie inside (0, pi/2)";
    throw std::invalid_argument(msg.str());
  }
  return camera_height_m * (std::tan(hi) - std::tan(lo));
}

/// Panorama box of a person standing at `azimuth` (world radians), without
/// pixel rounding.
inline PanoBox render_person_box(const SceneConfig& scene, double azimuth, double width_px,
                                 const EquirectSpec& spec) {
  const BoxAngles a = box_angles(scene);
  const double lambda = spec.pixels_per_radian();
  const double u = spec.width() * normalize_azimuth(azimuth - spec.azimuth_origin()) / kTwoPi;
  PanoBox box{u - 0.5 * width_px, lambda * a.head, u + 0.5 * width_px, lambda * a.foot, false};
  if (box.u_min < 0.0) {
    box.u_min += spec.width();
    box.wrapped = true;
  } else if (box.u_max > spec.width()) {
    box.u_max -= spec.width();
    box.wrapped = true;
  }
  return box;
}

/// Per-degree statistics of box sizes against the incident angle of the box
/// center.
class DistributionStats {
 public:
  static constexpr int kBins = 90;

  struct Bin {
    long count = 0;
    double mean_h = 0.0;
    double std_h = 0.0;  ///< sample std; NaN when count < 2
    double mean_w = 0.0;
    double std_w = 0.0;
  };

  /// Adds one box with center incident angle `theta_deg`.
  void add(double theta_deg, double height, double width) {
    acc_[bin_of(theta_deg)].push(height, width);
  }

  void merge(const DistributionStats& other) {
    for (int k = 0; k < kBins; ++k) acc_[k].merge(other.acc_[k]);
  }

  static int bin_of(double theta_deg) {
    if (!(theta_deg >= 0.0 && theta_deg <= 90.0)) {
      throw std::invalid_argument("incident angle outside [0, 90] degrees");
    }
    return std::min(static_cast<int>(std::floor(theta_deg)), kBins - 1);
  }

  Bin bin(int k) const {
    const Acc& a = acc_.at(k);
    Bin b;
    b.count = a.n;
    if (a.n == 0) {
      b.mean_h = b.mean_w = b.std_h = b.std_w = std::nan("");
      return b;
    }
    b.mean_h = a.h.mean;
    b.mean_w = a.w.mean;
    b.std_h = a.n >= 2 ? std::sqrt(a.h.m2 / (a.n - 1)) : std::nan("");
    b.std_w = a.n >= 2 ? std::sqrt(a.w.m2 / (a.n - 1)) : std::nan("");
    return b;
  }

  long total() const {
    long n = 0;
    for (const Acc& a : acc_) n += a.n;
    return n;
  }

  /// theta_deg,count,mean_h,std_h,mean_w,std_w; one row per bin, left edge
  /// in degrees. Undefined statistics are written as "nan".
  void write_csv(std::ostream& os) const {
    os << "theta_deg,count,mean_h,std_h,mean_w,std_w\n";
    auto field = [&](double v) {
      if (std::isnan(v)) {
        os << "nan";
      } else {
        os << v;
      }
    };
    const auto old_precision = os.precision(10);
    for (int k = 0; k < kBins; ++k) {
      const Bin b = bin(k);
      os << k << ',' << b.count << ',';
      field(b.mean_h);
      os << ',';
      field(b.std_h);
      os << ',';
      field(b.mean_w);
      os << ',';
      field(b.std_w);
      os << '\n';
    }
    os.precision(old_precision);
  }

 private:
  // Welford accumulators; merged with Chan's pairwise update.
  struct Moments {
    double mean = 0.0;
    double m2 = 0.0;
  };
  struct Acc {
    long n = 0;
    Moments h;
    Moments w;

    void push(double height, double width) {
      ++n;
      update(h, height);
      update(w, width);
    }
    void update(Moments& m, double x) const {
      const double delta = x - m.mean;
      m.mean += delta / n;
      m.m2 += delta * (x - m.mean);
    }

    void merge(const Acc& o) {
      if (o.n == 0) return;
      const long total = n + o.n;
      auto combine = [&](Moments& a, const Moments& b) {
        const double delta = b.mean - a.mean;
        a.mean += delta * o.n / total;
        a.m2 += b.m2 + delta * delta * static_cast<double>(n) * o.n / total;
      };
      combine(h, o.h);
      combine(w, o.w);
      n = total;
    }
  };

  std::array<Acc, kBins> acc_{};
};

/// Bins panorama boxes by the incident angle of their center row.
inline DistributionStats annotation_distribution(std::span<const PanoBox> boxes,
                                                 const EquirectSpec& spec) {
  DistributionStats stats;
  for (const PanoBox& b : boxes) {
    validate(b, spec);
    const double theta_deg = 90.0 * (1.0 - b.center_v() / spec.height());
    stats.add(theta_deg, b.height(), b.width(spec.width()));
  }
  return stats;
}

}  // namespace omnipano
