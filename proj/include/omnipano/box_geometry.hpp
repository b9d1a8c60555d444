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

// Bounding boxes in the panorama and fisheye frames and the projections
// between them.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "omnipano/camera_model.hpp"
#include "omnipano/errors.hpp"
#include "omnipano/panorama_remap.hpp"

namespace omnipano {

/// Axis-aligned panorama box in continuous pixel coordinates. A wrapped box
/// crosses the azimuth seam and covers [u_min, width) and [0, u_max).
struct PanoBox {
  double u_min = 0.0;
  double v_min = 0.0;
  double u_max = 0.0;
  double v_max = 0.0;
  bool wrapped = false;

  double height() const { return v_max - v_min; }

  /// Horizontal extent; needs the panorama width only for wrapped boxes.
  double width(double panorama_width = 0.0) const {
    return wrapped ? u_max + panorama_width - u_min : u_max - u_min;
  }

  /// Horizontal center, wrapped back into [0, panorama_width) when needed.
  double center_u(double panorama_width = 0.0) const {
    if (!wrapped) return 0.5 * (u_min + u_max);
    const double c = 0.5 * (u_min + u_max + panorama_width);
    return c >= panorama_width ? c - panorama_width : c;
  }

  double center_v() const { return 0.5 * (v_min + v_max); }

  friend bool operator==(const PanoBox&, const PanoBox&) = default;
};

/// Throws std::invalid_argument unless the box is well formed inside `spec`.
inline void validate(const PanoBox& box, const EquirectSpec& spec) {
  const double w = spec.width();
  const double h = spec.height();
  const bool u_ok = box.u_min >= 0.0 && box.u_max <= w && box.u_min <= w && box.u_max >= 0.0 &&
                    (box.wrapped ? box.u_max < box.u_min : box.u_min <= box.u_max);
  const bool v_ok = box.v_min >= 0.0 && box.v_max <= h && box.v_min <= box.v_max;
  if (!u_ok || !v_ok) {
    std::ostringstream msg;
    msg << "invalid panorama box [" << box.u_min << ", " << box.v_min << ", " << box.u_max << ", "
        << box.v_max << (box.wrapped ? ", wrapped" : "") << "] for " << spec.width() << "x"
        << spec.height();
    throw std::invalid_argument(msg.str());
  }
}

/// Fisheye quadrilateral ordered head-left, head-right, foot-right,
/// foot-left. The head side is the projection of the panorama box's top edge.
struct FisheyeQuad {
  std::array<PixelCoord, 4> corners;

  const PixelCoord& head_left() const { return corners[0]; }
  const PixelCoord& head_right() const { return corners[1]; }
  const PixelCoord& foot_right() const { return corners[2]; }
  const PixelCoord& foot_left() const { return corners[3]; }
};

/// Rotated rectangle in the fisheye frame. `angle` is the direction of the
/// height axis (foot to head) measured like the azimuth: from +u toward +v.
/// A radius-aligned box therefore has angle equal to its azimuth.
struct RotatedRect {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
  double angle = 0.0;

  PixelCoord center() const { return {cx, cy}; }

  /// Corners in FisheyeQuad order.
  std::array<PixelCoord, 4> corners() const {
    const double hu = std::cos(angle), hv = std::sin(angle);
    const double wu = -hv, wv = hu;
    const double a = 0.5 * h, b = 0.5 * w;
    return {PixelCoord{cx + a * hu - b * wu, cy + a * hv - b * wv},
            PixelCoord{cx + a * hu + b * wu, cy + a * hv + b * wv},
            PixelCoord{cx - a * hu + b * wu, cy - a * hv + b * wv},
            PixelCoord{cx - a * hu - b * wu, cy - a * hv - b * wv}};
  }

  /// Corners followed by the four edge midpoints.
  std::array<PixelCoord, 8> outline_samples() const {
    const auto c = corners();
    std::array<PixelCoord, 8> out;
    for (int i = 0; i < 4; ++i) {
      out[i] = c[i];
      const PixelCoord& n = c[(i + 1) % 4];
      out[4 + i] = {0.5 * (c[i].u + n.u), 0.5 * (c[i].v + n.v)};
    }
    return out;
  }

  bool contains(const PixelCoord& p) const {
    const double du = p.u - cx, dv = p.v - cy;
    const double along_h = du * std::cos(angle) + dv * std::sin(angle);
    const double along_w = -du * std::sin(angle) + dv * std::cos(angle);
    return std::abs(along_h) <= 0.5 * h && std::abs(along_w) <= 0.5 * w;
  }
};

inline FisheyeQuad pano_box_to_fisheye_quad(const PanoBox& box, const StereographicCamera& cam,
                                            const EquirectSpec& spec) {
  validate(box, spec);
  const double right = box.wrapped ? box.u_max + spec.width() : box.u_max;
  auto corner = [&](double x, double y) { return project(cam, pano_point_to_sphere(spec, x, y)); };
  return FisheyeQuad{{corner(box.u_min, box.v_min), corner(right, box.v_min),
                      corner(right, box.v_max), corner(box.u_min, box.v_max)}};
}

/// Rectangle whose width is the mean of the two parallel sides and whose
/// height joins their midpoints.
inline RotatedRect quad_to_rotated_rect(const FisheyeQuad& q) {
  const PixelCoord head{0.5 * (q.head_left().u + q.head_right().u),
                        0.5 * (q.head_left().v + q.head_right().v)};
  const PixelCoord foot{0.5 * (q.foot_left().u + q.foot_right().u),
                        0.5 * (q.foot_left().v + q.foot_right().v)};
  const double height = distance(head, foot);
  if (!(height > 1e-12)) throw DegenerateBoxError("trapezoid has zero height");
  const double width =
      0.5 * (distance(q.head_left(), q.head_right()) + distance(q.foot_left(), q.foot_right()));
  return RotatedRect{0.5 * (head.u + foot.u), 0.5 * (head.v + foot.v), width, height,
                     std::atan2(head.v - foot.v, head.u - foot.u)};
}

/// Closed azimuth interval [start, start + extent] in world azimuth.
struct AzimuthArc {
  double start = 0.0;
  double extent = 0.0;
  bool full = false;

  /// True when `azimuth` lies strictly inside the arc.
  bool strictly_contains(double azimuth) const {
    if (full) return true;
    const double rel = normalize_azimuth(azimuth - start);
    constexpr double kEps = 1e-12;
    return rel > kEps && rel < extent - kEps;
  }
};

namespace detail {

/// Smallest arc covering all azimuths (each in [0, 2pi)).
inline AzimuthArc minimal_arc(std::vector<double> az) {
  if (az.empty()) return {0.0, 0.0, true};
  std::sort(az.begin(), az.end());
  // Gap that wraps from the last sample back to the first.
  double best_gap = az.front() + kTwoPi - az.back();
  std::size_t best = az.size() - 1;
  for (std::size_t i = 0; i + 1 < az.size(); ++i) {
    const double gap = az[i + 1] - az[i];
    if (gap > best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  const std::size_t first = (best + 1) % az.size();
  return {az[first], kTwoPi - best_gap, false};
}

struct RectDirections {
  std::array<SpherePoint, 8> points;
  bool covers_pole = false;
};

inline RectDirections backproject_outline(const RotatedRect& r, const StereographicCamera& cam) {
  if (!(r.w > 0.0 && r.h > 0.0)) throw std::invalid_argument("rotated rectangle must have w, h > 0");
  RectDirections out;
  const auto samples = r.outline_samples();
  for (std::size_t i = 0; i < samples.size(); ++i) out.points[i] = backproject(cam, samples[i]);
  out.covers_pole = r.contains(cam.principal_point());
  return out;
}

inline AzimuthArc arc_of(const RectDirections& dirs) {
  if (dirs.covers_pole) return {0.0, kTwoPi, true};
  std::vector<double> az;
  for (const SpherePoint& p : dirs.points) {
    if (p.theta() > 0.0) az.push_back(p.phi());
  }
  return minimal_arc(std::move(az));
}

}  // namespace detail

/// World-azimuth interval spanned by a fisheye rectangle (corners and edge
/// midpoints). Rectangles covering the principal point span every azimuth.
inline AzimuthArc rect_azimuth_arc(const RotatedRect& r, const StereographicCamera& cam) {
  return detail::arc_of(detail::backproject_outline(r, cam));
}

/// Panorama hull of a fisheye rectangle. Sets `wrapped` when the rectangle
/// straddles the seam at `spec.azimuth_origin()`.
inline PanoBox fisheye_rect_to_pano_box(const RotatedRect& r, const StereographicCamera& cam,
                                        const EquirectSpec& spec) {
  const auto dirs = detail::backproject_outline(r, cam);
  PanoBox box;
  box.v_min = std::numeric_limits<double>::infinity();
  box.v_max = -std::numeric_limits<double>::infinity();
  for (const SpherePoint& p : dirs.points) {
    const double y = sphere_to_pano_point(spec, p).v;
    box.v_min = std::min(box.v_min, y);
    box.v_max = std::max(box.v_max, y);
  }
  const AzimuthArc arc = detail::arc_of(dirs);
  if (arc.full) {
    box.u_min = 0.0;
    box.u_max = spec.width();
    box.v_max = spec.height();
    return box;
  }
  const double scale = spec.width() / kTwoPi;
  const double start = normalize_azimuth(arc.start - spec.azimuth_origin());
  const double end = start + arc.extent;
  box.u_min = start * scale;
  if (end <= kTwoPi) {
    box.u_max = std::min(end * scale, double(spec.width()));
  } else {
    box.wrapped = true;
    box.u_max = (end - kTwoPi) * scale;
  }
  return box;
}

/// Number of arcs the seam at `origin` would split.
inline int count_seam_crossings(std::span<const AzimuthArc> arcs, double origin) {
  return static_cast<int>(std::count_if(arcs.begin(), arcs.end(),
                                        [&](const AzimuthArc& a) { return a.strictly_contains(origin); }));
}

/// Azimuth origin that keeps every arc off the seam: the middle of the widest
/// uncovered gap when one exists, otherwise the arc endpoint with the fewest
/// crossings (ties to the smallest angle).
inline double choose_seam_azimuth(std::span<const AzimuthArc> arcs) {
  std::vector<double> ends;
  for (const AzimuthArc& a : arcs) {
    if (a.full) continue;
    ends.push_back(normalize_azimuth(a.start));
    ends.push_back(normalize_azimuth(a.start + a.extent));
  }
  if (ends.empty()) return 0.0;
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());

  const int floor_crossings =
      static_cast<int>(std::count_if(arcs.begin(), arcs.end(), [](const AzimuthArc& a) { return a.full; }));
  double best_len = 0.0;
  double best_mid = 0.0;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    const double a = ends[i];
    const double b = (i + 1 < ends.size()) ? ends[i + 1] : ends.front() + kTwoPi;
    const double len = b - a;
    if (len <= 0.0) continue;
    const double mid = normalize_azimuth(0.5 * (a + b));
    if (count_seam_crossings(arcs, mid) != floor_crossings) continue;
    if (len > best_len || (len == best_len && mid < best_mid)) {
      best_len = len;
      best_mid = mid;
    }
  }
  if (best_len > 0.0) return best_mid;

  int best_count = std::numeric_limits<int>::max();
  double best_end = 0.0;
  for (double e : ends) {
    const int n = count_seam_crossings(arcs, e);
    if (n < best_count) {
      best_count = n;
      best_end = e;
    }
  }
  return best_end;
}

inline double choose_seam_azimuth(std::span<const RotatedRect> boxes, const StereographicCamera& cam) {
  std::vector<AzimuthArc> arcs;
  arcs.reserve(boxes.size());
  for (const RotatedRect& r : boxes) arcs.push_back(rect_azimuth_arc(r, cam));
  return choose_seam_azimuth(std::span<const AzimuthArc>(arcs));
}

}  // namespace omnipano
