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

// COCO-style detection scoring on panorama rectangles, plus distance-binned
// AP, operating-point precision/recall and ground-position errors.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "omnipano/box_geometry.hpp"
#include "omnipano/errors.hpp"
#include "omnipano/localization.hpp"
#include "omnipano/panorama_remap.hpp"

namespace omnipano {

using ImageId = std::int64_t;

struct GroundTruthRecord {
  ImageId image_id = 0;
  PanoBox box;
  /// Surveyed floor position; when absent the box is localized instead.
  std::optional<GroundPosition> position;
};

struct DetectionRecord {
  ImageId image_id = 0;
  PanoBox box;
  double confidence = 0.0;
};

namespace detail {

inline double overlap_1d(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace detail

/// Intersection over union of two panorama rectangles. Wrapped boxes are
/// unwrapped past the seam, which needs the panorama width.
inline double iou_axis_aligned(const PanoBox& a, const PanoBox& b, double panorama_width = 0.0) {
  if ((a.wrapped || b.wrapped) && !(panorama_width > 0.0)) {
    throw std::invalid_argument("panorama width required for wrapped boxes");
  }
  const double a0 = a.u_min, a1 = a.wrapped ? a.u_max + panorama_width : a.u_max;
  const double b0 = b.u_min, b1 = b.wrapped ? b.u_max + panorama_width : b.u_max;
  double inter_u = detail::overlap_1d(a0, a1, b0, b1);
  if (panorama_width > 0.0) {
    inter_u += detail::overlap_1d(a0, a1, b0 + panorama_width, b1 + panorama_width);
    inter_u += detail::overlap_1d(a0, a1, b0 - panorama_width, b1 - panorama_width);
  }
  const double inter = inter_u * detail::overlap_1d(a.v_min, a.v_max, b.v_min, b.v_max);
  const double area_a = (a1 - a0) * a.height();
  const double area_b = (b1 - b0) * b.height();
  const double uni = area_a + area_b - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

struct APResult {
  double value = 0.0;
  bool no_ground_truth = false;  ///< AP is reported as 0 when there is no GT
};

struct MatchOptions {
  double iou_threshold = 0.5;
  int max_dets = 100;
  double panorama_width = 0.0;
  double min_confidence = -1.0;
};

/// Outcome of greedy matching, with records in per-image score order.
struct MatchResult {
  struct Det {
    ImageId image_id = 0;
    std::size_t index = 0;  ///< position in the input detection list
    double score = 0.0;
    std::optional<std::size_t> gt;  ///< matched GT input position
    bool ignored = false;
  };
  std::vector<Det> dets;
  long num_gt = 0;  ///< non-ignored ground truth
};

/// Greedy one-to-one matching per image in descending confidence, COCO
/// style. `gt_ignored[i]` flags GT that should neither count nor penalize
/// (outside the evaluated range); `det_out_of_range[j]` marks detections
/// that are ignored when they stay unmatched.
inline MatchResult match_detections(std::span<const DetectionRecord> dets, std::span<const GroundTruthRecord> gts,
                                    const MatchOptions& opt, const std::vector<bool>& gt_ignored = {},
                                    const std::vector<bool>& det_out_of_range = {}) {
  std::map<ImageId, std::vector<std::size_t>> gts_by_image, dets_by_image;
  for (std::size_t i = 0; i < gts.size(); ++i) gts_by_image[gts[i].image_id].push_back(i);
  for (std::size_t j = 0; j < dets.size(); ++j) {
    if (dets[j].confidence >= opt.min_confidence) dets_by_image[dets[j].image_id].push_back(j);
  }
  auto ignored_gt = [&](std::size_t i) { return !gt_ignored.empty() && gt_ignored[i]; };

  MatchResult out;
  for (std::size_t i = 0; i < gts.size(); ++i) out.num_gt += ignored_gt(i) ? 0 : 1;

  std::vector<ImageId> images;
  for (const auto& [id, _] : gts_by_image) images.push_back(id);
  for (const auto& [id, _] : dets_by_image) images.push_back(id);
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());

  for (ImageId id : images) {
    std::vector<std::size_t> g = gts_by_image[id];
    std::stable_sort(g.begin(), g.end(),
                     [&](std::size_t x, std::size_t y) { return !ignored_gt(x) && ignored_gt(y); });
    std::vector<std::size_t> d = dets_by_image[id];
    std::stable_sort(d.begin(), d.end(),
                     [&](std::size_t x, std::size_t y) { return dets[x].confidence > dets[y].confidence; });
    if (static_cast<int>(d.size()) > opt.max_dets) d.resize(opt.max_dets);

    std::vector<bool> taken(g.size(), false);
    for (std::size_t j : d) {
      double best = std::min(opt.iou_threshold, 1.0 - 1e-10);
      int m = -1;
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (taken[k]) continue;
        // Once matched to a counted GT, never fall back to an ignored one.
        if (m > -1 && !ignored_gt(g[m]) && ignored_gt(g[k])) break;
        const double iou = iou_axis_aligned(dets[j].box, gts[g[k]].box, opt.panorama_width);
        if (iou < best) continue;
        best = iou;
        m = static_cast<int>(k);
      }
      MatchResult::Det rec{id, j, dets[j].confidence, std::nullopt, false};
      if (m > -1) {
        taken[m] = true;
        rec.gt = g[m];
        rec.ignored = ignored_gt(g[m]);
      } else {
        rec.ignored = !det_out_of_range.empty() && det_out_of_range[j];
      }
      out.dets.push_back(rec);
    }
  }
  return out;
}

inline constexpr int kRecallPoints = 101;

/// Area under the COCO 101-point interpolated precision/recall curve.
inline APResult average_precision_from_matches(const MatchResult& m) {
  if (m.num_gt == 0) return {0.0, true};
  std::vector<const MatchResult::Det*> order;
  for (const auto& d : m.dets) {
    if (!d.ignored) order.push_back(&d);
  }
  // Match records are already grouped by ascending image id and per-image
  // score order, so a stable sort breaks ties by (image id, det order).
  std::stable_sort(order.begin(), order.end(),
                   [](const auto* a, const auto* b) { return a->score > b->score; });
  std::vector<double> recall(order.size()), precision(order.size());
  double tp = 0.0, fp = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (order[i]->gt ? tp : fp) += 1.0;
    recall[i] = tp / m.num_gt;
    precision[i] = tp / (tp + fp);
  }
  for (std::size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double sum = 0.0;
  for (int r = 0; r < kRecallPoints; ++r) {
    const double threshold = r / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), threshold);
    if (it != recall.end()) sum += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return {sum / kRecallPoints, false};
}

inline APResult average_precision(std::span<const DetectionRecord> dets, std::span<const GroundTruthRecord> gts,
                                  double iou_threshold, double panorama_width = 0.0) {
  MatchOptions opt;
  opt.iou_threshold = iou_threshold;
  opt.panorama_width = panorama_width;
  return average_precision_from_matches(match_detections(dets, gts, opt));
}

/// Panorama geometry and per-image camera heights for distance metrics.
struct LocalizationSetup {
  EquirectSpec spec;
  std::map<ImageId, double> camera_heights_m;

  double camera_height(ImageId id) const {
    const auto it = camera_heights_m.find(id);
    if (it == camera_heights_m.end()) {
      throw ConfigurationError("missing camera_height_m for image " + std::to_string(id));
    }
    return it->second;
  }
};

struct EvalConfig {
  std::vector<double> iou_thresholds = default_iou_thresholds();
  double confidence_threshold = 0.3;
  double match_iou = 0.5;  ///< IoU for P/R/F1 and position-error pairs
  int max_dets = 100;
  double panorama_width = 0.0;  ///< only needed for wrapped boxes without `localization`
  bool distance_metrics = false;
  std::optional<LocalizationSetup> localization;
  /// Optional per-image split tag (e.g. seen/unseen); mAP is reported per tag.
  std::map<ImageId, std::string> splits;

  static std::vector<double> default_iou_thresholds() {
    std::vector<double> t;
    for (int i = 0; i < 10; ++i) t.push_back(0.5 + 0.05 * i);
    return t;
  }
};

struct EvalReport {
  double map = 0.0;
  double ap50 = 0.0;
  double ap75 = 0.0;
  std::vector<double> ap_per_threshold;
  std::optional<double> ap_near, ap_mid, ap_far;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> mean_position_error;
  std::optional<double> pe_near, pe_mid, pe_far;
  long num_gt = 0;
  long num_dets = 0;
  long true_positives = 0;  ///< at the confidence/IoU operating point
  long matched_pairs = 0;   ///< pairs that contributed to position error
  std::map<std::string, double> split_map;

  // Flags for metrics reported as 0 because they are undefined.
  bool no_ground_truth = false;
  bool precision_undefined = false;
  std::vector<std::string> empty_distance_bins;
};

namespace detail {

inline double mean_ap(std::span<const DetectionRecord> dets, std::span<const GroundTruthRecord> gts,
                      const EvalConfig& cfg, double width, std::vector<double>* per_threshold,
                      const std::vector<bool>& gt_ignored = {}, const std::vector<bool>& det_out = {},
                      bool* no_gt = nullptr) {
  double sum = 0.0;
  for (double t : cfg.iou_thresholds) {
    MatchOptions opt{t, cfg.max_dets, width, -1.0};
    const APResult ap = average_precision_from_matches(match_detections(dets, gts, opt, gt_ignored, det_out));
    if (no_gt) *no_gt = ap.no_ground_truth;
    if (per_threshold) per_threshold->push_back(ap.value);
    sum += ap.value;
  }
  return cfg.iou_thresholds.empty() ? 0.0 : sum / cfg.iou_thresholds.size();
}

inline double ap_at(std::span<const DetectionRecord> dets, std::span<const GroundTruthRecord> gts,
                    const EvalConfig& cfg, double width, double threshold) {
  MatchOptions opt{threshold, cfg.max_dets, width, -1.0};
  return average_precision_from_matches(match_detections(dets, gts, opt)).value;
}

}  // namespace detail

inline EvalReport evaluate(std::span<const DetectionRecord> dets, std::span<const GroundTruthRecord> gts,
                           const EvalConfig& cfg = {}) {
  for (const DetectionRecord& d : dets) {
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      throw std::invalid_argument("detection confidence outside [0, 1]");
    }
  }
  if (cfg.distance_metrics && !cfg.localization) {
    throw ConfigurationError("distance metrics need panorama geometry and camera heights");
  }
  const double width = cfg.localization ? cfg.localization->spec.width() : cfg.panorama_width;

  EvalReport rep;
  rep.num_gt = static_cast<long>(gts.size());
  rep.num_dets = static_cast<long>(dets.size());
  rep.map = detail::mean_ap(dets, gts, cfg, width, &rep.ap_per_threshold, {}, {}, &rep.no_ground_truth);
  rep.ap50 = detail::ap_at(dets, gts, cfg, width, 0.5);
  rep.ap75 = detail::ap_at(dets, gts, cfg, width, 0.75);

  // Operating point.
  MatchOptions op{cfg.match_iou, std::numeric_limits<int>::max(), width, cfg.confidence_threshold};
  const MatchResult at_op = match_detections(dets, gts, op);
  const long kept = static_cast<long>(at_op.dets.size());
  for (const auto& d : at_op.dets) rep.true_positives += d.gt ? 1 : 0;
  rep.precision_undefined = kept == 0;
  rep.precision = kept > 0 ? static_cast<double>(rep.true_positives) / kept : 0.0;
  rep.recall = gts.empty() ? 0.0 : static_cast<double>(rep.true_positives) / gts.size();
  rep.f1 = rep.precision + rep.recall > 0.0
               ? 2.0 * rep.precision * rep.recall / (rep.precision + rep.recall)
               : 0.0;

  if (cfg.localization) {
    const LocalizationSetup& loc = *cfg.localization;
    auto gt_position = [&](const GroundTruthRecord& g) {
      return g.position ? *g.position : locate_from_box(g.box, loc.spec, loc.camera_height(g.image_id));
    };

    // Position errors over operating-point matches.
    std::array<double, 3> bin_sum{};
    std::array<long, 3> bin_n{};
    double total = 0.0;
    for (const auto& d : at_op.dets) {
      if (!d.gt) continue;
      const DetectionRecord& det = dets[d.index];
      const GroundTruthRecord& gt = gts[*d.gt];
      const GroundPosition truth = gt_position(gt);
      const double err =
          position_error(locate_from_box(det.box, loc.spec, loc.camera_height(det.image_id)), truth);
      total += err;
      const auto b = static_cast<std::size_t>(distance_bin(truth.distance_m));
      bin_sum[b] += err;
      ++bin_n[b];
      ++rep.matched_pairs;
    }
    if (rep.matched_pairs > 0) rep.mean_position_error = total / rep.matched_pairs;
    if (bin_n[0]) rep.pe_near = bin_sum[0] / bin_n[0];
    if (bin_n[1]) rep.pe_mid = bin_sum[1] / bin_n[1];
    if (bin_n[2]) rep.pe_far = bin_sum[2] / bin_n[2];
  }

  if (cfg.distance_metrics) {
    const LocalizationSetup& loc = *cfg.localization;
    std::vector<DistanceBin> gt_bin, det_bin;
    for (const auto& g : gts) {
      gt_bin.push_back(distance_bin(locate_from_box(g.box, loc.spec, loc.camera_height(g.image_id)).distance_m));
    }
    for (const auto& d : dets) {
      det_bin.push_back(distance_bin(locate_from_box(d.box, loc.spec, loc.camera_height(d.image_id)).distance_m));
    }
    for (DistanceBin bin : {DistanceBin::kNear, DistanceBin::kMid, DistanceBin::kFar}) {
      std::vector<bool> gt_ignored(gts.size()), det_out(dets.size());
      for (std::size_t i = 0; i < gts.size(); ++i) gt_ignored[i] = gt_bin[i] != bin;
      for (std::size_t j = 0; j < dets.size(); ++j) det_out[j] = det_bin[j] != bin;
      bool empty = false;
      const double ap = detail::mean_ap(dets, gts, cfg, width, nullptr, gt_ignored, det_out, &empty);
      if (empty) rep.empty_distance_bins.emplace_back(to_string(bin));
      (bin == DistanceBin::kNear ? rep.ap_near : bin == DistanceBin::kMid ? rep.ap_mid : rep.ap_far) = ap;
    }
  }

  if (!cfg.splits.empty()) {
    std::map<std::string, std::pair<std::vector<DetectionRecord>, std::vector<GroundTruthRecord>>> parts;
    for (const auto& d : dets) {
      if (auto it = cfg.splits.find(d.image_id); it != cfg.splits.end()) parts[it->second].first.push_back(d);
    }
    for (const auto& g : gts) {
      if (auto it = cfg.splits.find(g.image_id); it != cfg.splits.end()) parts[it->second].second.push_back(g);
    }
    for (const auto& [tag, p] : parts) {
      rep.split_map[tag] = detail::mean_ap(p.first, p.second, cfg, width, nullptr);
    }
  }
  return rep;
}

}  // namespace omnipano
