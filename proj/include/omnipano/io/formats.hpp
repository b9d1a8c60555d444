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

// JSON and CSV file formats used by the command-line tool.
//
// Camera config:
//   {"width", "height", "circle_radius_px"?, "principal_point"?: [u, v],
//    "camera_height_m"?}
// Annotation / detection files:
//   {"images": [{"id", "file", "width", "height", "camera_height_m"?, "split"?}],
//    "annotations": [{"image_id", "id"?, "score"?, "position"?: [x_m, y_m],
//                     "rbox"?: [cx, cy, w, h, angle_deg],
//                     "pano_box"?: [u_min, v_min, u_max, v_max], "wrapped"?}]}
// A bare array is accepted for detections and read as the annotation list.

#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "omnipano/box_geometry.hpp"
#include "omnipano/camera_model.hpp"
#include "omnipano/evaluation.hpp"
#include "omnipano/io/atomic_file.hpp"
#include "omnipano/panorama_remap.hpp"

namespace omnipano::io {

using nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Shortest round-trip decimal representation.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct CameraConfig {
  int width = 0;
  int height = 0;
  std::optional<double> circle_radius_px;
  std::optional<PixelCoord> principal_point;
  std::optional<double> camera_height_m;
};

inline CameraConfig parse_camera_config(const json& j) {
  try {
    CameraConfig c;
    c.width = j.at("width").get<int>();
    c.height = j.at("height").get<int>();
    if (j.contains("circle_radius_px")) c.circle_radius_px = j["circle_radius_px"].get<double>();
    if (j.contains("principal_point")) {
      const auto& p = j["principal_point"];
      c.principal_point = PixelCoord{p.at(0).get<double>(), p.at(1).get<double>()};
    }
    if (j.contains("camera_height_m")) c.camera_height_m = j["camera_height_m"].get<double>();
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad camera config: ") + e.what());
  }
}

inline CameraConfig load_camera_config(const std::filesystem::path& path) {
  try {
    return parse_camera_config(json::parse(read_text(path)));
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

/// Camera for the square working image derived from a raw frame, with the
/// raw -> working offset.
struct CameraFrame {
  StereographicCamera camera;
  SquareFraming framing;

  PixelCoord to_working(const PixelCoord& raw) const {
    return {raw.u + framing.offset_u, raw.v + framing.offset_v};
  }
  PixelCoord to_raw(const PixelCoord& working) const {
    return {working.u - framing.offset_u, working.v - framing.offset_v};
  }
};

inline CameraFrame make_camera_frame(const CameraConfig& cfg) {
  const SquareFraming f = square_framing(cfg.width, cfg.height, cfg.circle_radius_px);
  const double radius = cfg.circle_radius_px.value_or(0.5 * std::min(cfg.width, cfg.height));
  const PixelCoord pp = cfg.principal_point
                            ? PixelCoord{cfg.principal_point->u + f.offset_u, cfg.principal_point->v + f.offset_v}
                            : PixelCoord{0.5 * f.side, 0.5 * f.side};
  return {StereographicCamera(ImageSize{f.side, f.side}, radius, pp), f};
}

struct ImageInfo {
  ImageId id = 0;
  std::string file;
  int width = 0;
  int height = 0;
  std::optional<double> camera_height_m;
  std::optional<std::string> split;
};

struct Annotation {
  ImageId image_id = 0;
  std::optional<std::int64_t> id;
  std::optional<double> score;
  std::optional<GroundPosition> position;
  std::optional<RotatedRect> rbox;  ///< angle in radians
  std::optional<PanoBox> pano_box;
  std::optional<std::vector<PixelCoord>> quad;
};

struct Dataset {
  std::vector<ImageInfo> images;
  std::vector<Annotation> annotations;

  const ImageInfo* find_image(ImageId id) const {
    for (const ImageInfo& im : images) {
      if (im.id == id) return &im;
    }
    return nullptr;
  }
};

inline Annotation parse_annotation(const json& a) {
  Annotation out;
  out.image_id = a.at("image_id").get<ImageId>();
  if (a.contains("id")) out.id = a["id"].get<std::int64_t>();
  if (a.contains("score")) out.score = a["score"].get<double>();
  if (a.contains("position")) {
    const auto& p = a["position"];
    out.position = GroundPosition::from_xy(p.at(0).get<double>(), p.at(1).get<double>());
  }
  if (a.contains("rbox")) {
    const auto& r = a["rbox"];
    if (r.size() != 5) throw FormatError("rbox must be [cx, cy, w, h, angle_deg]");
    out.rbox = RotatedRect{r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>(),
                           deg_to_rad(r[4].get<double>())};
  }
  if (a.contains("pano_box")) {
    const auto& b = a["pano_box"];
    if (b.size() != 4) throw FormatError("pano_box must be [u_min, v_min, u_max, v_max]");
    out.pano_box = PanoBox{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>(),
                           a.value("wrapped", false)};
  }
  if (!out.rbox && !out.pano_box) throw FormatError("annotation needs an rbox or a pano_box");
  return out;
}

inline Dataset parse_dataset(const json& j) {
  try {
    Dataset ds;
    const json* anns = &j;
    if (j.is_object()) {
      for (const auto& im : j.value("images", json::array())) {
        ImageInfo info;
        info.id = im.at("id").get<ImageId>();
        info.file = im.value("file", "");
        info.width = im.value("width", 0);
        info.height = im.value("height", 0);
        if (im.contains("camera_height_m")) info.camera_height_m = im["camera_height_m"].get<double>();
        if (im.contains("split")) info.split = im["split"].get<std::string>();
        ds.images.push_back(std::move(info));
      }
      anns = &j.at("annotations");
    }
    if (!anns->is_array()) throw FormatError("annotations must be an array");
    for (const auto& a : *anns) ds.annotations.push_back(parse_annotation(a));
    return ds;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad annotation file: ") + e.what());
  }
}

inline Dataset load_dataset(const std::filesystem::path& path) {
  try {
    return parse_dataset(json::parse(read_text(path)));
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline json to_json(const Annotation& a) {
  json j;
  j["image_id"] = a.image_id;
  if (a.id) j["id"] = *a.id;
  if (a.score) j["score"] = *a.score;
  if (a.position) j["position"] = {a.position->x_m, a.position->y_m};
  if (a.rbox) j["rbox"] = {a.rbox->cx, a.rbox->cy, a.rbox->w, a.rbox->h, rad_to_deg(a.rbox->angle)};
  if (a.pano_box) {
    j["pano_box"] = {a.pano_box->u_min, a.pano_box->v_min, a.pano_box->u_max, a.pano_box->v_max};
    if (a.pano_box->wrapped) j["wrapped"] = true;
  }
  if (a.quad) {
    json q = json::array();
    for (const PixelCoord& p : *a.quad) q.push_back({p.u, p.v});
    j["quad"] = std::move(q);
  }
  return j;
}

inline json to_json(const Dataset& ds) {
  json images = json::array();
  for (const ImageInfo& im : ds.images) {
    json j{{"id", im.id}, {"file", im.file}, {"width", im.width}, {"height", im.height}};
    if (im.camera_height_m) j["camera_height_m"] = *im.camera_height_m;
    if (im.split) j["split"] = *im.split;
    images.push_back(std::move(j));
  }
  json anns = json::array();
  for (const Annotation& a : ds.annotations) anns.push_back(to_json(a));
  return json{{"images", std::move(images)}, {"annotations", std::move(anns)}};
}

/// Numeric grid, one row per line, comma separated.
struct Grid {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
};

inline Grid parse_csv_grid(const std::string& text) {
  Grid g;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    int n = 0;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t end = line.find(',', pos);
      if (end == std::string::npos) end = line.size();
      std::string cell = line.substr(pos, end - pos);
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      cell = first == std::string::npos ? "" : cell.substr(first, last - first + 1);
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw FormatError("bad CSV number '" + cell + "' on row " + std::to_string(g.rows + 1));
      }
      g.values.push_back(v);
      ++n;
      pos = end + 1;
    }
    if (g.rows == 0) {
      g.cols = n;
    } else if (n != g.cols) {
      throw FormatError("CSV row " + std::to_string(g.rows + 1) + " has " + std::to_string(n) +
                        " values, expected " + std::to_string(g.cols));
    }
    ++g.rows;
  }
  if (g.rows == 0) throw FormatError("empty CSV grid");
  return g;
}

inline std::string format_csv_grid(const Grid& g) {
  std::string out;
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      if (c) out += ',';
      out += format_number(g.values[static_cast<std::size_t>(r) * g.cols + c]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace omnipano::io
