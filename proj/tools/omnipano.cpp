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

// omnipano: command-line front end for the fisheye/panorama toolkit.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "omnipano/io/atomic_file.hpp"
#include "omnipano/io/formats.hpp"
#include "omnipano/io/image_io.hpp"
#include "omnipano/omnipano.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace omnipano;

namespace {

constexpr int kDefaultPanoramaWidth = 3072;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int thread_count() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("TOOL_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) n = std::min(n, cap);
    } catch (const std::exception&) {
      throw UsageError(std::string("TOOL_THREADS must be a positive integer, got '") + env + "'");
    }
  }
  return n;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Camera from --camera, or from an inline "camera" object in --config.
struct CameraSource {
  std::string path;
  std::optional<json> inline_config;

  bool available() const { return !path.empty() || inline_config.has_value(); }

  io::CameraConfig load() const {
    if (!path.empty()) return io::load_camera_config(path);
    if (inline_config) return io::parse_camera_config(*inline_config);
    throw ConfigurationError("a camera config (--camera) is required");
  }
};

EquirectSpec make_spec(int width, double azimuth_origin_deg) {
  if (width <= 0 || width % 4 != 0) {
    throw UsageError("--width must be a positive multiple of 4, got " + std::to_string(width));
  }
  return EquirectSpec::from_width(width, deg_to_rad(azimuth_origin_deg));
}

// ---------------------------------------------------------------------------
// remap

struct RemapArgs {
  std::string input, output;
  int width = 0;
  double azimuth_origin_deg = 0.0;
};

int run_remap(const RemapArgs& a, const CameraSource& cam_src) {
  const Image8 raw = io::read_image(a.input);
  std::optional<io::CameraConfig> cfg;
  if (cam_src.available()) {
    cfg = cam_src.load();
    if (cfg->width != raw.width() || cfg->height != raw.height()) {
      throw ConfigurationError("camera config is " + std::to_string(cfg->width) + "x" + std::to_string(cfg->height) +
                               " but the image is " + std::to_string(raw.width()) + "x" +
                               std::to_string(raw.height()));
    }
  } else {
    cfg = io::CameraConfig{raw.width(), raw.height(), std::nullopt, std::nullopt, std::nullopt};
  }
  const io::CameraFrame frame = io::make_camera_frame(*cfg);
  const Image8 square = normalize_input(raw, cfg->circle_radius_px);
  const int width = a.width > 0 ? a.width : default_panorama_width(frame.framing.side);
  const EquirectSpec spec = make_spec(width, a.azimuth_origin_deg);
  const int threads = thread_count();
  const RemapTable table = build_remap_table(frame.camera, spec, threads);
  const Image8 pano = remap_image(square, table, threads);
  io::write_atomically(a.output, [&](const fs::path& tmp) { io::write_image(tmp, pano); });
  return 0;
}

// ---------------------------------------------------------------------------
// tile-viz

struct TileVizArgs {
  int feature_height = 0, feature_width = 0, regions = 5, division = 2, cell_px = 4;
  std::string png = "tiles.png", json_path = "tiles.json";
};

json tiling_to_json(const TilingSpec& t) {
  json regions = json::array();
  for (const RegionSpec& r : t.regions()) {
    json tiles = json::array();
    for (const Tile& tile : t.tiles()) {
      if (tile.region == r.index) tiles.push_back({tile.row_start, tile.row_end, tile.col_start, tile.col_end});
    }
    regions.push_back({{"index", r.index},
                       {"row_start", r.row_start},
                       {"row_end", r.row_end},
                       {"tile_side", r.tile_side},
                       {"exact_side", r.exact_side},
                       {"rows_of_tiles", r.rows_of_tiles},
                       {"tiles", std::move(tiles)}});
  }
  return {{"feature_height", t.feature_height()},
          {"feature_width", t.feature_width()},
          {"num_regions", t.num_regions()},
          {"division_factor", t.division_factor()},
          {"num_tiles", t.tiles().size()},
          {"regions", std::move(regions)}};
}

Image8 render_tiling(const TilingSpec& t, int cell) {
  Image8 img(t.feature_width() * cell, t.feature_height() * cell, 3);
  for (const Tile& tile : t.tiles()) {
    const std::uint8_t shade = tile.region % 2 ? 40 : 70;
    const int x0 = tile.col_start * cell, x1 = tile.col_end * cell;
    const int y0 = tile.row_start * cell, y1 = tile.row_end * cell;
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        const bool border = x == x0 || y == y0 || x == x1 - 1 || y == y1 - 1;
        img.at(x, y, 0) = border ? 0 : shade;
        img.at(x, y, 1) = border ? 255 : shade;
        img.at(x, y, 2) = border ? 255 : shade;
      }
    }
  }
  return img;
}

int run_tile_viz(const TileVizArgs& a) {
  if (a.cell_px < 1 || a.cell_px > 64) throw UsageError("--cell-px must be in [1, 64]");
  const TilingSpec t = build_tiling(a.feature_height, a.feature_width, a.regions, a.division);
  io::write_text_atomically(a.json_path, dump(tiling_to_json(t)));
  const Image8 img = render_tiling(t, a.cell_px);
  io::write_atomically(a.png, [&](const fs::path& tmp) { io::write_image(tmp, img); });
  return 0;
}

// ---------------------------------------------------------------------------
// pdat-scale

struct PdatArgs {
  std::string input, output, boosted;
  double alpha = 2.0;
  int regions = 5;
};

bool is_csv(const fs::path& p) { return io::detail::lower_extension(p) == ".csv"; }

SignificanceMap<double> load_map(const fs::path& path) {
  if (is_csv(path)) {
    io::Grid g = io::parse_csv_grid(io::read_text(path));
    return SignificanceMap<double>(g.rows, g.cols, std::move(g.values));
  }
  const Image8 img = io::read_image(path);
  if (img.channels() != 1) throw io::FormatError(path.string() + ": significance map must be single-channel");
  std::vector<double> v(img.data().begin(), img.data().end());
  return SignificanceMap<double>(img.height(), img.width(), std::move(v));
}

void save_map(const fs::path& path, const SignificanceMap<double>& m) {
  if (is_csv(path)) {
    io::write_text_atomically(path, io::format_csv_grid({m.height(), m.width(), m.values()}));
    return;
  }
  Image8 img(m.width(), m.height(), 1);
  for (int r = 0; r < m.height(); ++r) {
    for (int c = 0; c < m.width(); ++c) img.at(c, r) = omnipano::detail::convert_sample<std::uint8_t>(m.at(r, c));
  }
  io::write_atomically(path, [&](const fs::path& tmp) { io::write_image(tmp, img); });
}

int run_pdat_scale(const PdatArgs& a) {
  const ScaleConfig cfg(a.alpha);
  if (cfg.above_recommended()) {
    std::cerr << "warning: scale factor " << a.alpha << " is above the recommended range [1, 3]\n";
  }
  const SignificanceMap<double> map = load_map(a.input);
  const TilingSpec tiling = build_tiling(map.height(), map.width(), a.regions, 2);
  const int threads = thread_count();
  const auto maxima = per_tile_argmax(map, tiling, threads);
  const SignificanceMap<double> out = pdat_scale(map, tiling, cfg, threads);
  save_map(a.output, out);

  json boosted = json::array();
  for (const auto& m : maxima) {
    const Tile& t = tiling.tiles()[m.tile];
    boosted.push_back({{"region", t.region},
                       {"tile", {t.row_index, t.col_index}},
                       {"row", m.row},
                       {"col", m.col},
                       {"value", m.value},
                       {"scaled", out.at(m.row, m.col)}});
  }
  const std::string boosted_path = a.boosted.empty() ? a.output + ".boosted.json" : a.boosted;
  io::write_text_atomically(boosted_path, dump(json{{"alpha", a.alpha},
                                                    {"num_tiles", tiling.tiles().size()},
                                                    {"boosted", std::move(boosted)}}));
  return 0;
}

// ---------------------------------------------------------------------------
// project-boxes

struct ProjectArgs {
  std::string input, output, direction;
  int width = 0;
  double azimuth_origin_deg = 0.0;
  bool auto_seam = false;
};

int resolve_width(int requested, const std::optional<io::CameraFrame>& frame) {
  if (requested > 0) return requested;
  return frame ? default_panorama_width(frame->framing.side) : kDefaultPanoramaWidth;
}

RotatedRect to_working(const RotatedRect& r, const io::CameraFrame& f) {
  const PixelCoord c = f.to_working(r.center());
  return {c.u, c.v, r.w, r.h, r.angle};
}

int run_project(const ProjectArgs& a, const CameraSource& cam_src) {
  const io::CameraFrame frame = io::make_camera_frame(cam_src.load());
  const EquirectSpec base = make_spec(resolve_width(a.width, frame), a.azimuth_origin_deg);
  io::Dataset ds = io::load_dataset(a.input);

  if (a.direction == "to-pano") {
    std::map<ImageId, EquirectSpec> per_image;
    if (a.auto_seam) {
      std::map<ImageId, std::vector<RotatedRect>> rects;
      for (const auto& ann : ds.annotations) {
        if (ann.rbox) rects[ann.image_id].push_back(to_working(*ann.rbox, frame));
      }
      for (const auto& [id, rs] : rects) {
        const double origin = choose_seam_azimuth(std::span<const RotatedRect>(rs), frame.camera);
        per_image.emplace(id, EquirectSpec(base.width(), base.height(), origin));
      }
    }
    json origins = json::object();
    for (auto& ann : ds.annotations) {
      if (!ann.rbox) throw io::FormatError("to-pano needs rbox annotations");
      const auto it = per_image.find(ann.image_id);
      const EquirectSpec& spec = it != per_image.end() ? it->second : base;
      ann.pano_box = fisheye_rect_to_pano_box(to_working(*ann.rbox, frame), frame.camera, spec);
      origins[std::to_string(ann.image_id)] = rad_to_deg(spec.azimuth_origin());
    }
    json out = io::to_json(ds);
    out["panorama"] = {{"width", base.width()}, {"height", base.height()}};
    out["azimuth_origin_deg"] = std::move(origins);
    io::write_text_atomically(a.output, dump(out));
    return 0;
  }
  if (a.direction == "to-fisheye") {
    for (auto& ann : ds.annotations) {
      if (!ann.pano_box) throw io::FormatError("to-fisheye needs pano_box annotations");
      const FisheyeQuad q = pano_box_to_fisheye_quad(*ann.pano_box, frame.camera, base);
      std::vector<PixelCoord> corners;
      for (const PixelCoord& p : q.corners) corners.push_back(frame.to_raw(p));
      const RotatedRect r = quad_to_rotated_rect(FisheyeQuad{{corners[0], corners[1], corners[2], corners[3]}});
      ann.quad = std::move(corners);
      ann.rbox = r;
    }
    io::write_text_atomically(a.output, dump(io::to_json(ds)));
    return 0;
  }
  throw UsageError("--direction must be to-pano or to-fisheye");
}

// ---------------------------------------------------------------------------
// shared helpers for analyze-dist / localize / eval

/// Panorama boxes for every annotation, converting rboxes through the camera.
std::vector<PanoBox> pano_boxes(const io::Dataset& ds, const EquirectSpec& spec,
                                const std::optional<io::CameraFrame>& frame) {
  std::vector<PanoBox> out;
  out.reserve(ds.annotations.size());
  for (const auto& ann : ds.annotations) {
    if (ann.pano_box) {
      out.push_back(*ann.pano_box);
    } else if (frame) {
      out.push_back(fisheye_rect_to_pano_box(to_working(*ann.rbox, *frame), frame->camera, spec));
    } else {
      throw ConfigurationError("rbox annotations need a camera config (--camera)");
    }
  }
  return out;
}

std::optional<io::CameraConfig> maybe_camera(const CameraSource& src) {
  if (!src.available()) return std::nullopt;
  return src.load();
}

std::optional<io::CameraFrame> maybe_frame(const std::optional<io::CameraConfig>& cfg) {
  if (!cfg) return std::nullopt;
  return io::make_camera_frame(*cfg);
}

/// Camera height per image: image metadata first, then the camera config.
std::map<ImageId, double> camera_heights(const io::Dataset& ds, const std::optional<io::CameraConfig>& cam,
                                         bool required) {
  std::map<ImageId, double> out;
  std::vector<ImageId> ids;
  for (const auto& im : ds.images) ids.push_back(im.id);
  for (const auto& ann : ds.annotations) ids.push_back(ann.image_id);
  for (ImageId id : ids) {
    if (out.count(id)) continue;
    const io::ImageInfo* im = ds.find_image(id);
    if (im && im->camera_height_m) {
      out[id] = *im->camera_height_m;
    } else if (cam && cam->camera_height_m) {
      out[id] = *cam->camera_height_m;
    } else if (required) {
      throw ConfigurationError("missing camera_height_m for image " + std::to_string(id));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// analyze-dist

struct DistArgs {
  std::string input, output = "dist_stats.csv";
  int width = 0;
  double azimuth_origin_deg = 0.0;
};

int run_analyze_dist(const DistArgs& a, const CameraSource& cam_src) {
  const auto cam = maybe_camera(cam_src);
  const auto frame = maybe_frame(cam);
  const EquirectSpec spec = make_spec(resolve_width(a.width, frame), a.azimuth_origin_deg);
  const io::Dataset ds = io::load_dataset(a.input);
  const std::vector<PanoBox> boxes = pano_boxes(ds, spec, frame);
  const DistributionStats stats = annotation_distribution(boxes, spec);
  std::ostringstream csv;
  stats.write_csv(csv);
  io::write_text_atomically(a.output, csv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// localize

struct LocalizeArgs {
  std::string input, output = "positions.csv";
  int width = 0;
  double azimuth_origin_deg = 0.0;
};

int run_localize(const LocalizeArgs& a, const CameraSource& cam_src) {
  const auto cam = maybe_camera(cam_src);
  const auto frame = maybe_frame(cam);
  const EquirectSpec spec = make_spec(resolve_width(a.width, frame), a.azimuth_origin_deg);
  const io::Dataset ds = io::load_dataset(a.input);
  const std::vector<PanoBox> boxes = pano_boxes(ds, spec, frame);
  const auto heights = camera_heights(ds, cam, true);

  std::string csv = "image_id,det_id,x_m,y_m,d_m,bin\n";
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& ann = ds.annotations[i];
    const GroundPosition p = locate_from_box(boxes[i], spec, heights.at(ann.image_id));
    csv += std::to_string(ann.image_id) + "," + std::to_string(ann.id ? *ann.id : static_cast<std::int64_t>(i)) +
           "," + io::format_number(p.x_m) + "," + io::format_number(p.y_m) + "," + io::format_number(p.distance_m) +
           "," + std::string(to_string(distance_bin(p.distance_m))) + "\n";
  }
  io::write_text_atomically(a.output, csv);
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string gt, dets, report;
  int width = 0;
  double azimuth_origin_deg = 0.0;
  double confidence = 0.3;
  bool distance_metrics = false;
};

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

int run_eval(const EvalArgs& a, const CameraSource& cam_src) {
  const auto cam = maybe_camera(cam_src);
  const auto frame = maybe_frame(cam);
  const EquirectSpec spec = make_spec(resolve_width(a.width, frame), a.azimuth_origin_deg);
  const io::Dataset gt_ds = io::load_dataset(a.gt);
  const io::Dataset det_ds = io::load_dataset(a.dets);

  const std::vector<PanoBox> gt_boxes = pano_boxes(gt_ds, spec, frame);
  const std::vector<PanoBox> det_boxes = pano_boxes(det_ds, spec, frame);
  std::vector<GroundTruthRecord> gts;
  for (std::size_t i = 0; i < gt_boxes.size(); ++i) {
    gts.push_back({gt_ds.annotations[i].image_id, gt_boxes[i], gt_ds.annotations[i].position});
  }
  std::vector<DetectionRecord> dets;
  for (std::size_t i = 0; i < det_boxes.size(); ++i) {
    const auto& ann = det_ds.annotations[i];
    if (!ann.score) throw io::FormatError("detection " + std::to_string(i) + " has no score");
    dets.push_back({ann.image_id, det_boxes[i], *ann.score});
  }

  EvalConfig cfg;
  cfg.confidence_threshold = a.confidence;
  cfg.panorama_width = spec.width();
  cfg.distance_metrics = a.distance_metrics;
  // Heights come from the GT images; detections share the same image ids.
  io::Dataset both = gt_ds;
  both.annotations.insert(both.annotations.end(), det_ds.annotations.begin(), det_ds.annotations.end());
  auto heights = camera_heights(both, cam, a.distance_metrics);
  bool complete = !heights.empty();
  for (const auto& g : gts) complete = complete && heights.count(g.image_id);
  for (const auto& d : dets) complete = complete && heights.count(d.image_id);
  // Position errors are reported whenever every image can be localized.
  if (complete) cfg.localization = LocalizationSetup{spec, std::move(heights)};
  for (const auto& im : gt_ds.images) {
    if (im.split) cfg.splits[im.id] = *im.split;
  }

  const EvalReport r = evaluate(dets, gts, cfg);
  json splits = json::object();
  for (const auto& [tag, v] : r.split_map) splits[tag] = v;
  json rep{{"mAP", r.map},
           {"AP50", r.ap50},
           {"AP75", r.ap75},
           {"AP_per_iou", r.ap_per_threshold},
           {"AP_near", optional_number(r.ap_near)},
           {"AP_mid", optional_number(r.ap_mid)},
           {"AP_far", optional_number(r.ap_far)},
           {"precision", r.precision},
           {"recall", r.recall},
           {"F1", r.f1},
           {"confidence_threshold", cfg.confidence_threshold},
           {"mPE", optional_number(r.mean_position_error)},
           {"PE_near", optional_number(r.pe_near)},
           {"PE_mid", optional_number(r.pe_mid)},
           {"PE_far", optional_number(r.pe_far)},
           {"num_gt", r.num_gt},
           {"num_dets", r.num_dets},
           {"true_positives", r.true_positives},
           {"matched_pairs", r.matched_pairs},
           {"mAP_per_split", std::move(splits)},
           {"flags",
            {{"no_ground_truth", r.no_ground_truth},
             {"precision_undefined", r.precision_undefined},
             {"empty_distance_bins", r.empty_distance_bins}}}};
  io::write_text_atomically(a.report, dump(rep));

  std::string csv = "metric,value\n";
  for (const auto& [k, v] : rep.items()) {
    if (v.is_number()) {
      csv += k + "," + io::format_number(v.get<double>()) + "\n";
    } else if (v.is_null()) {
      csv += k + ",\n";
    }
  }
  fs::path csv_path = a.report;
  csv_path.replace_extension(".csv");
  io::write_text_atomically(csv_path, csv);
  return 0;
}

// ---------------------------------------------------------------------------

void report_error(const char* kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << std::endl;
}

/// Appends "--key value" for every --config entry the command line did not
/// set and the chosen subcommand understands.
std::vector<std::string> merge_config(CLI::App& app, std::vector<std::string> args, CameraSource& camera) {
  if (args.size() < 2) return args;
  const auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end() || it + 1 == args.end()) return args;
  const std::string path = *(it + 1);
  json cfg;
  try {
    cfg = json::parse(io::read_text(path));
  } catch (const json::exception& e) {
    throw io::FormatError(path + ": " + e.what());
  }
  if (!cfg.is_object()) throw io::FormatError(path + ": config must be a JSON object");
  args.erase(it, it + 2);
  // The subcommand is the first argument naming one; --config may precede it.
  CLI::App* sub = nullptr;
  for (std::size_t i = 1; i < args.size() && !sub; ++i) {
    for (CLI::App* candidate : app.get_subcommands({})) {
      if (candidate->get_name() == args[i]) sub = candidate;
    }
  }
  if (!sub) return args;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    if (key == "camera" && value.is_object()) {
      camera.inline_config = value;
      continue;
    }
    if (!sub->get_option_no_throw(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      args.push_back(flag);
      args.push_back(value.dump());
    } else {
      throw io::FormatError(path + ": unsupported value for '" + key + "'");
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overhead-fisheye panorama toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with default flag values (flags win)");

  CameraSource camera;
  auto add_camera = [&](CLI::App* sub) { sub->add_option("--camera", camera.path, "camera config JSON"); };
  auto add_pano = [](CLI::App* sub, int& width, double& origin) {
    sub->add_option("--width", width, "panorama width (height = width/4)");
    sub->add_option("--azimuth-origin-deg", origin, "world azimuth of panorama column 0, degrees");
  };

  RemapArgs remap;
  auto* c_remap = app.add_subcommand("remap", "fisheye image -> equirectangular panorama");
  add_camera(c_remap);
  add_pano(c_remap, remap.width, remap.azimuth_origin_deg);
  c_remap->add_option("input", remap.input)->required();
  c_remap->add_option("output", remap.output)->required();

  TileVizArgs tv;
  auto* c_tv = app.add_subcommand("tile-viz", "render the PDAT tiling of a feature map");
  c_tv->add_option("--Hf", tv.feature_height, "feature map height")->required();
  c_tv->add_option("--Wf", tv.feature_width, "feature map width")->required();
  c_tv->add_option("--K", tv.regions, "number of regions");
  c_tv->add_option("--M", tv.division, "division factor (only 2 is tiled)");
  c_tv->add_option("--cell-px", tv.cell_px, "pixels per feature cell in the PNG");
  c_tv->add_option("--png", tv.png, "overlay PNG path");
  c_tv->add_option("--json", tv.json_path, "tile list JSON path");

  PdatArgs pd;
  auto* c_pd = app.add_subcommand("pdat-scale", "boost per-tile maxima of a significance map");
  c_pd->add_option("--alpha", pd.alpha, "scale factor (>= 1)");
  c_pd->add_option("--K", pd.regions, "number of regions");
  c_pd->add_option("--boosted", pd.boosted, "boosted-coordinates JSON (default: <output>.boosted.json)");
  c_pd->add_option("input", pd.input, "CSV grid or single-channel PNG")->required();
  c_pd->add_option("output", pd.output)->required();

  ProjectArgs pj;
  auto* c_pj = app.add_subcommand("project-boxes", "convert boxes between fisheye and panorama frames");
  add_camera(c_pj);
  add_pano(c_pj, pj.width, pj.azimuth_origin_deg);
  c_pj->add_option("--direction", pj.direction, "to-pano | to-fisheye")
      ->required()
      ->check(CLI::IsMember({"to-pano", "to-fisheye"}));
  c_pj->add_flag("--auto-seam", pj.auto_seam, "per image, pick an azimuth origin that splits no box");
  c_pj->add_option("input", pj.input)->required();
  c_pj->add_option("output", pj.output)->required();

  DistArgs ds;
  auto* c_ds = app.add_subcommand("analyze-dist", "box size statistics per 1-degree incident-angle bin");
  add_camera(c_ds);
  add_pano(c_ds, ds.width, ds.azimuth_origin_deg);
  c_ds->add_option("--out", ds.output, "CSV output path");
  c_ds->add_option("input", ds.input)->required();

  LocalizeArgs lc;
  auto* c_lc = app.add_subcommand("localize", "ground positions of detected people");
  add_camera(c_lc);
  add_pano(c_lc, lc.width, lc.azimuth_origin_deg);
  c_lc->add_option("--out", lc.output, "CSV output path");
  c_lc->add_option("input", lc.input)->required();

  EvalArgs ev;
  auto* c_ev = app.add_subcommand("eval", "COCO-style AP, P/R/F1 and position errors");
  add_camera(c_ev);
  add_pano(c_ev, ev.width, ev.azimuth_origin_deg);
  c_ev->add_option("--gt", ev.gt)->required();
  c_ev->add_option("--dets", ev.dets)->required();
  c_ev->add_option("--report", ev.report)->required();
  c_ev->add_option("--conf", ev.confidence, "confidence threshold for precision/recall/F1");
  c_ev->add_flag("--distance-metrics", ev.distance_metrics, "report near/mid/far AP (needs camera heights)");

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = merge_config(app, std::move(args), camera);
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(std::move(reversed));

    if (c_remap->parsed()) return run_remap(remap, camera);
    if (c_tv->parsed()) return run_tile_viz(tv);
    if (c_pd->parsed()) return run_pdat_scale(pd);
    if (c_pj->parsed()) return run_project(pj, camera);
    if (c_ds->parsed()) return run_analyze_dist(ds, camera);
    if (c_lc->parsed()) return run_localize(lc, camera);
    if (c_ev->parsed()) return run_eval(ev, camera);
    return 2;
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return 2;
  } catch (const UsageError& e) {
    report_error("usage", e.what());
    return 2;
  } catch (const UnsupportedConfiguration& e) {
    report_error("unsupported_configuration", e.what());
    return 2;
  } catch (const io::IoError& e) {
    report_error("io", e.what());
    return 1;
  } catch (const io::FormatError& e) {
    report_error("format", e.what());
    return 1;
  } catch (const ConfigurationError& e) {
    report_error("configuration", e.what());
    return 1;
  } catch (const std::exception& e) {
    report_error("invalid_input", e.what());
    return 1;
  }
}
