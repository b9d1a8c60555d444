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

#include "omnipano/io/formats.hpp"

#include <filesystem>

#include <gtest/gtest.h>

#include "omnipano/io/atomic_file.hpp"
#include "omnipano/io/image_io.hpp"

namespace omnipano::io {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("omnipano_formats_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST(FormatNumberTest, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  const double x = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(CameraConfigTest, ParseAndFrame) {
  const CameraConfig c = parse_camera_config(
      json::parse(R"({"width": 1280, "height": 1024, "circle_radius_px": 500, "camera_height_m": 3})"));
  EXPECT_EQ(c.width, 1280);
  EXPECT_EQ(*c.circle_radius_px, 500);
  EXPECT_EQ(*c.camera_height_m, 3);
  EXPECT_FALSE(c.principal_point);
  const CameraFrame f = make_camera_frame(c);
  EXPECT_EQ(f.camera.image_circle_radius_px(), 500);
  const PixelCoord raw{640, 512};
  const PixelCoord w = f.to_working(raw);
  EXPECT_EQ(f.to_raw(w).u, raw.u);
  EXPECT_EQ(f.to_raw(w).v, raw.v);
}

TEST(CameraConfigTest, PrincipalPointFollowsFraming) {
  const CameraConfig c =
      parse_camera_config(json::parse(R"({"width": 1200, "height": 1000, "principal_point": [610, 495]})"));
  const CameraFrame f = make_camera_frame(c);
  const PixelCoord pp = f.camera.principal_point();
  EXPECT_EQ(f.to_raw(pp).u, 610);
  EXPECT_EQ(f.to_raw(pp).v, 495);
}

TEST(CameraConfigTest, Errors) {
  EXPECT_THROW(parse_camera_config(json::parse(R"({"width": 10})")), FormatError);
  EXPECT_THROW(parse_camera_config(json::parse(R"({"width": "a", "height": 3})")), FormatError);
}

TEST(DatasetTest, ParseObjectForm) {
  const Dataset ds = parse_dataset(json::parse(R"({
    "images": [{"id": 7, "file": "a.png", "width": 1024, "height": 1024, "camera_height_m": 3.1, "split": "seen"}],
    "annotations": [
      {"image_id": 7, "id": 1, "rbox": [600, 500, 20, 40, 90]},
      {"image_id": 7, "pano_box": [3000, 10, 20, 50], "wrapped": true, "score": 0.7, "position": [1, 2]}
    ]})"));
  ASSERT_EQ(ds.images.size(), 1u);
  EXPECT_EQ(ds.find_image(7)->split, "seen");
  EXPECT_EQ(ds.find_image(8), nullptr);
  ASSERT_EQ(ds.annotations.size(), 2u);
  EXPECT_NEAR(ds.annotations[0].rbox->angle, kHalfPi, 1e-15);
  EXPECT_TRUE(ds.annotations[1].pano_box->wrapped);
  EXPECT_EQ(*ds.annotations[1].score, 0.7);
  EXPECT_NEAR(ds.annotations[1].position->distance_m, std::sqrt(5.0), 1e-15);
}

TEST(DatasetTest, BareArrayAndRoundTrip) {
  const Dataset ds = parse_dataset(json::parse(R"([{"image_id": 1, "pano_box": [1, 2, 3, 4], "score": 0.5}])"));
  ASSERT_EQ(ds.annotations.size(), 1u);
  const Dataset again = parse_dataset(to_json(ds));
  EXPECT_EQ(*again.annotations[0].pano_box, *ds.annotations[0].pano_box);
  EXPECT_EQ(again.annotations[0].score, ds.annotations[0].score);

  Annotation a;
  a.image_id = 3;
  a.rbox = RotatedRect{1, 2, 3, 4, 0.25};
  a.quad = std::vector<PixelCoord>{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const Annotation b = parse_annotation(to_json(a));
  EXPECT_NEAR(b.rbox->angle, 0.25, 1e-15);
}

TEST(DatasetTest, Errors) {
  EXPECT_THROW(parse_dataset(json::parse(R"([{"image_id": 1}])")), FormatError);
  EXPECT_THROW(parse_dataset(json::parse(R"([{"image_id": 1, "rbox": [1, 2, 3]}])")), FormatError);
  EXPECT_THROW(parse_dataset(json::parse(R"({"images": []})")), FormatError);
  EXPECT_THROW(parse_dataset(json::parse(R"([{"pano_box": [1, 2, 3, 4]}])")), FormatError);
}

TEST(CsvGridTest, ParseAndFormat) {
  const Grid g = parse_csv_grid("1, 2,3\r\n4,5.5,6\n\n");
  EXPECT_EQ(g.rows, 2);
  EXPECT_EQ(g.cols, 3);
  EXPECT_EQ(g.values[4], 5.5);
  EXPECT_EQ(format_csv_grid(g), "1,2,3\n4,5.5,6\n");
  EXPECT_THROW(parse_csv_grid("1,2\n3\n"), FormatError);
  EXPECT_THROW(parse_csv_grid("1,x\n"), FormatError);
  EXPECT_THROW(parse_csv_grid(""), FormatError);
}

TEST_F(TempDir, ImageRoundTrips) {
  Image8 gray(5, 3, 1), rgb(4, 2, 3);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x) gray.at(x, y) = static_cast<std::uint8_t>(17 * x + 50 * y);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 4; ++x)
      for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = static_cast<std::uint8_t>(30 * x + 7 * y + 80 * c);
  for (const char* name : {"g.png", "g.pgm"}) {
    write_image(dir_ / name, gray);
    EXPECT_EQ(read_image(dir_ / name), gray) << name;
  }
  for (const char* name : {"c.png", "c.ppm"}) {
    write_image(dir_ / name, rgb);
    EXPECT_EQ(read_image(dir_ / name), rgb) << name;
  }
  EXPECT_THROW(read_image(dir_ / "missing.png"), IoError);
  // Unknown extensions fall back to PNG.
  write_image(dir_ / "x.img", gray);
  EXPECT_EQ(read_image(dir_ / "x.img"), gray);
  EXPECT_THROW(write_image(dir_ / "nodir" / "x.png", gray), IoError);
}

TEST_F(TempDir, AtomicWriteLeavesNoTemporaries) {
  write_text_atomically(dir_ / "a.txt", "hello");
  EXPECT_EQ(read_text(dir_ / "a.txt"), "hello");
  EXPECT_THROW(write_atomically(dir_ / "b.txt", [](const fs::path&) { throw IoError("boom"); }), IoError);
  EXPECT_FALSE(fs::exists(dir_ / "b.txt"));
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir_)) files += e.is_regular_file();
  EXPECT_EQ(files, 1);
}

}  // namespace
}  // namespace omnipano::io
