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

#include "omnipano/geometry_analysis.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

namespace omnipano {
namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

/// lambda * (atan(c/d) - atan((c-s)/d)) at 50 digits.
double BigExactHeight(double c, double s, double d, double lambda) {
  const Big bc(c), bs(s), bd(d);
  return static_cast<double>(Big(lambda) * (atan(bc / bd) - atan((bc - bs) / bd)));
}

const double kLambda768 = 768.0 / kHalfPi;

TEST(BoxAnglesTest, DirectTrig) {
  const BoxAngles a = box_angles(SceneConfig(3.0, 1.7, 20.0));
  EXPECT_DOUBLE_EQ(a.foot, std::atan(0.15));
  EXPECT_DOUBLE_EQ(a.head, std::atan(0.065));
  EXPECT_NEAR(a.foot, static_cast<double>(atan(Big(3) / Big(20))), 1e-16);
}

TEST(BoxAnglesTest, FarAwayBothVanish) {
  const BoxAngles a = box_angles(SceneConfig(3.0, 1.7, 1e9));
  EXPECT_LT(a.foot, 1e-8);
  EXPECT_LT(a.head, 1e-8);
}

TEST(BoxAnglesTest, ZeroHeightPersonIsDegenerate) {
  const BoxAngles a = box_angles(SceneConfig(3.0, 0.0, 5.0));
  EXPECT_EQ(a.head, a.foot);
  EXPECT_EQ(exact_box_height(SceneConfig(3.0, 0.0, 5.0), kLambda768), 0.0);
  EXPECT_EQ(linearized_box_height(SceneConfig(3.0, 0.0, 5.0), kLambda768), 0.0);
}

TEST(BoxAnglesTest, TangentRelationProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(0.5, 10.0), frac(0.0, 0.99), d(0.1, 500.0);
  for (int i = 0; i < 10000; ++i) {
    const double cc = c(rng), s = frac(rng) * cc;
    const BoxAngles a = box_angles(SceneConfig(cc, s, d(rng)));
    ASSERT_NEAR(std::tan(a.foot) * (cc - s), cc * std::tan(a.head), 1e-12 * cc);
  }
}

TEST(SceneConfigTest, RejectsInvalidScenes) {
  EXPECT_THROW(SceneConfig(3.0, 3.0, 5.0), std::invalid_argument);
  EXPECT_THROW(SceneConfig(3.0, 4.0, 5.0), std::invalid_argument);
  EXPECT_THROW(SceneConfig(0.0, 0.0, 5.0), std::invalid_argument);
  EXPECT_THROW(SceneConfig(3.0, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(SceneConfig(3.0, -1.0, 1.0), std::invalid_argument);
}

TEST(ExactHeightTest, MatchesArbitraryPrecision) {
  EXPECT_NEAR(exact_box_height(SceneConfig(3.0, 1.7, 20.0), kLambda768), BigExactHeight(3.0, 1.7, 20.0, kLambda768),
              1e-12);
  EXPECT_THROW(exact_box_height(SceneConfig(3.0, 1.7, 20.0), 0.0), std::invalid_argument);
}

TEST(ExactHeightTest, LinearInLambda) {
  const SceneConfig s(3.0, 1.7, 12.0);
  EXPECT_DOUBLE_EQ(exact_box_height(s, 2 * kLambda768), 2 * exact_box_height(s, kLambda768));
}

TEST(LinearizedHeightTest, CloseWhenFar) {
  const SceneConfig far(3.0, 1.7, 100.0);
  const double exact = BigExactHeight(3.0, 1.7, 100.0, kLambda768);
  EXPECT_LT(std::abs(linearized_box_height(far, kLambda768) - exact) / exact, 1e-3);
}

TEST(LinearizedHeightTest, DeviatesWhenNear) {
  // Small-angle assumption broken; just document the size of the deviation.
  const SceneConfig near(3.0, 1.7, 5.0);
  const double rel = std::abs(linearized_box_height(near, kLambda768) - exact_box_height(near, kLambda768)) /
                     exact_box_height(near, kLambda768);
  EXPECT_GT(rel, 0.02);
}

TEST(LinearizedHeightTest, ErrorShrinksWithDistance) {
  double prev = std::numeric_limits<double>::infinity();
  for (double d = 2.0; d <= 400.0; d *= 1.25) {
    const double exact = BigExactHeight(3.0, 1.7, d, kLambda768);
    const double rel = std::abs(linearized_box_height(SceneConfig(3.0, 1.7, d), kLambda768) - exact) / exact;
    ASSERT_LT(rel, prev) << "d=" << d;
    prev = rel;
  }
}

TEST(BoxHeightTest, BundlesBothModels) {
  const SceneConfig s(4.0, 1.8, 30.0);
  const BoxHeightResult r = box_height(s, kLambda768);
  EXPECT_GT(r.foot_angle, r.head_angle);
  EXPECT_EQ(r.exact_height, exact_box_height(s, kLambda768));
  EXPECT_EQ(r.linearized_height, linearized_box_height(s, kLambda768));
}

TEST(GroundIntervalTest, SmallIntervalApproachesDerivative) {
  const double dtheta = 1e-6;
  EXPECT_NEAR(ground_interval_width(3.0, kPi / 4, dtheta) / dtheta, 2.0 * 3.0, 1e-6);
}

TEST(GroundIntervalTest, DirectEvaluation) {
  EXPECT_DOUBLE_EQ(ground_interval_width(3.0, deg_to_rad(80.0), deg_to_rad(1.0)),
                   3.0 * (std::tan(deg_to_rad(80.0) + deg_to_rad(0.5)) - std::tan(deg_to_rad(80.0) - deg_to_rad(0.5))));
  EXPECT_EQ(ground_interval_width(3.0, 0.5, 0.0), 0.0);
}

TEST(GroundIntervalTest, RangeChecks) {
  EXPECT_THROW(ground_interval_width(3.0, deg_to_rad(89.8), deg_to_rad(1.0)), std::invalid_argument);
  EXPECT_THROW(ground_interval_width(3.0, deg_to_rad(0.2), deg_to_rad(1.0)), std::invalid_argument);
  EXPECT_THROW(ground_interval_width(0.0, 0.5, 0.01), std::invalid_argument);
}

TEST(GroundIntervalTest, IncreasingInTheta) {
  double prev = 0.0;
  for (double deg = 0.6; deg <= 89.4; deg += 0.05) {
    const double w = ground_interval_width(3.0, deg_to_rad(deg), deg_to_rad(1.0));
    ASSERT_GT(w, prev);
    prev = w;
  }
}

TEST(DistributionTest, EmptyInput) {
  const DistributionStats s = annotation_distribution({}, EquirectSpec(3072, 768));
  EXPECT_EQ(s.total(), 0);
  for (int k = 0; k < DistributionStats::kBins; ++k) EXPECT_EQ(s.bin(k).count, 0);
}

TEST(DistributionTest, BinsByCenterRow) {
  const EquirectSpec spec(3072, 768);
  // theta = 85.5 deg -> center row 768 * (1 - 85.5/90) = 38.4
  const PanoBox box{100.0, 30.4, 110.0, 46.4, false};
  const DistributionStats s = annotation_distribution(std::vector<PanoBox>{box}, spec);
  EXPECT_EQ(s.bin(85).count, 1);
  EXPECT_EQ(s.total(), 1);
  EXPECT_DOUBLE_EQ(s.bin(85).mean_h, 16.0);
  EXPECT_TRUE(std::isnan(s.bin(85).std_h));
}

TEST(DistributionTest, IdenticalBoxesHaveZeroSpread) {
  const EquirectSpec spec(3072, 768);
  const std::vector<PanoBox> boxes(2, PanoBox{100.0, 30.0, 112.0, 46.0, false});
  const DistributionStats s = annotation_distribution(boxes, spec);
  const auto b = s.bin(DistributionStats::bin_of(90.0 * (1.0 - 38.0 / 768)));
  EXPECT_EQ(b.count, 2);
  EXPECT_EQ(b.std_h, 0.0);
  EXPECT_EQ(b.std_w, 0.0);
  EXPECT_EQ(b.mean_w, 12.0);
}

TEST(DistributionTest, WrappedWidthAndBottomBin) {
  const EquirectSpec spec(400, 100);
  const std::vector<PanoBox> boxes{PanoBox{395.0, 90.0, 5.0, 100.0, true}, PanoBox{0.0, 99.0, 1.0, 100.0, false}};
  const DistributionStats s = annotation_distribution(boxes, spec);
  EXPECT_EQ(s.bin(4).count, 1);
  EXPECT_EQ(s.bin(4).mean_w, 10.0);
  EXPECT_EQ(s.bin(0).count, 1);
}

TEST(DistributionTest, MergeMatchesSinglePass) {
  const EquirectSpec spec(3072, 768);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> v(0.0, 700.0), h(1.0, 60.0), w(1.0, 30.0);
  std::vector<PanoBox> boxes;
  for (int i = 0; i < 3000; ++i) {
    const double v0 = v(rng);
    boxes.push_back({100.0, v0, 100.0 + w(rng), std::min(768.0, v0 + h(rng)), false});
  }
  const auto all = annotation_distribution(boxes, spec);
  auto a = annotation_distribution(std::span<const PanoBox>(boxes).first(1234), spec);
  a.merge(annotation_distribution(std::span<const PanoBox>(boxes).subspan(1234), spec));
  for (int k = 0; k < DistributionStats::kBins; ++k) {
    const auto x = all.bin(k), y = a.bin(k);
    ASSERT_EQ(x.count, y.count);
    if (x.count == 0) continue;
    ASSERT_NEAR(x.mean_h, y.mean_h, 1e-9);
    if (x.count >= 2) ASSERT_NEAR(x.std_w, y.std_w, 1e-9);
  }
}

TEST(DistributionTest, SyntheticPopulationFollowsExactHeight) {
  // People at uniformly spaced distances, rendered with the exact model;
  // every bin's mean height must agree with the model evaluated at the bin
  // center angle.
  const EquirectSpec spec(3072, 768);
  const double c = 3.0, s = 1.7;
  std::vector<PanoBox> boxes;
  for (double d = 2.0; d <= 120.0; d += 0.01) {
    boxes.push_back(render_person_box(SceneConfig(c, s, d), 1.0, 10.0, spec));
  }
  const DistributionStats stats = annotation_distribution(boxes, spec);
  int checked = 0;
  for (int k = 60; k < 89; ++k) {
    const auto b = stats.bin(k);
    if (b.count < 5) continue;
    // Distance whose box center sits at the bin's center angle.
    const double center_depression = deg_to_rad(90.0 - (k + 0.5));
    double lo = 0.5, hi = 1000.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const BoxAngles a = box_angles(SceneConfig(c, s, mid));
      (0.5 * (a.head + a.foot) > center_depression ? lo : hi) = mid;
    }
    const double model = exact_box_height(SceneConfig(c, s, lo), spec.pixels_per_radian());
    EXPECT_NEAR(b.mean_h, model, 1.0) << "bin " << k;
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(DistributionTest, UniformGroundDensityConcentratesNearHorizon) {
  const EquirectSpec spec(3072, 768);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> area(0.0, 1.0), az(0.0, kTwoPi);
  const double radius = 60.0;
  std::vector<PanoBox> boxes;
  for (int i = 0; i < 20000; ++i) {
    const double d = std::max(0.5, radius * std::sqrt(area(rng)));
    boxes.push_back(render_person_box(SceneConfig(3.0, 1.7, d), az(rng), 8.0, spec));
  }
  const DistributionStats stats = annotation_distribution(boxes, spec);
  long high = 0;
  for (int k = 80; k < 90; ++k) high += stats.bin(k).count;
  EXPECT_GT(high, stats.total() - high);
  // Counts per degree grow with theta where the ground interval grows.
  EXPECT_GT(stats.bin(85).count, stats.bin(75).count);
  EXPECT_GT(stats.bin(75).count, stats.bin(60).count);
}

TEST(DistributionTest, CsvLayout) {
  const EquirectSpec spec(3072, 768);
  const std::vector<PanoBox> boxes(3, PanoBox{0.0, 30.0, 12.0, 46.0, false});
  std::ostringstream os;
  annotation_distribution(boxes, spec).write_csv(os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "theta_deg,count,mean_h,std_h,mean_w,std_w");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("85,", 0) == 0) EXPECT_EQ(line, "85,3,16,0,12,0");
    if (line.rfind("0,", 0) == 0) EXPECT_EQ(line, "0,0,nan,nan,nan,nan");
    ++rows;
  }
  EXPECT_EQ(rows, 90);
}

}  // namespace
}  // namespace omnipano
