// Copyright 2026 The aerotact Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "aerotact/tactile.hpp"

namespace aerotact::tactile {
namespace {

GelPadModel quiet_pad() {
  GelPadModel pad;
  pad.marker_noise = 0.0;
  return pad;
}

Wrench ee_force(double fx, double fy, double fz) {
  return Wrench{Vec3(fx, fy, fz), Vec3::Zero(), Frame::kEndEffector};
}

MarkerField uniform_shift(const GelPadModel& pad, const Vec2& d) {
  MarkerField f = MarkerField::at_rest(pad);
  for (auto& v : f.displacement) v = d;
  return f;
}

TEST(Pad, GeometryAndTrackedMarkers) {
  const GelPadModel pad;
  EXPECT_EQ(pad.marker_count(), 80);
  const auto tracked = pad.tracked_indices();
  ASSERT_EQ(static_cast<int>(tracked.size()), kTrackedMarkers);
  EXPECT_TRUE(std::is_sorted(tracked.begin(), tracked.end()));
  const Vec2 mm(1.3, -2.1);
  EXPECT_TRUE(pad.to_mm(pad.to_pixel(mm)).isApprox(mm, 1e-12));
}

TEST(ForwardModel, ZeroForceNoNoiseIsAtRest) {
  const MarkerField f = marker_displacements(ee_force(0, 0, 0), quiet_pad(), Vec2::Zero(), 1u);
  for (const auto& d : f.displacement) EXPECT_EQ(d, Vec2::Zero());
}

TEST(ForwardModel, NormalForceIsRadiallySymmetric) {
  const GelPadModel pad = quiet_pad();
  const MarkerField f = marker_displacements(ee_force(0, 0, 4.0), pad, Vec2::Zero(), 1u);
  const auto pos = pad.marker_positions();
  int pairs = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = 0; j < pos.size(); ++j) {
      if ((pos[i] + pos[j]).norm() < 1e-9 && i != j) {
        EXPECT_TRUE((f.displacement[i] + f.displacement[j]).norm() < 1e-12);
        ++pairs;
      }
    }
  }
  EXPECT_GT(pairs, 0);
}

TEST(ForwardModel, PureShearTranslatesUniformly) {
  const MarkerField f = marker_displacements(ee_force(2.0, 0, 0), quiet_pad(), Vec2::Zero(), 1u);
  for (const auto& d : f.displacement) {
    EXPECT_NEAR(d.x(), 0.30, 1e-12);
    EXPECT_NEAR(d.y(), 0.0, 1e-12);
  }
}

TEST(ForwardModel, LinearInWrench) {
  const GelPadModel pad = quiet_pad();
  const Vec2 c(0.7, -0.4);
  const MarkerField a = marker_displacements(ee_force(0.4, -1.1, 3.0), pad, c, 1u);
  const MarkerField b = marker_displacements(ee_force(0.8, -2.2, 6.0), pad, c, 1u);
  for (std::size_t i = 0; i < a.displacement.size(); ++i)
    EXPECT_EQ(b.displacement[i], 2.0 * a.displacement[i]);
}

TEST(ForwardModel, RejectsTensileNormal) {
  EXPECT_THROW(marker_displacements(ee_force(0, 0, -1.0), quiet_pad(), Vec2::Zero(), 1u), Error);
}

TEST(Render, RestFieldPutsDotsAtReference) {
  const GelPadModel pad;
  const MarkerField rest = MarkerField::at_rest(pad);
  const TactileImage img = render_tactile_image(rest, std::nullopt, pad, 1u);
  const auto dots = detect_dots(img, pad);
  const auto pos = pad.marker_positions();
  ASSERT_GE(dots.size(), pos.size());
  for (const Vec2& p : pos) {
    const Vec2 px = pad.to_pixel(p);
    double best = 1e9;
    for (const auto& d : dots) best = std::min(best, (d.centroid - px).norm());
    EXPECT_LT(best, 0.05);
  }
}

TEST(Render, UniformShearShiftsCentroids) {
  const GelPadModel pad;
  const TactileImage img = render_tactile_image(uniform_shift(pad, Vec2(0.3, 0)), std::nullopt, pad, 1u);
  const auto dots = detect_dots(img, pad);
  const double shift = 0.3 * pad.px_per_mm;
  for (int idx : pad.tracked_indices()) {
    const Vec2 px = pad.to_pixel(pad.marker_positions()[idx]) + Vec2(shift, 0);
    double best = 1e9;
    for (const auto& d : dots) best = std::min(best, (d.centroid - px).norm());
    EXPECT_LT(best, 0.2);
  }
}

TEST(Render, FlatPaperMatchesFeaturelessContact) {
  const GelPadModel pad;
  const MarkerField f = MarkerField::at_rest(pad);
  HeightMap flat;
  flat.width = flat.height = 16;
  flat.heights.assign(256, 0.0);
  ContactPatch bare;
  bare.normal_force = 5.0;
  ContactPatch printed = bare;
  printed.relief = &flat;
  const TactileImage a = render_tactile_image(f, bare, pad, 9u);
  const TactileImage b = render_tactile_image(f, printed, pad, 9u);
  EXPECT_EQ(a.pixels, b.pixels);
}

TEST(Tracking, IdenticalImagesGiveZeroField) {
  const GelPadModel pad;
  const TactileImage img = render_tactile_image(MarkerField::at_rest(pad), std::nullopt, pad, 1u);
  const MarkerField f = track_markers(img, img, pad);
  for (int idx : pad.tracked_indices()) EXPECT_LT(f.displacement[idx].norm() * pad.px_per_mm, 0.05);
}

TEST(Tracking, RecoversUniformShear) {
  const GelPadModel pad;
  const TactileImage ref = render_tactile_image(MarkerField::at_rest(pad), std::nullopt, pad, 1u);
  const TactileImage cur = render_tactile_image(uniform_shift(pad, Vec2(0.3, 0)), std::nullopt, pad, 2u);
  const MarkerField f = track_markers(ref, cur, pad);
  for (int idx : pad.tracked_indices()) {
    EXPECT_LT((f.displacement[idx] - Vec2(0.3, 0)).norm() * pad.px_per_mm, 0.2);
  }
}

// A small twist about the pad centre: opposite corners move about 2.5 mm
// apart, more than any single translation can match within half a pitch.
TEST(Tracking, RecoversTwistWiderThanTheGate) {
  const GelPadModel pad;
  const std::vector<Vec2> nominal = pad.marker_positions();
  MarkerField twist = MarkerField::at_rest(pad);
  for (std::size_t m = 0; m < nominal.size(); ++m) {
    twist.displacement[m] = 0.13 * Vec2(-nominal[m].y(), nominal[m].x());
  }
  const TactileImage ref = render_tactile_image(MarkerField::at_rest(pad), std::nullopt, pad, 1u);
  const TactileImage cur = render_tactile_image(twist, std::nullopt, pad, 2u);
  const MarkerField f = track_markers(ref, cur, pad);
  for (int idx : pad.tracked_indices()) {
    EXPECT_LT((f.displacement[idx] - twist.displacement[idx]).norm() * pad.px_per_mm, 0.2) << idx;
  }
}

TEST(Tracking, BlankImageIsTrackingLoss) {
  const GelPadModel pad;
  const TactileImage ref = render_tactile_image(MarkerField::at_rest(pad), std::nullopt, pad, 1u);
  TactileImage blank = ref;
  std::fill(blank.pixels.begin(), blank.pixels.end(), 0.5f);
  try {
    track_markers(ref, blank, pad);
    FAIL() << "expected tracking-loss";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTrackingLoss);
  }
}

TEST(Feature, ZeroFieldIsZeroVector) {
  const GelPadModel pad;
  EXPECT_EQ(feature_vector(MarkerField::at_rest(pad), pad), TactileFeature::zero());
}

TEST(Feature, UniformShearInterleaves) {
  const GelPadModel pad;
  const TactileFeature f = feature_vector(uniform_shift(pad, Vec2(0.3, 0)), pad);
  for (int i = 0; i < kTrackedMarkers; ++i) {
    EXPECT_EQ(f.values[2 * i], 0.3);
    EXPECT_EQ(f.values[2 * i + 1], 0.0);
  }
  EXPECT_NEAR(f.mean_marker_displacement(), 0.3, 1e-12);
}

TEST(Feature, OneMarkerChangesTwoCoordinates) {
  const GelPadModel pad;
  MarkerField a = MarkerField::at_rest(pad);
  MarkerField b = a;
  b.displacement[pad.tracked_indices()[7]] = Vec2(0.1, -0.2);
  const TactileFeature fa = feature_vector(a, pad);
  const TactileFeature fb = feature_vector(b, pad);
  int diff = 0;
  for (int i = 0; i < kFeatureSize; ++i) diff += fa.values[i] != fb.values[i] ? 1 : 0;
  EXPECT_EQ(diff, 2);
  EXPECT_EQ(feature_vector(b, pad), fb);
}

TEST(Feature, ShortFieldIsDimensionMismatch) {
  const GelPadModel pad;
  MarkerField f = MarkerField::at_rest(pad);
  f.reference.resize(10);
  f.displacement.resize(10);
  f.valid.resize(10);
  try {
    feature_vector(f, pad);
    FAIL() << "expected dimension-mismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(Pgm, HeaderAndSize) {
  const GelPadModel pad;
  const TactileImage img = render_tactile_image(MarkerField::at_rest(pad), std::nullopt, pad, 1u);
  std::ostringstream out;
  write_pgm(img, out);
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("P5\n320 240\n255\n", 0), 0u);
  EXPECT_EQ(s.size(), std::string("P5\n320 240\n255\n").size() + 320u * 240u);
}

}  // namespace
}  // namespace aerotact::tactile
