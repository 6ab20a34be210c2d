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

// Synthetic vision-based tactile pad: marker forward model, image rendering,
// dot tracking and the 78-dimensional marker-motion feature.
//
// Pad frame: millimetres, origin at the pad centre, axes aligned with the
// end-effector x/y axes. Image pixel (u, v) samples the pad point
// ((u - W/2) / s, (v - H/2) / s) with s pixels per millimetre.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "aerotact/common.hpp"

namespace aerotact::tactile {

inline constexpr int kTrackedMarkers = 39;
inline constexpr int kFeatureSize = 2 * kTrackedMarkers;

struct GelPadModel {
  double pitch = 1.7;               // mm
  int rows = 8;
  int cols = 10;
  int image_width = 320;            // px
  int image_height = 240;           // px
  double px_per_mm = 15.0;
  double normal_compliance = 0.05;  // c_n, mm/N
  double shear_compliance = 0.15;   // c_t, mm/N
  double spread_radius = 8.0;       // rho, mm
  double marker_noise = 0.02;       // sigma_m, mm
  double dot_sigma = 1.5;           // px
  double dot_depth = 0.4;           // intensity
  double frame_rate = 30.0;         // Hz

  void validate() const;
  int marker_count() const { return rows * cols; }
  // Row-major reference positions, mm.
  std::vector<Vec2> marker_positions() const;
  // Indices of the 39 markers nearest the pad centre, ascending (row-major).
  std::vector<int> tracked_indices() const;
  Vec2 to_pixel(const Vec2& mm) const;
  Vec2 to_mm(const Vec2& px) const;
  // Grid bounding box half extents, mm.
  Vec2 half_extent() const;
};

struct MarkerField {
  std::vector<Vec2> reference;     // mm
  std::vector<Vec2> displacement;  // mm
  std::vector<bool> valid;         // per marker, true unless tracking lost it
  double stamp = 0.0;

  static MarkerField at_rest(const GelPadModel& pad, double stamp = 0.0);
  void check_consistent() const;
};

struct TactileImage {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;  // row-major, [0, 1]
  double stamp = 0.0;

  float at(int u, int v) const { return pixels[static_cast<std::size_t>(v) * width + u]; }
  float& at(int u, int v) { return pixels[static_cast<std::size_t>(v) * width + u]; }
};

struct TactileFeature {
  std::array<double, kFeatureSize> values{};

  static TactileFeature zero() { return TactileFeature{}; }
  double mean_marker_displacement() const;
  bool operator==(const TactileFeature& other) const { return values == other.values; }
};

// Relief sampled in wall coordinates (mm), periodic.
struct HeightMap {
  int width = 0;
  int height = 0;
  double mm_per_cell = 0.1;
  std::vector<double> heights;  // mm, row-major

  double sample(double x_mm, double y_mm) const;
  bool empty() const { return heights.empty(); }
  double max_abs() const;
};

// Geometry of an active contact used to shade the rendered image.
struct ContactPatch {
  Vec2 center = Vec2::Zero();          // mm, pad frame
  double radius = 4.0;                 // mm
  double normal_force = 0.0;           // N
  Vec2 texture_offset = Vec2::Zero();  // mm, wall coordinates under the pad centre
  const HeightMap* relief = nullptr;   // nullptr: featureless surface
};

struct RenderOptions {
  double contact_shading = 0.06;  // intensity gain of the flat contact patch
  double relief_gain = 0.12;      // intensity per unit normalized height
  double relief_scale = 0.05;     // mm of relief mapped to unit intensity swing
  double pixel_noise = 0.004;     // intensity std inside the contact patch
};

// Contact patch radius for a given normal force (dome-shaped gel).
double contact_radius(double normal_force);

// Forward gel model: radial exponential spread from the normal force, uniform
// translation from shear, Gaussian marker noise. `contact` must be expressed
// in the end-effector frame with a non-negative normal (z) force.
MarkerField marker_displacements(const Wrench& contact, const GelPadModel& pad,
                                 const Vec2& contact_center, std::mt19937_64& rng);
MarkerField marker_displacements(const Wrench& contact, const GelPadModel& pad,
                                 const Vec2& contact_center, std::uint64_t seed);

TactileImage render_tactile_image(const MarkerField& field, const std::optional<ContactPatch>& patch,
                                  const GelPadModel& pad, std::uint64_t noise_seed,
                                  const RenderOptions& options = {});

struct DotDetection {
  Vec2 centroid;  // px
  double depth;   // intensity below the local background
};

std::vector<DotDetection> detect_dots(const TactileImage& image, const GelPadModel& pad);

// Matches dots of `current` against `reference` and reports displacements.
// `previous` supplies the fallback for markers that could not be matched.
// Throws kTrackingLoss when more than 25% of the tracked markers are lost.
MarkerField track_markers(const TactileImage& reference, const TactileImage& current,
                          const GelPadModel& pad, const MarkerField* previous = nullptr);

// Throws kDimensionMismatch when the field does not cover the pad markers.
TactileFeature feature_vector(const MarkerField& field, const GelPadModel& pad);

// Portable graymap (binary P5) dump for debugging.
void write_pgm(const TactileImage& image, std::ostream& out);

}  // namespace aerotact::tactile
