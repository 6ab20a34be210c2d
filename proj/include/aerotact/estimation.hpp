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

// Contact-force estimation: synthetic kNN training data, kNN regression on
// marker-motion features, and a Kalman filter fusing tactile and F/T forces.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "aerotact/common.hpp"
#include "aerotact/tactile.hpp"

namespace aerotact::estimation {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Per-axis force sampling ranges in the end-effector frame; z is the normal.
struct ForceRanges {
  Interval shear_x{-3.0, 3.0};
  Interval shear_y{-3.0, 3.0};
  Interval normal{0.0, 10.0};

  void validate() const;
};

struct TrainingSet {
  std::vector<tactile::TactileFeature> features;
  std::vector<Vec3> forces;  // N, end-effector frame

  // Provenance.
  std::uint64_t seed = 0;
  double marker_noise = 0.0;
  ForceRanges ranges;

  std::size_t size() const { return features.size(); }
  void validate() const;
};

TrainingSet generate_dataset(const tactile::GelPadModel& pad, const ForceRanges& ranges,
                             std::size_t n, std::uint64_t seed);

// CSV with a '#' header carrying the provenance; values printed round-trip exact.
void write_training_set(const TrainingSet& set, std::ostream& out);
TrainingSet read_training_set(std::istream& in);

struct KnnConfig {
  int k = 50;
  bool distance_weighted = false;
};

// Exact K-nearest-neighbour force regression. Neighbours are ordered by
// (squared distance, sample index); the estimate sums their forces in that
// order.
class KnnRegressor {
 public:
  KnnRegressor(const TrainingSet& set, const KnnConfig& config);
  Vec3 estimate(const tactile::TactileFeature& query) const;

 private:
  std::vector<double> features_;  // row-major N x 78
  std::vector<Vec3> forces_;
  KnnConfig config_;
};

Vec3 knn_estimate(const tactile::TactileFeature& feature, const TrainingSet& set,
                  const KnnConfig& config);

struct FusionState {
  Vec3 force = Vec3::Zero();           // F_c, end-effector frame
  Mat3 covariance = Mat3::Identity();  // N^2
  double stamp = 0.0;
};

struct NoiseConfig {
  Mat3 process = 0.25 * Mat3::Identity();        // Q, N^2/s
  Mat3 force_torque = 0.01 * Mat3::Identity();   // R_ft, N^2
  Mat3 tactile = 0.81 * Mat3::Identity();        // R_tac, N^2

  void validate() const;
};

enum class Sensor { kForceTorque, kTactile };

FusionState kf_predict(const FusionState& state, const NoiseConfig& noise, double dt);

// Joseph-form update with H = I. Throws kSensorFault on a non-finite z.
FusionState kf_update(const FusionState& state, const Vec3& z, Sensor which,
                      const NoiseConfig& noise);

// Hysteresis on the mean marker displacement (mm).
class ContactDetector {
 public:
  ContactDetector(double threshold_on, double threshold_off);
  bool update(const tactile::TactileFeature& feature);
  bool active() const { return active_; }
  void reset() { active_ = false; }

 private:
  double on_;
  double off_;
  bool active_ = false;
};

bool detect_contact(const tactile::TactileFeature& feature, double threshold_on,
                    double threshold_off, bool previous = false);

}  // namespace aerotact::estimation
