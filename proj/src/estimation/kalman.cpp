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

#include <Eigen/Cholesky>

#include "aerotact/estimation.hpp"

namespace aerotact::estimation {

namespace {

void require_spd(const Mat3& m, const char* name) {
  if (!m.allFinite() || (m - m.transpose()).norm() > 1e-12 * (1.0 + m.norm()) ||
      m.llt().info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be symmetric positive definite");
  }
}

}  // namespace

void NoiseConfig::validate() const {
  require_spd(process, "process noise Q");
  require_spd(force_torque, "F/T noise R_ft");
  require_spd(tactile, "tactile noise R_tac");
}

FusionState kf_predict(const FusionState& state, const NoiseConfig& noise, double dt) {
  if (!(dt >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "kf_predict: dt must be >= 0");
  FusionState next = state;
  // Constant-force process: only the covariance evolves.
  next.covariance = state.covariance + noise.process * dt;
  next.stamp = state.stamp + dt;
  return next;
}

FusionState kf_update(const FusionState& state, const Vec3& z, Sensor which,
                      const NoiseConfig& noise) {
  if (!z.allFinite()) {
    throw Error(ErrorCode::kSensorFault, which == Sensor::kForceTorque
                                             ? "kf_update: non-finite F/T measurement"
                                             : "kf_update: non-finite tactile measurement");
  }
  const Mat3& r = which == Sensor::kForceTorque ? noise.force_torque : noise.tactile;
  const Mat3& p = state.covariance;
  const Mat3 s = p + r;
  const Mat3 gain = s.llt().solve(p).transpose();  // P S^-1, S and P symmetric
  const Mat3 a = Mat3::Identity() - gain;

  FusionState next = state;
  next.force = state.force + gain * (z - state.force);
  const Mat3 joseph = a * p * a.transpose() + gain * r * gain.transpose();
  next.covariance = 0.5 * (joseph + joseph.transpose());
  return next;
}

ContactDetector::ContactDetector(double threshold_on, double threshold_off)
    : on_(threshold_on), off_(threshold_off) {
  if (!(threshold_on > threshold_off && threshold_off > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "contact detection needs threshold_on > threshold_off > 0");
  }
}

bool ContactDetector::update(const tactile::TactileFeature& feature) {
  active_ = detect_contact(feature, on_, off_, active_);
  return active_;
}

bool detect_contact(const tactile::TactileFeature& feature, double threshold_on,
                    double threshold_off, bool previous) {
  const double mean = feature.mean_marker_displacement();
  if (mean > threshold_on) return true;
  if (mean < threshold_off) return false;
  return previous;
}

}  // namespace aerotact::estimation
