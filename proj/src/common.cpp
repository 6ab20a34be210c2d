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

#include "aerotact/common.hpp"

#include <cmath>

namespace aerotact {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDegenerateGeometry: return "degenerate-geometry";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kTrackingLoss: return "tracking-loss";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kSensorFault: return "sensor-fault";
    case ErrorCode::kEmptyTrainingSet: return "empty-training-set";
    case ErrorCode::kUntrainedModel: return "untrained-model";
    case ErrorCode::kFrameMismatch: return "frame-mismatch";
    case ErrorCode::kNoContactWindow: return "no-contact-window";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

const char* frame_name(Frame frame) {
  switch (frame) {
    case Frame::kInertial: return "I";
    case Frame::kBody: return "B";
    case Frame::kEndEffector: return "E";
    case Frame::kWall: return "W";
  }
  return "?";
}

void require_frame(const Wrench& w, Frame expected, const char* what) {
  if (w.frame != expected) {
    throw Error(ErrorCode::kFrameMismatch,
                std::string(what) + ": expected frame " + frame_name(expected) +
                    ", got " + frame_name(w.frame));
  }
}

Mat3 exp_so3(const Vec3& phi) {
  const double theta = phi.norm();
  const Mat3 k = skew(phi);
  if (theta < 1e-8) {
    return Mat3::Identity() + k + 0.5 * k * k;
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Mat3::Identity() + a * k + b * k * k;
}

Vec3 dexp_inv(const Vec3& phi, const Vec3& omega) {
  const double theta = phi.norm();
  double c;
  if (theta < 1e-4) {
    // Series of (1 - (t/2) cot(t/2)) / t^2.
    c = 1.0 / 12.0 + theta * theta / 720.0;
  } else {
    const double half = 0.5 * theta;
    c = (1.0 - half * std::cos(half) / std::sin(half)) / (theta * theta);
  }
  const Vec3 cross = phi.cross(omega);
  return omega + 0.5 * cross + c * phi.cross(cross);
}

Mat3 orthonormalize(const Mat3& r) {
  Eigen::Quaterniond q(r);
  q.normalize();
  return q.toRotationMatrix();
}

Mat3 rot_x(double angle) { return Eigen::AngleAxisd(angle, Vec3::UnitX()).toRotationMatrix(); }
Mat3 rot_y(double angle) { return Eigen::AngleAxisd(angle, Vec3::UnitY()).toRotationMatrix(); }
Mat3 rot_z(double angle) { return Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix(); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace aerotact
