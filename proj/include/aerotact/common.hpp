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

// Shared value types, small SO(3) helpers and the error type used by every
// module of the core library.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace aerotact {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline constexpr double kGravity = 9.81;
inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode : int {
  kInvalidArgument = 1,
  kDegenerateGeometry,
  kDivergence,
  kTrackingLoss,
  kDimensionMismatch,
  kSensorFault,
  kEmptyTrainingSet,
  kUntrainedModel,
  kFrameMismatch,
  kNoContactWindow,
  kLengthMismatch,
  kConfig,
  kIo,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Frame a wrench is expressed in: inertial, body, end-effector or wall.
enum class Frame : std::uint8_t { kInertial, kBody, kEndEffector, kWall };

const char* frame_name(Frame frame);

struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
  Frame frame = Frame::kBody;

  static Wrench zero(Frame frame) { return Wrench{Vec3::Zero(), Vec3::Zero(), frame}; }
  static Wrench from_vector(const Vec6& v, Frame frame) {
    return Wrench{v.head<3>(), v.tail<3>(), frame};
  }
  Vec6 vector() const {
    Vec6 v;
    v << force, torque;
    return v;
  }
};

// Throws kFrameMismatch when `w` is not expressed in `expected`.
void require_frame(const Wrench& w, Frame expected, const char* what);

inline Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

inline Vec3 vee(const Mat3& s) { return Vec3(s(2, 1), s(0, 2), s(1, 0)); }

// Rodrigues exponential map so(3) -> SO(3).
Mat3 exp_so3(const Vec3& phi);

// Inverse right Jacobian of SO(3): maps body angular velocity to the rate of
// a rotation vector `phi` with R = R0 * exp(phi).
Vec3 dexp_inv(const Vec3& phi, const Vec3& omega);

// Nearest rotation matrix (via quaternion normalization).
Mat3 orthonormalize(const Mat3& r);

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

// Deterministic 64-bit seed derivation (splitmix64 finalizer over seed and
// stream id). Used to give each noise source its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace aerotact
