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

#include "aerotact/control.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

namespace aerotact::control {

namespace {

void check(bool ok, const char* message) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, message);
}

bool positive_definite(const Mat3& m) {
  const Mat3 sym = 0.5 * (m + m.transpose());
  return m.allFinite() && sym.llt().info() == Eigen::Success;
}

bool is_rotation(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).norm() < 1e-9 && r.determinant() > 0.0;
}

}  // namespace

void MotionGains::validate() const {
  check((position.array() > 0.0).all(), "K_p entries must be positive");
  check((velocity.array() > 0.0).all(), "K_v entries must be positive");
  check(attitude > 0.0 && rate > 0.0, "attitude gains must be positive");
}

MotionSetpoint MotionSetpoint::hold(const Vec3& position, double yaw) {
  MotionSetpoint sp;
  sp.position = position;
  sp.attitude = rot_z(yaw);
  return sp;
}

Wrench motion_wrench(const sim::SimState& state, const MotionSetpoint& setpoint,
                     const MotionGains& gains, const sim::VehicleParams& params,
                     GravityFeedforward gravity) {
  const Mat3& r = state.attitude;
  const Vec3 e_p = state.position - setpoint.position;
  const Vec3 e_v = r * state.velocity - setpoint.velocity;
  Vec3 force = -gains.position.cwiseProduct(e_p) - gains.velocity.cwiseProduct(e_v) +
               params.mass * setpoint.acceleration;
  if (gravity == GravityFeedforward::kInclude) force += params.mass * Vec3(0.0, 0.0, kGravity);

  // Fully actuated: the desired attitude is tracked directly.
  const Mat3& rd = setpoint.attitude;
  const Vec3 e_r = 0.5 * vee(rd.transpose() * r - r.transpose() * rd);
  const Vec3 e_w = state.angular_velocity - r.transpose() * rd * setpoint.angular_velocity;
  const Vec3 torque = -gains.attitude * e_r - gains.rate * e_w;
  return Wrench{r.transpose() * force, torque, Frame::kBody};
}

void ForceGains::validate() const {
  check(positive_definite(proportional), "K_fp must be positive definite");
  check(positive_definite(integral), "K_fi must be positive definite");
  check(std::abs(actual_mass.determinant()) > 1e-12, "M_0 must be invertible");
  check(std::abs(desired_mass.determinant()) > 1e-12, "M_d must be invertible");
  check(stiffness.allFinite() && damping.allFinite(), "impedance gains must be finite");
  check(integral_clamp >= 0.0, "integral clamp must be non-negative");
}

void HybridConfig::validate() const {
  check(lambda == 0 || lambda == 1, "lambda must be 0 or 1");
  check(is_rotation(tool_rotation), "R^B_E must be a rotation");
  check(is_rotation(wall_rotation), "R^B_W must be a rotation");
  check(reference_force.z() >= 0.0, "reference normal force must be >= 0");
}

ForceCommand force_wrench(const Vec3& measured_force, const HybridConfig& config,
                          const ForceGains& gains, const sim::SimState& state,
                          ForceIntegrator& integrator, double dt) {
  const Mat3 r_iw = state.attitude * config.wall_rotation;
  ForceCommand out;
  out.position_error = r_iw.transpose() * (state.position - config.operating_position);
  const Vec3 rate_error = r_iw.transpose() * (state.attitude * state.velocity);
  out.error = measured_force - config.reference_force;

  integrator.value += out.error * dt;
  integrator.windup = false;
  for (int i = 0; i < 3; ++i) {
    const double gain = gains.integral(i, i);
    const double limit = gain > 0.0 ? gains.integral_clamp / gain : 0.0;
    if (std::abs(integrator.value(i)) > limit) {
      integrator.value(i) = std::clamp(integrator.value(i), -limit, limit);
      integrator.windup = true;
    }
  }

  out.force = config.reference_force - gains.normalized_stiffness() * out.position_error -
              gains.normalized_damping() * rate_error - gains.proportional * out.error -
              gains.integral * integrator.value;
  out.wrench = Wrench{config.wall_rotation * out.force, Vec3::Zero(), Frame::kBody};
  return out;
}

Mat6 selection_matrix(const HybridConfig& config) {
  Mat6 sel = Mat6::Zero();
  const Vec3 axis = config.tool_rotation.col(2);
  sel.topLeftCorner<3, 3>() = static_cast<double>(config.lambda) * axis * axis.transpose();
  return sel;
}

Wrench hybrid_combine(const Wrench& motion, const Wrench& force, const Mat6& selection) {
  require_frame(motion, Frame::kBody, "hybrid_combine (motion)");
  require_frame(force, Frame::kBody, "hybrid_combine (force)");
  const Vec6 tau = (Mat6::Identity() - selection) * motion.vector() + selection * force.vector();
  return Wrench::from_vector(tau, Frame::kBody);
}

Wrench feedback_linearize(const Wrench& tau, const sim::SimState& state,
                          const sim::VehicleParams& params) {
  require_frame(tau, Frame::kBody, "feedback_linearize");
  const sim::InertiaTerms terms = sim::coriolis_and_inertia(params, state.angular_velocity);
  const Vec6 compensated = terms.coriolis * state.twist() -
                           sim::gravity_wrench(params, state.attitude).vector() + tau.vector();
  return Wrench::from_vector(compensated, Frame::kBody);
}

}  // namespace aerotact::control
