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

#include "aerotact/sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace aerotact::sim {

namespace {

void check(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, message);
}

bool is_rotation(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).norm() < 1e-9 && r.determinant() > 0.0;
}

}  // namespace

void VehicleParams::validate() const {
  check(mass > 0.0, "vehicle mass must be positive");
  check((inertia - inertia.transpose()).norm() < 1e-12, "inertia must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat3> eig(inertia);
  check(eig.eigenvalues().minCoeff() > 0.0, "inertia must be positive definite");
  check(arm_length > 0.0, "arm length must be positive");
  check(tilt >= 0.0 && tilt < kPi / 2.0, "rotor tilt must lie in [0, pi/2)");
  check(thrust_coeff > 0.0, "thrust coefficient must be positive");
  check(drag_coeff >= 0.0, "drag coefficient must be non-negative");
  check(min_rotor_speed >= 0.0 && max_rotor_speed > min_rotor_speed,
        "rotor speed limits must satisfy 0 <= min < max");
  check(tool_offset.allFinite(), "tool offset must be finite");
  check(is_rotation(tool_rotation), "tool rotation must be a rotation matrix");
  check(motor_time_constant >= 0.0, "motor time constant must be non-negative");
}

void WallModel::validate() const {
  check(std::abs(normal.norm() - 1.0) < 1e-9, "wall normal must be a unit vector");
  check(stiffness >= 0.0, "wall stiffness must be non-negative");
  check(damping >= 0.0, "wall damping must be non-negative");
  check(friction >= 0.0, "wall friction must be non-negative");
}

Mat3 WallModel::frame() const {
  const Vec3 z = normal.normalized();
  // Keep x_W horizontal when the wall is vertical.
  Vec3 x = Vec3::UnitZ().cross(z);
  if (x.norm() < 1e-9) x = Vec3::UnitX().cross(z);
  x.normalize();
  Mat3 r;
  r.col(0) = x;
  r.col(1) = z.cross(x);
  r.col(2) = z;
  return r;
}

Vec3 ContactInfo::applied_force_tool(const SimState& state, const VehicleParams& params) const {
  const Mat3 r_ie = state.attitude * params.tool_rotation;
  return -(r_ie.transpose() * tip_force);
}

InertiaTerms coriolis_and_inertia(const VehicleParams& params, const Vec3& w) {
  InertiaTerms out;
  out.inertia.setZero();
  out.inertia.topLeftCorner<3, 3>() = params.mass * Mat3::Identity();
  out.inertia.bottomRightCorner<3, 3>() = params.inertia;
  out.coriolis.setZero();
  out.coriolis.topLeftCorner<3, 3>() = params.mass * skew(w);
  // -[J w]x, so that the angular block times w gives w x (J w).
  out.coriolis.bottomRightCorner<3, 3>() = -skew(params.inertia * w);
  return out;
}

Wrench gravity_wrench(const VehicleParams& params, const Mat3& attitude) {
  const Vec3 g_inertial(0.0, 0.0, -kGravity);
  return Wrench{params.mass * attitude.transpose() * g_inertial, Vec3::Zero(), Frame::kBody};
}

ContactInfo contact(const SimState& state, const WallModel& wall, const VehicleParams& params) {
  ContactInfo info;
  const Mat3& r = state.attitude;
  info.tip_position = state.position + r * params.tool_offset;
  info.tip_velocity = r * (state.velocity + state.angular_velocity.cross(params.tool_offset));
  info.penetration = (wall.point - info.tip_position).dot(wall.normal);
  if (info.penetration <= 0.0) return info;

  const double penetration_rate = -info.tip_velocity.dot(wall.normal);
  const double normal_force =
      std::max(0.0, wall.stiffness * info.penetration + wall.damping * penetration_rate);
  const Vec3 tangential_velocity =
      info.tip_velocity - info.tip_velocity.dot(wall.normal) * wall.normal;
  info.tip_force = normal_force * wall.normal - wall.friction * tangential_velocity;
  info.in_contact = true;

  const Vec3 force_body = r.transpose() * info.tip_force;
  info.wrench = Wrench{force_body, params.tool_offset.cross(force_body), Frame::kBody};
  return info;
}

Wrench contact_wrench(const SimState& state, const WallModel& wall, const VehicleParams& params) {
  return contact(state, wall, params).wrench;
}

Mat6 allocation_matrix(const VehicleParams& params) {
  Mat6 a;
  const double torque_ratio = params.drag_coeff / params.thrust_coeff;
  for (int i = 0; i < kRotorCount; ++i) {
    const double angle = i * kPi / 3.0;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;  // tilt and spin alternate together
    const Vec3 radial(std::cos(angle), std::sin(angle), 0.0);
    const Vec3 tangential(-std::sin(angle), std::cos(angle), 0.0);
    const Vec3 position = params.arm_length * radial;
    // Thrust axis: body z rotated by sign * tilt about the arm.
    const Vec3 direction = std::cos(params.tilt) * Vec3::UnitZ() -
                           sign * std::sin(params.tilt) * tangential;
    a.block<3, 1>(0, i) = direction;
    a.block<3, 1>(3, i) = position.cross(direction) + sign * torque_ratio * direction;
  }
  Eigen::JacobiSVD<Mat6> svd(a);
  const auto& sv = svd.singularValues();
  const double smallest = sv(kRotorCount - 1);
  if (!(smallest > 0.0) || sv(0) / smallest > 1e6) {
    throw Error(ErrorCode::kDegenerateGeometry,
                "allocation matrix is rank deficient (condition number above 1e6)");
  }
  return a;
}

Allocator::Allocator(const VehicleParams& params)
    : params_(params), matrix_(allocation_matrix(params)), lu_(matrix_) {}

Allocation Allocator::allocate(const Wrench& body_wrench) const {
  require_frame(body_wrench, Frame::kBody, "allocate");
  const Vec6 f = lu_.solve(body_wrench.vector());
  Allocation out;
  const double lo = params_.min_thrust();
  const double hi = params_.max_thrust();
  for (int i = 0; i < kRotorCount; ++i) {
    double thrust = f(i);
    if (thrust < lo) {
      thrust = lo;
      out.saturated = true;
    } else if (thrust > hi) {
      thrust = hi;
      out.saturated = true;
    }
    out.thrust[i] = thrust;
    out.rotor_speed[i] = std::sqrt(thrust / params_.thrust_coeff);
  }
  return out;
}

Wrench Allocator::wrench(const RotorVector& thrust) const {
  const Vec6 f = Eigen::Map<const Vec6>(thrust.data());
  return Wrench::from_vector(matrix_ * f, Frame::kBody);
}

Allocation allocate(const Wrench& body_wrench, const VehicleParams& params) {
  return Allocator(params).allocate(body_wrench);
}

namespace {

struct Derivative {
  Vec3 position;
  Vec3 rotation;
  Vec3 velocity;
  Vec3 angular_velocity;
};

void check_finite(const SimState& s) {
  const auto fail = [&](const char* what) {
    throw Error(ErrorCode::kDivergence,
                std::string("non-finite ") + what + " at t=" + std::to_string(s.time));
  };
  if (!s.position.allFinite()) fail("position");
  if (!s.attitude.allFinite()) fail("attitude");
  if (!s.velocity.allFinite()) fail("linear velocity");
  if (!s.angular_velocity.allFinite()) fail("angular velocity");
}

}  // namespace

SimState step(const SimState& state, const WrenchLaw& control, const StepInputs& inputs,
              const VehicleParams& params, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "step: dt must be positive");
  const Mat3 inertia_inv = params.inertia.inverse();

  const auto derivative = [&](double t, const Vec3& p, const Vec3& xi, const Vec3& v,
                              const Vec3& w) {
    SimState s = state;
    s.time = t;
    s.position = p;
    s.attitude = state.attitude * exp_so3(xi);
    s.velocity = v;
    s.angular_velocity = w;

    const Wrench u = control(s);
    require_frame(u, Frame::kBody, "step control");
    Vec3 force = u.force + gravity_wrench(params, s.attitude).force +
                 s.attitude.transpose() * inputs.disturbance_force;
    Vec3 torque = u.torque;
    if (inputs.wall != nullptr) {
      const Wrench c = contact_wrench(s, *inputs.wall, params);
      force += c.force;
      torque += c.torque;
    }
    Derivative d;
    d.position = s.attitude * v;
    d.rotation = dexp_inv(xi, w);
    d.velocity = force / params.mass - w.cross(v);
    d.angular_velocity = inertia_inv * (torque - w.cross(params.inertia * w));
    return d;
  };

  const double t0 = state.time;
  const Vec3& p0 = state.position;
  const Vec3 xi0 = Vec3::Zero();
  const Vec3& v0 = state.velocity;
  const Vec3& w0 = state.angular_velocity;

  const Derivative k1 = derivative(t0, p0, xi0, v0, w0);
  const double h2 = 0.5 * dt;
  const Derivative k2 = derivative(t0 + h2, p0 + h2 * k1.position, xi0 + h2 * k1.rotation,
                                   v0 + h2 * k1.velocity, w0 + h2 * k1.angular_velocity);
  const Derivative k3 = derivative(t0 + h2, p0 + h2 * k2.position, xi0 + h2 * k2.rotation,
                                   v0 + h2 * k2.velocity, w0 + h2 * k2.angular_velocity);
  const Derivative k4 = derivative(t0 + dt, p0 + dt * k3.position, xi0 + dt * k3.rotation,
                                   v0 + dt * k3.velocity, w0 + dt * k3.angular_velocity);

  const double h6 = dt / 6.0;
  SimState next = state;
  next.time = t0 + dt;
  next.position = p0 + h6 * (k1.position + 2.0 * k2.position + 2.0 * k3.position + k4.position);
  const Vec3 xi = h6 * (k1.rotation + 2.0 * k2.rotation + 2.0 * k3.rotation + k4.rotation);
  next.attitude = orthonormalize(state.attitude * exp_so3(xi));
  next.velocity = v0 + h6 * (k1.velocity + 2.0 * k2.velocity + 2.0 * k3.velocity + k4.velocity);
  next.angular_velocity = w0 + h6 * (k1.angular_velocity + 2.0 * k2.angular_velocity +
                                     2.0 * k3.angular_velocity + k4.angular_velocity);
  check_finite(next);
  return next;
}

SimState step(const SimState& state, const Allocator& allocator, const RotorVector& thrust,
              const StepInputs& inputs, const VehicleParams& params, double dt) {
  RotorVector applied = thrust;
  RotorVector realized = thrust;
  if (params.motor_time_constant > 0.0) {
    // Exact first-order response; the step uses the mean thrust over dt.
    const double tau = params.motor_time_constant;
    const double decay = std::exp(-dt / tau);
    const double mean_factor = tau / dt * (1.0 - decay);
    for (int i = 0; i < kRotorCount; ++i) {
      const double gap = state.rotor_thrust[i] - thrust[i];
      applied[i] = thrust[i] + gap * mean_factor;
      realized[i] = thrust[i] + gap * decay;
    }
  }
  const Wrench u = allocator.wrench(applied);
  SimState next = step(state, [&u](const SimState&) { return u; }, inputs, params, dt);
  next.rotor_thrust = realized;
  return next;
}

SimState step(const SimState& state, const RotorVector& thrust, const WallModel* wall,
              const VehicleParams& params, double dt) {
  const Allocator allocator(params);
  StepInputs inputs;
  inputs.wall = wall;
  return step(state, allocator, thrust, inputs, params, dt);
}

double mechanical_energy(const SimState& state, const VehicleParams& params) {
  const double kinetic = 0.5 * params.mass * state.velocity.squaredNorm() +
                         0.5 * state.angular_velocity.dot(params.inertia * state.angular_velocity);
  return kinetic + params.mass * kGravity * state.position.z();
}

}  // namespace aerotact::sim
