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

// Rigid-body simulation of a fully-actuated tilted-rotor hexarotor carrying a
// rigid tool, pushing against a compliant planar wall.
//
// Conventions: inertial frame z points up and gravity is (0, 0, -9.81).
// Body frame x points forward (towards the tool), z along the nominal thrust.
// The twist v = [V; W] is expressed in the body frame.

#pragma once

#include <array>
#include <functional>

#include "aerotact/common.hpp"

namespace aerotact::sim {

inline constexpr int kRotorCount = 6;
using RotorVector = std::array<double, kRotorCount>;

struct VehicleParams {
  double mass = 4.0;                                       // kg
  Mat3 inertia = Vec3(0.12, 0.12, 0.20).asDiagonal();      // kg m^2
  double arm_length = 0.48;                                // m
  double tilt = kPi / 6.0;                                 // rad, alternating sign
  double thrust_coeff = 1.0e-5;                            // N / (rad/s)^2
  double drag_coeff = 1.6e-7;                              // N m / (rad/s)^2
  double min_rotor_speed = 0.0;                            // rad/s
  double max_rotor_speed = 1500.0;                         // rad/s
  Vec3 tool_offset = Vec3(0.5, 0.0, 0.0);                  // r_E, body frame
  Mat3 tool_rotation = rot_y(kPi / 2.0);                   // R^B_E, z_E = body x
  double motor_time_constant = 0.0;                        // s, 0 disables lag

  double min_thrust() const { return thrust_coeff * min_rotor_speed * min_rotor_speed; }
  double max_thrust() const { return thrust_coeff * max_rotor_speed * max_rotor_speed; }

  // Throws kInvalidArgument on violated invariants.
  void validate() const;
};

struct SimState {
  Vec3 position = Vec3::Zero();          // m, inertial
  Mat3 attitude = Mat3::Identity();      // R^I_B
  Vec3 velocity = Vec3::Zero();          // m/s, body
  Vec3 angular_velocity = Vec3::Zero();  // rad/s, body
  double time = 0.0;                     // s
  RotorVector rotor_thrust{};            // realized thrusts, used by motor lag

  Vec6 twist() const {
    Vec6 v;
    v << velocity, angular_velocity;
    return v;
  }
};

// Planar unilateral spring-damper wall with viscous tangential friction.
struct WallModel {
  Vec3 point = Vec3(1.0, 0.0, 0.0);     // m, on the surface
  Vec3 normal = Vec3(-1.0, 0.0, 0.0);   // unit, from the surface into free space
  double stiffness = 5000.0;            // N/m
  double damping = 50.0;                // N s/m
  double friction = 20.0;               // N s/m, viscous tangential gain

  void validate() const;
  // R^I_W with z_W = normal.
  Mat3 frame() const;
};

struct ContactInfo {
  Wrench wrench = Wrench::zero(Frame::kBody);  // tau_c acting on the vehicle
  Vec3 tip_position = Vec3::Zero();            // inertial
  Vec3 tip_velocity = Vec3::Zero();            // inertial
  Vec3 tip_force = Vec3::Zero();               // force on the vehicle, inertial
  double penetration = 0.0;                    // m, > 0 inside the wall
  bool in_contact = false;

  // Force the tool exerts on the surface, in the end-effector frame.
  // Its z component is the compressive normal force (>= 0).
  Vec3 applied_force_tool(const SimState& state, const VehicleParams& params) const;
};

struct InertiaTerms {
  Mat6 inertia;   // M
  Mat6 coriolis;  // C
};

InertiaTerms coriolis_and_inertia(const VehicleParams& params, const Vec3& angular_velocity);

// Gravitational wrench acting on the vehicle, body frame: m * R^T * g_I.
Wrench gravity_wrench(const VehicleParams& params, const Mat3& attitude);

ContactInfo contact(const SimState& state, const WallModel& wall, const VehicleParams& params);
Wrench contact_wrench(const SimState& state, const WallModel& wall, const VehicleParams& params);

// Rotor thrust -> body wrench map. Throws kDegenerateGeometry when the
// condition number exceeds 1e6.
Mat6 allocation_matrix(const VehicleParams& params);

struct Allocation {
  RotorVector thrust{};       // N
  RotorVector rotor_speed{};  // rad/s
  bool saturated = false;
};

// Precomputes the allocation matrix and its factorization.
class Allocator {
 public:
  explicit Allocator(const VehicleParams& params);

  Allocation allocate(const Wrench& body_wrench) const;
  Wrench wrench(const RotorVector& thrust) const;
  const Mat6& matrix() const { return matrix_; }

 private:
  VehicleParams params_;
  Mat6 matrix_;
  Eigen::PartialPivLU<Mat6> lu_;
};

Allocation allocate(const Wrench& body_wrench, const VehicleParams& params);

// Body wrench law evaluated at every integrator stage.
using WrenchLaw = std::function<Wrench(const SimState&)>;

struct StepInputs {
  const WallModel* wall = nullptr;        // nullptr: no wall
  Vec3 disturbance_force = Vec3::Zero();  // inertial, held over the step
};

// Advances one RK4 step with the attitude propagated on SO(3) through the
// exponential map. Throws kDivergence on non-finite state.
SimState step(const SimState& state, const RotorVector& thrust, const WallModel* wall,
              const VehicleParams& params, double dt);
SimState step(const SimState& state, const Allocator& allocator, const RotorVector& thrust,
              const StepInputs& inputs, const VehicleParams& params, double dt);
SimState step(const SimState& state, const WrenchLaw& control, const StepInputs& inputs,
              const VehicleParams& params, double dt);

// Kinetic plus gravitational potential energy (zero height reference).
double mechanical_energy(const SimState& state, const VehicleParams& params);

}  // namespace aerotact::sim
