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

// Hybrid motion-force control for the fully-actuated hexarotor.
//
// Force-control frame ("push frame"): z points from the vehicle into the
// surface, so a compressive contact force and the commanded push are both
// positive along z. e_f = F_meas - F_ref is therefore negative when pushing
// too softly, and the force law subtracts the error terms:
//
//   F_f = F_ref - K_sp e_s - K_sd de_s - K_fp e_f - K_fi int(e_f)

#pragma once

#include "aerotact/common.hpp"
#include "aerotact/sim.hpp"

namespace aerotact::control {

struct MotionGains {
  Vec3 position = Vec3::Constant(12.0);  // K_p, N/m
  Vec3 velocity = Vec3::Constant(6.0);   // K_v, N s/m
  double attitude = 2.0;                 // k_R, N m
  double rate = 0.4;                     // k_W, N m s

  void validate() const;
};

struct MotionSetpoint {
  Vec3 position = Vec3::Zero();          // inertial
  Vec3 velocity = Vec3::Zero();          // inertial
  Vec3 acceleration = Vec3::Zero();      // inertial
  Mat3 attitude = Mat3::Identity();      // R_d
  Vec3 angular_velocity = Vec3::Zero();  // body, desired

  static MotionSetpoint hold(const Vec3& position, double yaw);
};

enum class GravityFeedforward { kInclude, kExclude };

// Geometric SE(3) motion controller. With kInclude the force part carries the
// m*g hover term; the closed loop uses kExclude since feedback_linearize
// already cancels gravity.
Wrench motion_wrench(const sim::SimState& state, const MotionSetpoint& setpoint,
                     const MotionGains& gains, const sim::VehicleParams& params,
                     GravityFeedforward gravity = GravityFeedforward::kInclude);

struct ForceGains {
  Mat3 stiffness = 20.0 * Mat3::Identity();       // K_s, N/m
  Mat3 damping = 8.0 * Mat3::Identity();          // D_s, N s/m
  Mat3 proportional = 0.6 * Mat3::Identity();     // K_fp
  Mat3 integral = 0.8 * Mat3::Identity();         // K_fi, 1/s
  Mat3 actual_mass = Mat3::Identity();            // M_0
  Mat3 desired_mass = Mat3::Identity();           // M_d
  double integral_clamp = 3.0;                    // N, per axis on K_fi * int(e_f)

  Mat3 normalized_stiffness() const { return actual_mass * desired_mass.inverse() * stiffness; }
  Mat3 normalized_damping() const { return actual_mass * desired_mass.inverse() * damping; }
  void validate() const;
};

struct HybridConfig {
  int lambda = 0;                                 // 0: motion only, 1: force along z_E
  Mat3 tool_rotation = rot_y(kPi / 2.0);          // R^B_E
  Mat3 wall_rotation = rot_y(kPi / 2.0);          // R^B_W of the push frame
  Vec3 reference_force = Vec3(0.0, 0.0, 5.0);     // F_ref, push frame
  Vec3 operating_position = Vec3::Zero();         // inertial anchor for e_s

  void validate() const;
};

struct ForceIntegrator {
  Vec3 value = Vec3::Zero();  // int(e_f) dt, N s
  bool windup = false;        // set when the clamp engaged on the last update
};

struct ForceCommand {
  Wrench wrench = Wrench::zero(Frame::kBody);  // tau_f
  Vec3 force = Vec3::Zero();                   // F_f, push frame
  Vec3 error = Vec3::Zero();                   // e_f
  Vec3 position_error = Vec3::Zero();          // e_s
};

// Impedance force law. Advances `integrator` by e_f * dt and clamps the
// integral contribution to +/- integral_clamp per axis.
ForceCommand force_wrench(const Vec3& measured_force, const HybridConfig& config,
                          const ForceGains& gains, const sim::SimState& state,
                          ForceIntegrator& integrator, double dt);

// Lambda = blockdiag(R diag(0,0,lambda) R^T, 0).
Mat6 selection_matrix(const HybridConfig& config);

Wrench hybrid_combine(const Wrench& motion, const Wrench& force, const Mat6& selection);

// tau' = C v - G + tau, with G the gravity wrench acting on the vehicle, so
// that the plant reduces to M dv/dt = tau + tau_c.
Wrench feedback_linearize(const Wrench& tau, const sim::SimState& state,
                          const sim::VehicleParams& params);

}  // namespace aerotact::control
