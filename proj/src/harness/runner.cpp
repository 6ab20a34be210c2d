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
#include <fstream>
#include <limits>
#include <random>

#include <Eigen/Cholesky>

#include "aerotact/harness.hpp"

namespace aerotact::harness {

namespace {

// Stream identifiers for derive_seed.
constexpr std::uint64_t kStreamTactile = 2;
constexpr std::uint64_t kStreamForceTorque = 3;
constexpr std::uint64_t kStreamGust = 4;
constexpr std::uint64_t kStreamImage = 6;

Vec3 gaussian3(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double a = n(rng);
  const double b = n(rng);
  const double c = n(rng);
  return Vec3(a, b, c);
}

double rms(double sum_sq, std::size_t n) { return n == 0 ? 0.0 : std::sqrt(sum_sq / static_cast<double>(n)); }

// Push frame in inertial coordinates: z along -n into the wall, matching
// R^B_W = rot_y(pi/2) for a vehicle facing the wall.
Mat3 push_frame(const sim::WallModel& wall) {
  const Eigen::Quaterniond q = Eigen::Quaterniond::FromTwoVectors(Vec3::UnitX(), -wall.normal);
  return q.toRotationMatrix() * rot_y(kPi / 2.0);
}

double facing_yaw(const sim::WallModel& wall) { return std::atan2(-wall.normal.y(), -wall.normal.x()); }

struct PhaseTracker {
  std::size_t index = 0;
  double start = 0.0;
  Vec3 start_setpoint = Vec3::Zero();
  bool contacted = false;
  double first_contact = 0.0;
};

class Panels {
 public:
  explicit Panels(const Scenario& sc) : sequence_(sc.texture.sequence), width_(sc.texture.panel_width) {}

  texture::TextureClass at(double y) const {
    if (sequence_.empty()) return texture::TextureClass::kPrintedFlatPaper;
    const double n = static_cast<double>(sequence_.size());
    const long i = std::lround(y / width_ + 0.5 * (n - 1.0));
    return sequence_[static_cast<std::size_t>(std::clamp<long>(i, 0, static_cast<long>(n) - 1))];
  }

 private:
  std::vector<texture::TextureClass> sequence_;
  double width_;
};

}  // namespace

std::shared_ptr<const Resources> build_resources(const Scenario& sc) {
  auto res = std::make_shared<Resources>();
  if (!sc.dataset.path.empty()) {
    std::ifstream in(sc.dataset.path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open training set " + sc.dataset.path);
    res->training_set = estimation::read_training_set(in);
  } else {
    res->training_set = estimation::generate_dataset(sc.pad, sc.dataset.ranges, sc.dataset.size, sc.dataset_seed());
  }
  res->knn = std::make_unique<estimation::KnnRegressor>(res->training_set, sc.dataset.knn);
  if (sc.texture.enabled) {
    res->textures = std::make_unique<texture::TextureLibrary>(texture::TextureLibrary::build(sc.texture.training.texture_seed));
    const texture::LabeledDescriptors frames =
        texture::render_training_frames(sc.pad, *res->textures, sc.texture.training, sc.texture_seed());
    res->classifier = std::make_unique<texture::ClassifierModel>(
        texture::ClassifierModel::train(frames.descriptors, frames.labels, sc.texture.classifier));
  }
  return res;
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  return run_scenario(scenario, build_resources(scenario), options);
}

RunResult run_scenario(const Scenario& sc, std::shared_ptr<const Resources> resources,
                       const RunOptions& options) {
  sc.validate();
  if (!resources || !resources->knn) throw Error(ErrorCode::kInvalidArgument, "run_scenario: missing resources");
  if (sc.texture.enabled && !resources->classifier) {
    throw Error(ErrorCode::kUntrainedModel, "run_scenario: texture enabled but no classifier");
  }

  RunResult out;
  out.scenario = sc;
  const sim::VehicleParams& vehicle = sc.vehicle;
  const sim::Allocator allocator(vehicle);
  const sim::WallModel* wall = sc.wall_enabled ? &sc.wall : nullptr;
  const Mat3 r_iw = push_frame(sc.wall);
  const double yaw = facing_yaw(sc.wall);
  const Panels panels(sc);

  std::mt19937_64 tactile_rng(derive_seed(sc.seed, kStreamTactile));
  std::mt19937_64 ft_rng(derive_seed(sc.seed, kStreamForceTorque));
  std::mt19937_64 gust_rng(derive_seed(sc.seed, kStreamGust));
  const std::uint64_t image_seed = derive_seed(sc.seed, kStreamImage);
  const Mat3 ft_chol = sc.noise.force_torque.llt().matrixL();

  const long ticks_per_second = std::lround(1.0 / sc.dt);
  const long max_ticks = static_cast<long>(std::floor(sc.max_duration * ticks_per_second + 0.5));
  const bool render = sc.image_path || sc.texture.enabled || options.keep_frames;
  const texture::ContactMask mask = texture::central_mask(sc.pad);

  tactile::TactileImage reference_image;
  if (sc.image_path) {
    reference_image = tactile::render_tactile_image(tactile::MarkerField::at_rest(sc.pad), std::nullopt, sc.pad, 0,
                                                    tactile::RenderOptions{});
  }

  sim::SimState state;
  state.position = sc.initial_position;
  state.attitude = rot_z(yaw);
  {
    // Start at the hover allocation so motor lag does not kick.
    const control::MotionSetpoint sp = control::MotionSetpoint::hold(sc.initial_position, yaw);
    const Wrench w = control::feedback_linearize(
        control::motion_wrench(state, sp, sc.motion_gains, vehicle, control::GravityFeedforward::kExclude), state,
        vehicle);
    state.rotor_thrust = allocator.allocate(w).thrust;
  }

  estimation::FusionState fusion;
  estimation::ContactDetector detector(sc.contact_detection.threshold_on, sc.contact_detection.threshold_off);
  control::ForceIntegrator integrator;
  control::HybridConfig hybrid;
  hybrid.tool_rotation = vehicle.tool_rotation;
  hybrid.reference_force = Vec3(0.0, 0.0, sc.reference_force);
  Vec3 operating = Vec3::Zero();
  bool operating_valid = false;
  int lambda_prev = 0;

  Vec3 gust = Vec3::Zero();
  const double gust_decay = std::exp(-sc.dt / sc.disturbance.gust_time_constant);
  const double gust_kick = sc.disturbance.gust_std * std::sqrt(1.0 - gust_decay * gust_decay);

  Vec3 last_tactile_force = Vec3::Zero();
  tactile::MarkerField previous_tracked = tactile::MarkerField::at_rest(sc.pad);
  texture::ScoreState score = texture::ScoreState::uniform();
  double last_detect = -std::numeric_limits<double>::infinity();
  texture::TextureClass last_prediction = texture::TextureClass::kNonContact;

  PhaseTracker phase;
  phase.start_setpoint = sc.initial_position;
  control::MotionSetpoint setpoint = control::MotionSetpoint::hold(sc.initial_position, yaw);

  long frame = 0;
  const auto frame_tick = [&](long k) {
    return static_cast<long>(std::floor(static_cast<double>(k) * ticks_per_second / sc.pad.frame_rate + 1e-9));
  };

  double err_sq = 0.0;
  for (long n = 0; n <= max_ticks; ++n) {
    const double t = static_cast<double>(n) * sc.dt;
    state.time = t;

    // Contact truth and the F/T channel.
    sim::ContactInfo info;
    if (wall != nullptr) info = sim::contact(state, *wall, vehicle);
    Vec3 force_true = info.in_contact ? info.applied_force_tool(state, vehicle) : Vec3::Zero();
    force_true.z() = std::max(0.0, force_true.z());

    if (n > 0) fusion = estimation::kf_predict(fusion, sc.noise, sc.dt);
    fusion.stamp = t;
    const Vec3 force_ft = force_true + ft_chol * gaussian3(ft_rng);
    if (sc.sensor_mode != SensorMode::kTactile) {
      fusion = estimation::kf_update(fusion, force_ft, estimation::Sensor::kForceTorque, sc.noise);
    }

    // Tactile frame.
    if (n == frame_tick(frame)) {
      const double stamp = static_cast<double>(frame) / sc.pad.frame_rate;
      tactile::MarkerField field = tactile::marker_displacements(Wrench{force_true, Vec3::Zero(), Frame::kEndEffector},
                                                                 sc.pad, Vec2::Zero(), tactile_rng);
      field.stamp = stamp;
      const texture::TextureClass surface = panels.at(info.tip_position.y());
      tactile::TactileImage image;
      if (render) {
        std::optional<tactile::ContactPatch> patch;
        if (info.in_contact && force_true.z() > 0.0) {
          tactile::ContactPatch p;
          p.normal_force = force_true.z();
          p.radius = tactile::contact_radius(force_true.z());
          p.texture_offset = Vec2(-1000.0 * info.tip_position.z(), 1000.0 * info.tip_position.y());
          if (resources->textures) p.relief = resources->textures->relief(surface);
          patch = p;
        }
        image = tactile::render_tactile_image(field, patch, sc.pad, derive_seed(image_seed, static_cast<std::uint64_t>(frame)));
        image.stamp = stamp;
      }
      TactileRow row;
      row.t = stamp;
      row.frame = frame;
      row.force_true = force_true;
      tactile::TactileFeature feature;
      bool have_feature = true;
      if (sc.image_path) {
        try {
          previous_tracked = tactile::track_markers(reference_image, image, sc.pad, &previous_tracked);
          feature = tactile::feature_vector(previous_tracked, sc.pad);
          row.tracked = static_cast<int>(std::count(previous_tracked.valid.begin(), previous_tracked.valid.end(), true));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kTrackingLoss) throw;
          have_feature = false;  // frame dropped, estimate holds
        }
      } else {
        feature = tactile::feature_vector(field, sc.pad);
        row.tracked = sc.pad.marker_count();
      }
      if (have_feature) {
        last_tactile_force = resources->knn->estimate(feature);
        if (sc.sensor_mode != SensorMode::kForceTorque) {
          fusion = estimation::kf_update(fusion, last_tactile_force, estimation::Sensor::kTactile, sc.noise);
        }
        detector.update(feature);
        row.mean_displacement = feature.mean_marker_displacement();
      }
      row.contact = detector.active() ? 1 : 0;
      row.force_tactile = last_tactile_force;
      out.tactile.push_back(row);

      if (sc.texture.enabled) {
        const bool touching = detector.active();
        const texture::Descriptor d =
            texture::extract_descriptor(image, touching ? std::optional<texture::ContactMask>(mask) : std::nullopt);
        TextureRow tr;
        tr.t = stamp;
        tr.truth = touching ? surface : texture::TextureClass::kNonContact;
        tr.p = texture::classify(d, *resources->classifier);
        texture::Likelihood raw{};
        for (int i = 0; i < texture::kClassCount; ++i) raw[i] = 5.0 * score.s[i] + tr.p[i];
        score = texture::accumulate(score, tr.p);
        tr.argmax_agrees = texture::argmax(raw) == texture::predict(score) ? 1 : 0;
        if (touching) {
          last_detect = stamp;
        } else if (stamp - last_detect > sc.texture.reset_after) {
          score = texture::ScoreState::uniform();
        }
        tr.s = score.s;
        tr.frame_prediction = texture::argmax(tr.p);
        tr.prediction = texture::predict(score);
        last_prediction = tr.prediction;
        out.texture.push_back(tr);
      }
      if (options.keep_frames && render) out.frames.push_back(std::move(image));
      ++frame;
    }

    // Mission.
    const Phase& ph = sc.mission[phase.index];
    const double elapsed = t - phase.start;
    int lambda = 0;
    bool done = false;
    setpoint.velocity.setZero();
    setpoint.attitude = rot_z(yaw);
    switch (ph.kind) {
      case PhaseKind::kHover:
        setpoint.position = ph.position;
        done = elapsed >= ph.duration;
        break;
      case PhaseKind::kGoto:
      case PhaseKind::kRetreat: {
        const Vec3 span = ph.position - phase.start_setpoint;
        const double length = span.norm();
        const double travelled = std::min(ph.speed * elapsed, length);
        if (length > 0.0) {
          setpoint.position = phase.start_setpoint + span * (travelled / length);
          if (travelled < length) setpoint.velocity = span * (ph.speed / length);
        } else {
          setpoint.position = ph.position;
        }
        done = (travelled >= length && (state.position - ph.position).norm() < ph.tolerance) ||
               elapsed > ph.timeout + length / ph.speed;
        break;
      }
      case PhaseKind::kPush: {
        lambda = detector.active() ? 1 : 0;
        if (lambda == 1 && lambda_prev == 0) {
          operating = state.position;
          operating_valid = true;
          integrator = control::ForceIntegrator{};
          if (!phase.contacted) {
            phase.contacted = true;
            phase.first_contact = t;
          }
        }
        if (phase.contacted) {
          setpoint.position = operating;
        } else {
          const Vec3 dir = -sc.wall.normal;
          setpoint.position = phase.start_setpoint + dir * (ph.speed * elapsed);
          setpoint.velocity = dir * ph.speed;
        }
        done = phase.contacted ? t - phase.first_contact >= ph.duration : elapsed > ph.timeout;
        break;
      }
    }

    // Control.
    const Wrench tau_p =
        control::motion_wrench(state, setpoint, sc.motion_gains, vehicle, control::GravityFeedforward::kExclude);
    Wrench tau_f = Wrench::zero(Frame::kBody);
    Vec3 force_error = Vec3::Zero();
    bool windup = false;
    hybrid.lambda = lambda;
    hybrid.operating_position = operating;
    hybrid.wall_rotation = state.attitude.transpose() * r_iw;
    if (lambda == 1) {
      const Vec3 measured = r_iw.transpose() * state.attitude * vehicle.tool_rotation * fusion.force;
      const control::ForceCommand cmd =
          control::force_wrench(measured, hybrid, sc.force_gains, state, integrator, sc.dt);
      tau_f = cmd.wrench;
      force_error = cmd.error;
      windup = integrator.windup;
    }
    const Wrench tau = control::hybrid_combine(tau_p, tau_f, control::selection_matrix(hybrid));
    const Wrench command = control::feedback_linearize(tau, state, vehicle);
    const sim::Allocation alloc = allocator.allocate(command);

    ControlRow row;
    row.t = t;
    row.phase = static_cast<int>(phase.index);
    row.lambda = lambda;
    row.position = state.position;
    row.setpoint = setpoint.position;
    row.operating_position = operating_valid ? operating : Vec3::Zero();
    row.position_error = state.position - setpoint.position;
    row.force_true = force_true;
    row.force_estimate = fusion.force;
    row.force_reference = sc.reference_force;
    row.force_error = force_error;
    row.tau_p = tau_p.vector();
    row.tau_f = tau_f.vector();
    row.tau = tau.vector();
    row.saturated = alloc.saturated ? 1 : 0;
    row.windup = windup ? 1 : 0;
    out.control.push_back(row);
    err_sq += row.position_error.squaredNorm();

    EstimatorRow er;
    er.t = t;
    er.force_ft = force_ft;
    er.force_tactile = last_tactile_force;
    er.force_fused = fusion.force;
    er.variance = fusion.covariance.diagonal();
    out.estimator.push_back(er);
    lambda_prev = lambda;

    if (done) {
      if (ph.kind == PhaseKind::kPush && phase.contacted && sc.texture.enabled) {
        SegmentResult seg;
        seg.phase = static_cast<int>(phase.index);
        seg.texture = ph.texture.value_or(panels.at(info.tip_position.y()));
        seg.prediction = last_prediction;
        seg.contact_time = t - phase.first_contact;
        out.segments.push_back(seg);
      }
      if (ph.kind == PhaseKind::kPush) {
        operating_valid = false;
        lambda_prev = 0;
      }
      phase.index += 1;
      phase.start = t;
      phase.start_setpoint = setpoint.position;
      phase.contacted = false;
      if (phase.index == sc.mission.size()) {
        out.mission_complete = true;
        break;
      }
    }

    // Disturbance and physics.
    if (sc.disturbance.gust_std > 0.0) gust = gust_decay * gust + gust_kick * gaussian3(gust_rng);
    sim::StepInputs inputs;
    inputs.wall = wall;
    inputs.disturbance_force = gust;
    try {
      state = sim::step(state, allocator, alloc.thrust, inputs, vehicle, sc.dt);
    } catch (const Error& e) {
      throw Error(e.code(), "run '" + sc.name + "' at t=" + std::to_string(t) + " (phase " +
                                std::to_string(phase.index) + "): " + e.what());
    }
  }

  out.tracking_rmse_mm = 1000.0 * rms(err_sq, out.control.size());
  const bool any_contact = std::any_of(out.control.begin(), out.control.end(), [](const ControlRow& r) { return r.lambda == 1; });
  if (any_contact) out.metrics = compute_metrics(out.control);
  if (sc.texture.enabled && !out.texture.empty()) {
    long hits = 0;
    for (const TextureRow& r : out.texture) hits += r.frame_prediction == r.truth ? 1 : 0;
    out.texture_frame_accuracy = static_cast<double>(hits) / static_cast<double>(out.texture.size());
    if (!out.segments.empty()) {
      long ok = 0;
      for (const SegmentResult& s : out.segments) ok += s.prediction == s.texture ? 1 : 0;
      out.texture_post_contact_accuracy = static_cast<double>(ok) / static_cast<double>(out.segments.size());
    }
  }
  return out;
}

}  // namespace aerotact::harness
