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

// Scenario configuration, the closed-loop runner, metrics and experiment
// drivers.
//
// Time base: physics and control tick at 1/dt (integer tick counter n,
// t = n * dt). Tactile frame k is processed on tick floor(k * rate / fps) and
// stamped k / fps.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aerotact/common.hpp"
#include "aerotact/control.hpp"
#include "aerotact/estimation.hpp"
#include "aerotact/sim.hpp"
#include "aerotact/tactile.hpp"
#include "aerotact/texture.hpp"

namespace aerotact::harness {

inline constexpr int kSchemaVersion = 1;

enum class SensorMode { kForceTorque, kTactile, kFused };

const char* sensor_mode_name(SensorMode mode);
SensorMode parse_sensor_mode(const std::string& name);

enum class PhaseKind { kHover, kGoto, kPush, kRetreat };

const char* phase_kind_name(PhaseKind kind);

struct Phase {
  PhaseKind kind = PhaseKind::kHover;
  Vec3 position = Vec3::Zero();  // hover / goto / retreat target, inertial
  double duration = 0.0;         // hover: hold time; push: contact dwell, s
  double speed = 0.2;            // goto / retreat / push approach, m/s
  double tolerance = 0.01;       // goto / retreat arrival, m
  double timeout = 30.0;         // s, phase gives up after this long
  // Push only: texture panel under the tool, if any.
  std::optional<texture::TextureClass> texture;
};

struct DatasetConfig {
  std::size_t size = 10000;
  std::optional<std::uint64_t> seed;  // default: derived from the scenario seed
  estimation::ForceRanges ranges;
  estimation::KnnConfig knn;
  std::string path;  // load instead of generating when non-empty
};

struct TextureConfig {
  bool enabled = false;
  texture::TrainingOptions training;
  texture::ClassifierConfig classifier;
  std::optional<std::uint64_t> training_seed;  // default: derived from the scenario seed
  double reset_after = 0.5;                    // s without contact before s resets
  std::vector<texture::TextureClass> sequence;  // wall panels, left to right along y
  double panel_width = 0.15;                   // m
  // Generated texture flight.
  int passes = 2;
  double dwell = 10.5;      // s of contact per engagement
  double standoff = 0.40;   // body x before each approach, m
  double altitude = 1.5;    // m
};

struct DisturbanceConfig {
  double gust_std = 0.0;            // N per axis, stationary std of the gust force
  double gust_time_constant = 0.5;  // s
};

struct ContactDetectionConfig {
  double threshold_on = 0.08;   // mm
  double threshold_off = 0.03;  // mm
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name = "scenario";
  std::uint64_t seed = 1;
  double dt = 0.001;          // s
  double max_duration = 600;  // s, hard stop
  SensorMode sensor_mode = SensorMode::kFused;
  bool image_path = false;    // render + track instead of the direct marker field

  sim::VehicleParams vehicle;
  bool wall_enabled = true;
  sim::WallModel wall;
  tactile::GelPadModel pad;
  estimation::NoiseConfig noise;
  control::MotionGains motion_gains;
  control::ForceGains force_gains;
  double reference_force = 5.0;  // N, normal
  ContactDetectionConfig contact_detection;
  DatasetConfig dataset;
  TextureConfig texture;
  DisturbanceConfig disturbance;
  Vec3 initial_position = Vec3(0.0, 0.0, 1.5);
  std::vector<Phase> mission;

  // Throws kConfig naming the offending field.
  void validate() const;
  std::uint64_t dataset_seed() const;
  std::uint64_t texture_seed() const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& scenario);

// Nominal single push against the wall at 5 N.
Scenario nominal_push_scenario();
// Texture flight over the six textures, each engaged twice.
Scenario texture_flight_scenario();
// Builds the push sequence for `scenario.texture.sequence`.
std::vector<Phase> texture_flight_mission(const Scenario& scenario);

// Trained models shared between runs with the same pad, dataset and texture
// settings.
struct Resources {
  estimation::TrainingSet training_set;
  std::unique_ptr<estimation::KnnRegressor> knn;
  std::unique_ptr<texture::TextureLibrary> textures;
  std::unique_ptr<texture::ClassifierModel> classifier;
};

std::shared_ptr<const Resources> build_resources(const Scenario& scenario);

struct ControlRow {
  double t = 0.0;
  int phase = 0;
  int lambda = 0;
  Vec3 position = Vec3::Zero();
  Vec3 setpoint = Vec3::Zero();
  Vec3 operating_position = Vec3::Zero();
  Vec3 position_error = Vec3::Zero();  // e_p against the motion setpoint
  Vec3 force_true = Vec3::Zero();      // end-effector frame
  Vec3 force_estimate = Vec3::Zero();  // controller input, end-effector frame
  double force_reference = 0.0;        // normal
  Vec3 force_error = Vec3::Zero();     // e_f, push frame
  Vec6 tau_p = Vec6::Zero();
  Vec6 tau_f = Vec6::Zero();
  Vec6 tau = Vec6::Zero();
  int saturated = 0;
  int windup = 0;
};

struct TactileRow {
  double t = 0.0;
  long frame = 0;
  int contact = 0;
  double mean_displacement = 0.0;  // mm
  Vec3 force_tactile = Vec3::Zero();
  Vec3 force_true = Vec3::Zero();
  int tracked = 0;  // valid markers when the image path is on
};

struct EstimatorRow {
  double t = 0.0;
  Vec3 force_ft = Vec3::Zero();
  Vec3 force_tactile = Vec3::Zero();  // latest tactile estimate
  Vec3 force_fused = Vec3::Zero();
  Vec3 variance = Vec3::Zero();       // diag(P)
};

struct TextureRow {
  double t = 0.0;
  texture::TextureClass truth = texture::TextureClass::kNonContact;
  texture::Likelihood p{};
  texture::Likelihood s{};
  texture::TextureClass frame_prediction = texture::TextureClass::kNonContact;  // argmax p
  texture::TextureClass prediction = texture::TextureClass::kNonContact;        // argmax s
  int argmax_agrees = 1;  // normalized s and raw 5 s + p share the argmax
};

struct SegmentResult {
  int phase = 0;
  texture::TextureClass texture = texture::TextureClass::kNonContact;
  texture::TextureClass prediction = texture::TextureClass::kNonContact;
  double contact_time = 0.0;  // s
};

struct RunMetrics {
  double force_rmse = 0.0;           // N
  double force_overshoot = 0.0;      // N
  double force_undershoot = 0.0;     // N
  double position_rmse_mm = 0.0;
  double position_std_mm = 0.0;
  double settling_time = 0.0;        // s, 0.5 N band, from contact onset
  double steady_state_error = 0.0;   // N, mean |F_n - F_ref| over the final 5 s
  double estimate_rmse = 0.0;        // N, controller force input vs truth
  double contact_duration = 0.0;     // s
};

struct RunResult {
  Scenario scenario;
  std::vector<ControlRow> control;
  std::vector<TactileRow> tactile;
  std::vector<EstimatorRow> estimator;
  std::vector<TextureRow> texture;
  std::vector<SegmentResult> segments;
  std::optional<RunMetrics> metrics;  // absent without a contact window
  double tracking_rmse_mm = 0.0;       // |e_p| over the whole run
  std::optional<double> texture_frame_accuracy;
  std::optional<double> texture_post_contact_accuracy;
  bool mission_complete = false;
  std::vector<tactile::TactileImage> frames;  // only when dumping frames
};

struct RunOptions {
  bool keep_frames = false;
};

RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});
RunResult run_scenario(const Scenario& scenario, std::shared_ptr<const Resources> resources,
                       const RunOptions& options = {});

// Throws kNoContactWindow when no row has lambda = 1.
RunMetrics compute_metrics(const std::vector<ControlRow>& control);

void write_control_csv(const std::vector<ControlRow>& rows, std::ostream& out);
std::vector<ControlRow> read_control_csv(std::istream& in);
void write_tactile_csv(const std::vector<TactileRow>& rows, std::ostream& out);
void write_estimator_csv(const std::vector<EstimatorRow>& rows, std::ostream& out);
void write_texture_csv(const std::vector<TextureRow>& rows, std::ostream& out);
std::string metrics_json(const RunResult& result);
std::string metrics_json(const RunMetrics& metrics);

std::string force_plot_svg(const RunResult& result);
std::string position_plot_svg(const RunResult& result);

// CSV logs, metrics.json and SVG plots.
void write_run(const RunResult& result, const std::filesystem::path& dir);

struct ModeComparison {
  std::vector<std::uint64_t> seeds;
  // [replicate][mode], modes ordered ft-only, tactile-only, fused.
  std::vector<std::array<RunMetrics, 3>> metrics;
  int fused_best_position_count = 0;
  std::array<double, 3> mean_estimate_rmse{};
};

ModeComparison compare_sensor_modes(const Scenario& base, int replicates = 10,
                                    const std::filesystem::path* out_dir = nullptr);
std::string comparison_table(const ModeComparison& comparison);

struct TextureFlightResult {
  RunResult run;
  texture::ConfusionMatrix frame_confusion;  // per-frame p
  texture::ConfusionMatrix accumulated_confusion;  // accumulated s
  bool argmax_equivalent = true;
};

TextureFlightResult texture_flight(const Scenario& scenario, const std::filesystem::path* out_dir = nullptr);

std::string confusion_csv(const texture::ConfusionMatrix& m);
std::string confusion_svg(const texture::ConfusionMatrix& m);

}  // namespace aerotact::harness
