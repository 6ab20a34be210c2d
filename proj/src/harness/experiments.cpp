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

#include <fstream>
#include <string>

#include <fmt/format.h>

#include "aerotact/harness.hpp"

namespace aerotact::harness {

namespace {

constexpr std::array<SensorMode, 3> kModes = {SensorMode::kForceTorque, SensorMode::kTactile, SensorMode::kFused};

}  // namespace

ModeComparison compare_sensor_modes(const Scenario& base, int replicates, const std::filesystem::path* out_dir) {
  if (replicates < 1) throw Error(ErrorCode::kInvalidArgument, "compare_sensor_modes: replicates must be >= 1");
  base.validate();
  // Models are trained once; replicates differ only in world and sensor noise.
  Scenario shared = base;
  shared.dataset.seed = base.dataset_seed();
  shared.texture.training_seed = base.texture_seed();
  const std::shared_ptr<const Resources> resources = build_resources(shared);

  ModeComparison out;
  std::string csv =
      "replicate,seed,mode,force_rmse_n,force_overshoot_n,force_undershoot_n,position_rmse_mm,position_std_mm,"
      "settling_time_s,steady_state_error_n,estimate_rmse_n\n";
  for (int r = 0; r < replicates; ++r) {
    const std::uint64_t seed = derive_seed(base.seed, 1000 + static_cast<std::uint64_t>(r));
    out.seeds.push_back(seed);
    std::array<RunMetrics, 3> row{};
    for (std::size_t m = 0; m < kModes.size(); ++m) {
      Scenario cfg = shared;
      cfg.seed = seed;
      cfg.sensor_mode = kModes[m];
      const RunResult run = run_scenario(cfg, resources);
      if (!run.metrics) {
        throw Error(ErrorCode::kNoContactWindow, fmt::format("compare_sensor_modes: replicate {} ({}) never made contact",
                                                             r, sensor_mode_name(kModes[m])));
      }
      row[m] = *run.metrics;
      if (out_dir != nullptr && r == 0) write_run(run, *out_dir / sensor_mode_name(kModes[m]));
      const RunMetrics& k = row[m];
      fmt::format_to(std::back_inserter(csv), "{},{},{},{},{},{},{},{},{},{},{}\n", r, seed, sensor_mode_name(kModes[m]),
                     k.force_rmse, k.force_overshoot, k.force_undershoot, k.position_rmse_mm, k.position_std_mm,
                     k.settling_time, k.steady_state_error, k.estimate_rmse);
    }
    if (row[2].position_rmse_mm <= std::min(row[0].position_rmse_mm, row[1].position_rmse_mm)) {
      ++out.fused_best_position_count;
    }
    for (std::size_t m = 0; m < 3; ++m) out.mean_estimate_rmse[m] += row[m].estimate_rmse / replicates;
    out.metrics.push_back(row);
  }
  if (out_dir != nullptr) {
    std::filesystem::create_directories(*out_dir);
    std::ofstream(*out_dir / "compare.csv", std::ios::binary) << csv;
    std::ofstream(*out_dir / "table.md", std::ios::binary) << comparison_table(out);
  }
  return out;
}

std::string comparison_table(const ModeComparison& c) {
  const auto mean = [&](std::size_t mode, double RunMetrics::*field) {
    double s = 0.0;
    for (const auto& row : c.metrics) s += row[mode].*field;
    return c.metrics.empty() ? 0.0 : s / static_cast<double>(c.metrics.size());
  };
  struct Line {
    const char* name;
    double RunMetrics::*field;
  };
  const Line lines[] = {{"Force RMSE (N)", &RunMetrics::force_rmse},
                        {"Force Overshoot (N)", &RunMetrics::force_overshoot},
                        {"Force Undershoot (N)", &RunMetrics::force_undershoot},
                        {"Pos RMSE (mm)", &RunMetrics::position_rmse_mm},
                        {"Pos Std Dev (mm)", &RunMetrics::position_std_mm},
                        {"Estimate RMSE (N)", &RunMetrics::estimate_rmse}};
  std::string out = "| Metric | ft-only | tactile-only | fused |\n|---|---|---|---|\n";
  for (const Line& l : lines) {
    fmt::format_to(std::back_inserter(out), "| {} | {:.4f} | {:.4f} | {:.4f} |\n", l.name, mean(0, l.field),
                   mean(1, l.field), mean(2, l.field));
  }
  fmt::format_to(std::back_inserter(out), "\nMeans over {} replicates. Fused position RMSE lowest in {}/{}.\n",
                 c.metrics.size(), c.fused_best_position_count, c.metrics.size());
  return out;
}

TextureFlightResult texture_flight(const Scenario& scenario, const std::filesystem::path* out_dir) {
  if (!scenario.texture.enabled) throw Error(ErrorCode::kInvalidArgument, "texture_flight: texture.enabled is false");
  if (scenario.texture.sequence.empty()) throw Error(ErrorCode::kInvalidArgument, "texture_flight: empty texture sequence");
  TextureFlightResult out;
  out.run = run_scenario(scenario);
  std::vector<texture::TextureClass> truth, frame_pred, acc_pred;
  for (const TextureRow& r : out.run.texture) {
    truth.push_back(r.truth);
    frame_pred.push_back(r.frame_prediction);
    acc_pred.push_back(r.prediction);
    out.argmax_equivalent = out.argmax_equivalent && r.argmax_agrees == 1;
  }
  out.frame_confusion = texture::confusion_matrix(truth, frame_pred);
  out.accumulated_confusion = texture::confusion_matrix(truth, acc_pred);
  if (out_dir != nullptr) {
    write_run(out.run, *out_dir);
    std::ofstream(*out_dir / "confusion_accumulated.csv", std::ios::binary) << confusion_csv(out.accumulated_confusion);
    std::string seg = "segment,phase,texture,prediction,contact_time_s,correct\n";
    for (std::size_t i = 0; i < out.run.segments.size(); ++i) {
      const SegmentResult& s = out.run.segments[i];
      fmt::format_to(std::back_inserter(seg), "{},{},{},{},{},{}\n", i, s.phase, texture::class_name(s.texture),
                     texture::class_name(s.prediction), s.contact_time, s.prediction == s.texture ? 1 : 0);
    }
    std::ofstream(*out_dir / "segments.csv", std::ios::binary) << seg;
  }
  return out;
}

}  // namespace aerotact::harness
