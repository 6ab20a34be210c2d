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

#include "aerotact/aerotact.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>

#include "aerotact/harness.hpp"

struct aerotact_scenario {
  aerotact::harness::Scenario value;
};

struct aerotact_result {
  aerotact::harness::RunResult value;
};

namespace {

namespace h = aerotact::harness;

thread_local std::string g_last_error;

aerotact_status fail(aerotact_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
aerotact_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return AEROTACT_OK;
  } catch (const aerotact::Error& e) {
    return fail(static_cast<aerotact_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(AEROTACT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(AEROTACT_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw aerotact::Error(aerotact::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* aerotact_version(void) { return "0.1.0"; }

const char* aerotact_status_name(aerotact_status status) {
  if (status == AEROTACT_OK) return "ok";
  if (status == AEROTACT_ERR_INTERNAL) return "internal";
  if (status >= AEROTACT_ERR_INVALID_ARGUMENT && status <= AEROTACT_ERR_IO)
    return aerotact::error_code_name(static_cast<aerotact::ErrorCode>(status));
  return "unknown";
}

const char* aerotact_last_error(void) { return g_last_error.c_str(); }

void aerotact_string_free(char* str) { std::free(str); }

aerotact_status aerotact_scenario_builtin(const char* name, aerotact_scenario** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const std::string n(name);
    h::Scenario sc;
    if (n == "nominal-push") {
      sc = h::nominal_push_scenario();
    } else if (n == "texture-flight") {
      sc = h::texture_flight_scenario();
    } else {
      throw aerotact::Error(aerotact::ErrorCode::kInvalidArgument, "unknown built-in scenario: " + n);
    }
    *out = new aerotact_scenario{std::move(sc)};
  });
}

aerotact_status aerotact_scenario_load(const char* path, aerotact_scenario** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new aerotact_scenario{h::load_scenario(path)};
  });
}

aerotact_status aerotact_scenario_parse(const char* json, aerotact_scenario** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new aerotact_scenario{h::parse_scenario(json)};
  });
}

aerotact_status aerotact_scenario_to_json(const aerotact_scenario* scenario, char** out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    *out = dup_string(h::scenario_to_json(scenario->value));
  });
}

aerotact_status aerotact_scenario_set_seed(aerotact_scenario* scenario, uint64_t seed) {
  return guarded([&] {
    require(scenario, "scenario");
    scenario->value.seed = seed;
  });
}

aerotact_status aerotact_scenario_set_image_path(aerotact_scenario* scenario, int enabled) {
  return guarded([&] {
    require(scenario, "scenario");
    scenario->value.image_path = enabled != 0;
  });
}

aerotact_status aerotact_scenario_set_sensor_mode(aerotact_scenario* scenario, const char* mode) {
  return guarded([&] {
    require(scenario, "scenario");
    require(mode, "mode");
    scenario->value.sensor_mode = h::parse_sensor_mode(mode);
  });
}

void aerotact_scenario_free(aerotact_scenario* scenario) { delete scenario; }

aerotact_status aerotact_run(const aerotact_scenario* scenario, int keep_frames, aerotact_result** out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    h::RunOptions options;
    options.keep_frames = keep_frames != 0;
    *out = new aerotact_result{h::run_scenario(scenario->value, options)};
  });
}

aerotact_status aerotact_result_metrics(const aerotact_result* result, aerotact_metrics* out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    if (!result->value.metrics)
      throw aerotact::Error(aerotact::ErrorCode::kNoContactWindow, "run has no contact window");
    const h::RunMetrics& m = *result->value.metrics;
    *out = aerotact_metrics{m.force_rmse,       m.force_overshoot, m.force_undershoot,
                            m.position_rmse_mm, m.position_std_mm, m.settling_time,
                            m.steady_state_error, m.estimate_rmse, m.contact_duration};
  });
}

aerotact_status aerotact_result_metrics_json(const aerotact_result* result, char** out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    *out = dup_string(h::metrics_json(result->value));
  });
}

int aerotact_result_mission_complete(const aerotact_result* result) {
  return result != nullptr && result->value.mission_complete ? 1 : 0;
}

size_t aerotact_result_rows(const aerotact_result* result) {
  return result == nullptr ? 0 : result->value.control.size();
}

aerotact_status aerotact_result_write(const aerotact_result* result, const char* dir) {
  return guarded([&] {
    require(result, "result");
    require(dir, "dir");
    h::write_run(result->value, dir);
  });
}

void aerotact_result_free(aerotact_result* result) { delete result; }

aerotact_status aerotact_compare_modes(const aerotact_scenario* scenario, int replicates,
                                       const char* out_dir, aerotact_comparison_summary* summary,
                                       char** table) {
  return guarded([&] {
    require(scenario, "scenario");
    if (replicates < 1)
      throw aerotact::Error(aerotact::ErrorCode::kInvalidArgument, "replicates must be >= 1");
    std::filesystem::path dir;
    if (out_dir != nullptr) dir = out_dir;
    const h::ModeComparison c =
        h::compare_sensor_modes(scenario->value, replicates, out_dir != nullptr ? &dir : nullptr);
    if (summary != nullptr) {
      summary->replicates = static_cast<int>(c.metrics.size());
      summary->fused_best_position_count = c.fused_best_position_count;
      for (int i = 0; i < 3; ++i) summary->mean_estimate_rmse[i] = c.mean_estimate_rmse[i];
    }
    if (table != nullptr) *table = dup_string(h::comparison_table(c));
  });
}

aerotact_status aerotact_texture_flight(const aerotact_scenario* scenario, const char* out_dir,
                                        aerotact_texture_summary* summary) {
  return guarded([&] {
    require(scenario, "scenario");
    std::filesystem::path dir;
    if (out_dir != nullptr) dir = out_dir;
    const h::TextureFlightResult r = h::texture_flight(scenario->value, out_dir != nullptr ? &dir : nullptr);
    if (summary != nullptr) {
      summary->frame_accuracy = r.frame_confusion.accuracy();
      summary->accumulated_accuracy = r.accumulated_confusion.accuracy();
      summary->segments = static_cast<int>(r.run.segments.size());
      int correct = 0;
      for (const auto& s : r.run.segments) correct += s.prediction == s.texture ? 1 : 0;
      summary->segments_correct = correct;
      summary->argmax_equivalent = r.argmax_equivalent ? 1 : 0;
    }
  });
}

aerotact_status aerotact_generate_dataset(const aerotact_scenario* scenario, const char* path) {
  return guarded([&] {
    require(scenario, "scenario");
    require(path, "path");
    const h::Scenario& sc = scenario->value;
    const aerotact::estimation::TrainingSet set =
        aerotact::estimation::generate_dataset(sc.pad, sc.dataset.ranges, sc.dataset.size, sc.dataset_seed());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw aerotact::Error(aerotact::ErrorCode::kIo, std::string("cannot open ") + path);
    aerotact::estimation::write_training_set(set, out);
    if (!out) throw aerotact::Error(aerotact::ErrorCode::kIo, std::string("write failed: ") + path);
  });
}

aerotact_status aerotact_metrics_from_csv(const char* path, char** json) {
  return guarded([&] {
    require(path, "path");
    require(json, "json");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw aerotact::Error(aerotact::ErrorCode::kIo, std::string("cannot open ") + path);
    const auto rows = h::read_control_csv(in);
    *json = dup_string(h::metrics_json(h::compute_metrics(rows)));
  });
}

}  // extern "C"
