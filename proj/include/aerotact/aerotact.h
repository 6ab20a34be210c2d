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

/* C interface to the aerotact simulator.
 *
 * Every function returns an aerotact_status. On failure the message for the
 * calling thread is available from aerotact_last_error() until the next call
 * on that thread. Strings handed out by the library are released with
 * aerotact_string_free(). */

#ifndef AEROTACT_AEROTACT_H_
#define AEROTACT_AEROTACT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AEROTACT_API __declspec(dllexport)
#else
#define AEROTACT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aerotact_status {
  AEROTACT_OK = 0,
  AEROTACT_ERR_INVALID_ARGUMENT = 1,
  AEROTACT_ERR_DEGENERATE_GEOMETRY = 2,
  AEROTACT_ERR_DIVERGENCE = 3,
  AEROTACT_ERR_TRACKING_LOSS = 4,
  AEROTACT_ERR_DIMENSION_MISMATCH = 5,
  AEROTACT_ERR_SENSOR_FAULT = 6,
  AEROTACT_ERR_EMPTY_TRAINING_SET = 7,
  AEROTACT_ERR_UNTRAINED_MODEL = 8,
  AEROTACT_ERR_FRAME_MISMATCH = 9,
  AEROTACT_ERR_NO_CONTACT_WINDOW = 10,
  AEROTACT_ERR_LENGTH_MISMATCH = 11,
  AEROTACT_ERR_CONFIG = 12,
  AEROTACT_ERR_IO = 13,
  AEROTACT_ERR_INTERNAL = 100
} aerotact_status;

typedef struct aerotact_scenario aerotact_scenario;
typedef struct aerotact_result aerotact_result;

typedef struct aerotact_metrics {
  double force_rmse;         /* N */
  double force_overshoot;    /* N */
  double force_undershoot;   /* N */
  double position_rmse_mm;
  double position_std_mm;
  double settling_time;      /* s */
  double steady_state_error; /* N */
  double estimate_rmse;      /* N */
  double contact_duration;   /* s */
} aerotact_metrics;

typedef struct aerotact_texture_summary {
  double frame_accuracy;
  double accumulated_accuracy;
  int segments;
  int segments_correct;
  int argmax_equivalent;
} aerotact_texture_summary;

typedef struct aerotact_comparison_summary {
  int replicates;
  int fused_best_position_count;
  double mean_estimate_rmse[3]; /* ft-only, tactile-only, fused */
} aerotact_comparison_summary;

AEROTACT_API const char* aerotact_version(void);
AEROTACT_API const char* aerotact_status_name(aerotact_status status);
AEROTACT_API const char* aerotact_last_error(void);
AEROTACT_API void aerotact_string_free(char* str);

/* Scenarios. `name` is "nominal-push" or "texture-flight". */
AEROTACT_API aerotact_status aerotact_scenario_builtin(const char* name, aerotact_scenario** out);
AEROTACT_API aerotact_status aerotact_scenario_load(const char* path, aerotact_scenario** out);
AEROTACT_API aerotact_status aerotact_scenario_parse(const char* json, aerotact_scenario** out);
AEROTACT_API aerotact_status aerotact_scenario_to_json(const aerotact_scenario* scenario, char** out);
AEROTACT_API aerotact_status aerotact_scenario_set_seed(aerotact_scenario* scenario, uint64_t seed);
AEROTACT_API aerotact_status aerotact_scenario_set_image_path(aerotact_scenario* scenario, int enabled);
AEROTACT_API aerotact_status aerotact_scenario_set_sensor_mode(aerotact_scenario* scenario,
                                                              const char* mode);
AEROTACT_API void aerotact_scenario_free(aerotact_scenario* scenario);

/* Single run. keep_frames retains rendered tactile images for dumping. */
AEROTACT_API aerotact_status aerotact_run(const aerotact_scenario* scenario, int keep_frames,
                                          aerotact_result** out);
AEROTACT_API aerotact_status aerotact_result_metrics(const aerotact_result* result,
                                                     aerotact_metrics* out);
AEROTACT_API aerotact_status aerotact_result_metrics_json(const aerotact_result* result, char** out);
AEROTACT_API int aerotact_result_mission_complete(const aerotact_result* result);
AEROTACT_API size_t aerotact_result_rows(const aerotact_result* result);
AEROTACT_API aerotact_status aerotact_result_write(const aerotact_result* result, const char* dir);
AEROTACT_API void aerotact_result_free(aerotact_result* result);

/* Experiments. out_dir may be NULL to skip writing artifacts. */
AEROTACT_API aerotact_status aerotact_compare_modes(const aerotact_scenario* scenario,
                                                    int replicates, const char* out_dir,
                                                    aerotact_comparison_summary* summary,
                                                    char** table);
AEROTACT_API aerotact_status aerotact_texture_flight(const aerotact_scenario* scenario,
                                                     const char* out_dir,
                                                     aerotact_texture_summary* summary);

/* Writes the scenario's kNN training set as CSV. */
AEROTACT_API aerotact_status aerotact_generate_dataset(const aerotact_scenario* scenario,
                                                       const char* path);

/* Recomputes the run metrics from a control.csv log; returns JSON. */
AEROTACT_API aerotact_status aerotact_metrics_from_csv(const char* path, char** json);

#ifdef __cplusplus
}
#endif

#endif  // AEROTACT_AEROTACT_H_
