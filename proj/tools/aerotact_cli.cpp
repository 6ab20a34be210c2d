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

// aerotact command line front end. Links only the C interface.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "aerotact/aerotact.h"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  bool image_path = false;
  bool dump_frames = false;
};

int report(aerotact_status status) {
  if (status == AEROTACT_OK) return 0;
  std::fprintf(stderr, "error [%s]: %s\n", aerotact_status_name(status), aerotact_last_error());
  return status == AEROTACT_ERR_CONFIG ? 2 : 1;
}

// Owns a scenario handle for the duration of a command.
class ScenarioHandle {
 public:
  ~ScenarioHandle() { aerotact_scenario_free(ptr_); }
  aerotact_scenario* get() const { return ptr_; }
  aerotact_scenario** out() { return &ptr_; }

 private:
  aerotact_scenario* ptr_ = nullptr;
};

aerotact_status load(const Common& c, ScenarioHandle& sc) {
  const std::string prefix = "builtin:";
  aerotact_status st = c.config.rfind(prefix, 0) == 0
                           ? aerotact_scenario_builtin(c.config.c_str() + prefix.size(), sc.out())
                           : aerotact_scenario_load(c.config.c_str(), sc.out());
  if (st != AEROTACT_OK) return st;
  if (c.seed) st = aerotact_scenario_set_seed(sc.get(), *c.seed);
  if (st == AEROTACT_OK && c.image_path) st = aerotact_scenario_set_image_path(sc.get(), 1);
  return st;
}

int cmd_run(const Common& c, const std::string& mode) {
  ScenarioHandle sc;
  aerotact_status st = load(c, sc);
  if (st == AEROTACT_OK && !mode.empty()) st = aerotact_scenario_set_sensor_mode(sc.get(), mode.c_str());
  if (st != AEROTACT_OK) return report(st);
  aerotact_result* result = nullptr;
  st = aerotact_run(sc.get(), c.dump_frames ? 1 : 0, &result);
  if (st == AEROTACT_OK) st = aerotact_result_write(result, c.out_dir.c_str());
  if (st == AEROTACT_OK) {
    char* json = nullptr;
    st = aerotact_result_metrics_json(result, &json);
    if (st == AEROTACT_OK) std::printf("%s", json);
    aerotact_string_free(json);
    if (!aerotact_result_mission_complete(result)) std::fprintf(stderr, "warning: mission incomplete\n");
  }
  aerotact_result_free(result);
  return report(st);
}

int cmd_compare(const Common& c, int replicates) {
  ScenarioHandle sc;
  aerotact_status st = load(c, sc);
  if (st != AEROTACT_OK) return report(st);
  aerotact_comparison_summary summary{};
  char* table = nullptr;
  st = aerotact_compare_modes(sc.get(), replicates, c.out_dir.c_str(), &summary, &table);
  if (st == AEROTACT_OK) std::printf("%s", table);
  aerotact_string_free(table);
  return report(st);
}

int cmd_texture(const Common& c) {
  ScenarioHandle sc;
  aerotact_status st = load(c, sc);
  if (st != AEROTACT_OK) return report(st);
  aerotact_texture_summary s{};
  st = aerotact_texture_flight(sc.get(), c.out_dir.c_str(), &s);
  if (st == AEROTACT_OK) {
    std::printf("frame accuracy        %.4f\n", s.frame_accuracy);
    std::printf("accumulated accuracy  %.4f\n", s.accumulated_accuracy);
    std::printf("segments correct      %d/%d\n", s.segments_correct, s.segments);
    std::printf("argmax equivalent     %s\n", s.argmax_equivalent ? "yes" : "no");
  }
  return report(st);
}

int cmd_dataset(const Common& c, const std::string& output) {
  ScenarioHandle sc;
  aerotact_status st = load(c, sc);
  if (st != AEROTACT_OK) return report(st);
  std::string path = output;
  if (path.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(c.out_dir, ec);
    path = (std::filesystem::path(c.out_dir) / "dataset.csv").string();
  }
  st = aerotact_generate_dataset(sc.get(), path.c_str());
  if (st == AEROTACT_OK) std::printf("%s\n", path.c_str());
  return report(st);
}

int cmd_metrics(const std::string& csv) {
  char* json = nullptr;
  const aerotact_status st = aerotact_metrics_from_csv(csv.c_str(), &json);
  if (st == AEROTACT_OK) std::printf("%s", json);
  aerotact_string_free(json);
  return report(st);
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("config", c.config, "Scenario JSON file or builtin:<name>")->required();
  app->add_option("--seed", c.seed, "Override the scenario seed");
  app->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
  app->add_flag("--image-path", c.image_path, "Render and track tactile images");
  app->add_flag("--dump-frames", c.dump_frames, "Write rendered tactile frames as PGM");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aerotact: aerial tactile contact simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", aerotact_version());

  Common run_opts, cmp_opts, tex_opts, data_opts;
  std::string mode;
  int replicates = 10;
  std::string dataset_out;
  std::string csv;

  CLI::App* run = app.add_subcommand("run", "Run one scenario");
  add_common(run, run_opts);
  run->add_option("--mode", mode, "Sensor mode override")
      ->check(CLI::IsMember({"ft-only", "tactile-only", "fused"}));

  CLI::App* cmp = app.add_subcommand("compare-modes", "Compare sensor modes over seeded replicates");
  add_common(cmp, cmp_opts);
  cmp->add_option("--replicates", replicates, "Replicate count")->capture_default_str()->check(CLI::PositiveNumber);

  CLI::App* tex = app.add_subcommand("texture-flight", "Fly the texture panels and score recognition");
  add_common(tex, tex_opts);

  CLI::App* data = app.add_subcommand("gen-dataset", "Write the kNN training set");
  add_common(data, data_opts);
  data->add_option("-o,--output", dataset_out, "Dataset CSV path (default <out-dir>/dataset.csv)");

  CLI::App* met = app.add_subcommand("metrics", "Recompute metrics from control.csv");
  met->add_option("csv", csv, "control.csv log")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(run_opts, mode);
  if (cmp->parsed()) return cmd_compare(cmp_opts, replicates);
  if (tex->parsed()) return cmd_texture(tex_opts);
  if (data->parsed()) return cmd_dataset(data_opts, dataset_out);
  return cmd_metrics(csv);
}
