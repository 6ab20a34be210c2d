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

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   aerotact_acceptance            run all criteria
//   aerotact_acceptance --only N   run criterion N

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "aerotact/control.hpp"
#include "aerotact/estimation.hpp"
#include "aerotact/harness.hpp"
#include "aerotact/sim.hpp"
#include "aerotact/tactile.hpp"
#include "aerotact/texture.hpp"

namespace {

using namespace aerotact;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return exp_so3(Vec3(n(rng), n(rng), n(rng)));
}

double orthonormality(const Mat3& r) { return (r.transpose() * r - Mat3::Identity()).norm(); }

Wrench no_wrench(const sim::SimState&) { return Wrench::zero(Frame::kBody); }

// 1. Free fall, energy, rotation drift.
Outcome dynamics_fidelity() {
  Outcome o;
  const auto t0 = Clock::now();
  const sim::VehicleParams p;

  sim::SimState s;
  s.position = Vec3(0, 0, 100);
  const sim::RotorVector zero{};
  double speed_err = 0.0;
  for (int i = 1; i <= 2000; ++i) {
    s = sim::step(s, zero, nullptr, p, 1e-3);
    speed_err = std::max(speed_err, std::abs((s.attitude * s.velocity).norm() - kGravity * i * 1e-3));
  }

  sim::SimState e;
  e.position = Vec3(0, 0, 50);
  e.velocity = Vec3(1.0, -0.5, 2.0);
  e.angular_velocity = Vec3(0.7, -1.3, 2.1);
  const double e0 = sim::mechanical_energy(e, p);
  double energy_err = 0.0, drift = 0.0;
  for (int i = 0; i < 10000; ++i) {
    e = sim::step(e, no_wrench, sim::StepInputs{}, p, 1e-3);
    energy_err = std::max(energy_err, std::abs(sim::mechanical_energy(e, p) - e0) / std::abs(e0));
    drift = std::max(drift, orthonormality(e.attitude));
  }
  const double elapsed = seconds_since(t0);
  o.check(speed_err < 1e-6, fmt::format("free-fall speed error {:.2e} m/s", speed_err));
  o.check(energy_err < 1e-5, fmt::format("energy drift {:.2e} rel", energy_err));
  o.check(drift < 1e-9, fmt::format("orthonormality {:.2e}", drift));
  o.check(elapsed < 5.0, fmt::format("{:.2f} s", elapsed));
  return o;
}

// 2. M dv/dt - tau - tau_c = 0 under feedback linearization.
Outcome feedback_linearization() {
  Outcome o;
  const auto t0 = Clock::now();
  const sim::VehicleParams p;
  const sim::InertiaTerms mt = sim::coriolis_and_inertia(p, Vec3::Zero());
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  const double dt = 1e-3;
  double worst = 0.0;
  for (int run = 0; run < 5; ++run) {
    sim::SimState s;
    s.position = Vec3(0, 0, 10);
    s.attitude = random_rotation(rng);
    s.angular_velocity = Vec3(n(rng), n(rng), n(rng)) * 2.0;
    for (int k = 0; k < 2000; ++k) {
      const Wrench tau{Vec3(n(rng), n(rng), n(rng)) * 5.0, Vec3(n(rng), n(rng), n(rng)), Frame::kBody};
      const sim::WrenchLaw law = [&](const sim::SimState& x) { return control::feedback_linearize(tau, x, p); };
      const sim::SimState next = sim::step(s, law, sim::StepInputs{}, p, dt);
      const Vec6 vdot = (next.twist() - s.twist()) / dt;
      const Vec6 tau_c = sim::contact_wrench(s, sim::WallModel{}, p).vector();
      const double residual = (mt.inertia * vdot - tau.vector() - tau_c).norm() / tau.vector().norm();
      worst = std::max(worst, residual);
      s = next;
    }
  }
  const double elapsed = seconds_since(t0);
  o.check(worst < 1e-6, fmt::format("max |M dv - tau - tau_c| / |tau| = {:.2e}", worst));
  o.check(elapsed < 10.0, fmt::format("{:.2f} s", elapsed));
  return o;
}

// 3. Allocation round trip and hover thrust.
Outcome allocation() {
  Outcome o;
  const sim::VehicleParams p;
  const sim::Allocator alloc(p);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.5, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    sim::RotorVector f0;
    for (double& f : f0) f = u(rng);
    const Wrench tau = alloc.wrench(f0);
    const sim::Allocation a = alloc.allocate(tau);
    worst = std::max(worst, (alloc.wrench(a.thrust).vector() - tau.vector()).norm());
  }
  const sim::Allocation hover = alloc.allocate(Wrench{Vec3(0, 0, p.mass * kGravity), Vec3::Zero(), Frame::kBody});
  const double closed = p.mass * kGravity / (6.0 * std::cos(kPi / 6.0));
  double hover_err = 0.0;
  for (double f : hover.thrust) hover_err = std::max(hover_err, std::abs(f - closed));
  o.check(worst < 1e-9, fmt::format("round trip {:.2e}", worst));
  o.check(hover_err < 1e-9, fmt::format("hover {:.4f} N, error {:.2e}", closed, hover_err));
  return o;
}

// 4. Selection projector and lambda = 0 equivalence.
Outcome hybrid_selection() {
  Outcome o;
  const sim::VehicleParams p;
  const sim::WallModel wall;
  sim::StepInputs in;
  in.wall = &wall;
  const control::MotionSetpoint sp = control::MotionSetpoint::hold(Vec3(0.55, 0.02, 1.45), 0.05);
  sim::SimState a;
  a.position = Vec3(0.3, -0.05, 1.5);
  a.angular_velocity = Vec3(0.3, 0.1, -0.2);
  sim::SimState b = a;
  control::HybridConfig off;
  off.lambda = 0;
  const sim::WrenchLaw pure = [&](const sim::SimState& x) {
    return control::feedback_linearize(
        control::motion_wrench(x, sp, control::MotionGains{}, p, control::GravityFeedforward::kExclude), x, p);
  };
  const sim::WrenchLaw hybrid = [&](const sim::SimState& x) {
    const Wrench tp = control::motion_wrench(x, sp, control::MotionGains{}, p, control::GravityFeedforward::kExclude);
    control::ForceIntegrator integ;
    const control::ForceCommand tf =
        control::force_wrench(Vec3(0.2, -0.1, 2.0), off, control::ForceGains{}, x, integ, 1e-3);
    return control::feedback_linearize(control::hybrid_combine(tp, tf.wrench, control::selection_matrix(off)), x, p);
  };
  bool identical = true;
  bool touched = false;
  for (int i = 0; i < 5000; ++i) {
    a = sim::step(a, pure, in, p, 1e-3);
    b = sim::step(b, hybrid, in, p, 1e-3);
    touched = touched || sim::contact(a, wall, p).in_contact;
    identical = identical && a.position == b.position && a.attitude == b.attitude &&
                a.velocity == b.velocity && a.angular_velocity == b.angular_velocity;
  }

  std::mt19937_64 rng(4);
  double idem = 0.0, sym = 0.0;
  for (int i = 0; i < 1000; ++i) {
    control::HybridConfig c;
    c.lambda = 1;
    c.tool_rotation = random_rotation(rng);
    const Mat6 s = control::selection_matrix(c);
    idem = std::max(idem, (s * s - s).norm());
    sym = std::max(sym, (s - s.transpose()).norm());
  }
  o.check(identical, fmt::format("lambda=0 bit-identical over 5000 steps{}", touched ? " with contact" : ""));
  o.check(idem < 1e-12, fmt::format("idempotence {:.1e}", idem));
  o.check(sym < 1e-12, fmt::format("symmetry {:.1e}", sym));
  return o;
}

// 5. Nominal push steady state and transient.
Outcome force_tracking() {
  Outcome o;
  const auto t0 = Clock::now();
  const harness::RunResult r = harness::run_scenario(harness::nominal_push_scenario());
  const double elapsed = seconds_since(t0);
  if (!r.metrics) {
    o.check(false, "no contact window");
    return o;
  }
  const harness::RunMetrics& m = *r.metrics;
  o.check(r.mission_complete, "mission complete");
  o.check(m.steady_state_error < 0.2, fmt::format("steady-state |F-5| {:.4f} N", m.steady_state_error));
  o.check(m.force_overshoot > 0.0, fmt::format("overshoot {:.3f} N", m.force_overshoot));
  o.check(m.force_undershoot > 0.0, fmt::format("undershoot {:.3f} N", m.force_undershoot));
  o.check(elapsed < 30.0, fmt::format("{:.2f} s", elapsed));
  return o;
}

// 6. Sensor-mode ordering over 10 replicates.
Outcome sensor_modes() {
  Outcome o;
  const auto t0 = Clock::now();
  const harness::ModeComparison c = harness::compare_sensor_modes(harness::nominal_push_scenario(), 10);
  const double elapsed = seconds_since(t0);
  const auto& e = c.mean_estimate_rmse;
  o.check(c.fused_best_position_count >= 8,
          fmt::format("fused position RMSE lowest in {}/10", c.fused_best_position_count));
  o.check(e[2] < e[0] && e[2] < e[1],
          fmt::format("mean estimate RMSE ft {:.5f} / tac {:.5f} / fused {:.5f} N", e[0], e[1], e[2]));
  o.check(elapsed < 300.0, fmt::format("{:.1f} s", elapsed));
  return o;
}

// 7. Kalman update algebra and covariance dominance.
double steady_variance(bool ft, bool tac) {
  const estimation::NoiseConfig noise;
  estimation::FusionState s;
  long frame = 0;
  for (long tick = 0; tick < 10000; ++tick) {
    s = estimation::kf_predict(s, noise, 1e-3);
    if (ft) s = estimation::kf_update(s, Vec3::Zero(), estimation::Sensor::kForceTorque, noise);
    if (tac && tick == frame * 1000 / 30) {
      s = estimation::kf_update(s, Vec3::Zero(), estimation::Sensor::kTactile, noise);
      ++frame;
    }
  }
  return s.covariance.diagonal().maxCoeff();
}

Outcome kalman() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  double seq_err = 0.0, scalar_err = 0.0;
  for (int t = 0; t < 1000; ++t) {
    Mat3 a, b1, b2;
    for (int i = 0; i < 9; ++i) {
      a.data()[i] = n(rng);
      b1.data()[i] = 0.2 * n(rng);
      b2.data()[i] = 0.5 * n(rng);
    }
    estimation::FusionState s;
    s.force = Vec3(n(rng), n(rng), n(rng));
    s.covariance = a * a.transpose() + 0.05 * Mat3::Identity();
    estimation::NoiseConfig noise;
    noise.force_torque = b1 * b1.transpose() + 0.01 * Mat3::Identity();
    noise.tactile = b2 * b2.transpose() + 0.3 * Mat3::Identity();
    const Vec3 z1(n(rng), n(rng), n(rng)), z2(n(rng), n(rng), n(rng));
    const auto seq = estimation::kf_update(estimation::kf_update(s, z1, estimation::Sensor::kForceTorque, noise), z2,
                                           estimation::Sensor::kTactile, noise);
    Eigen::Matrix<double, 6, 3> h;
    h << Mat3::Identity(), Mat3::Identity();
    Mat6 r = Mat6::Zero();
    r.topLeftCorner<3, 3>() = noise.force_torque;
    r.bottomRightCorner<3, 3>() = noise.tactile;
    Vec6 z;
    z << z1, z2;
    const Eigen::Matrix<double, 3, 6> k = s.covariance * h.transpose() * (h * s.covariance * h.transpose() + r).inverse();
    const Vec3 x = s.force + k * (z - h * s.force);
    const Mat3 pp = (Mat3::Identity() - k * h) * s.covariance;
    seq_err = std::max({seq_err, (seq.force - x).norm(), (seq.covariance - pp).norm()});

    const double pv = std::exp(n(rng)), rv = std::exp(n(rng));
    estimation::FusionState sc;
    sc.covariance = pv * Mat3::Identity();
    estimation::NoiseConfig ns;
    ns.force_torque = rv * Mat3::Identity();
    const auto post = estimation::kf_update(sc, z1, estimation::Sensor::kForceTorque, ns);
    scalar_err = std::max(scalar_err, (post.covariance - pv * rv / (pv + rv) * Mat3::Identity()).cwiseAbs().maxCoeff());
  }
  const double fused = steady_variance(true, true);
  const double ft = steady_variance(true, false);
  const double tac = steady_variance(false, true);
  o.check(seq_err < 1e-10, fmt::format("sequential vs stacked {:.1e}", seq_err));
  o.check(scalar_err < 1e-12, fmt::format("p r/(p+r) {:.1e}", scalar_err));
  o.check(fused <= ft && fused <= tac, fmt::format("steady variance fused {:.3e} ft {:.3e} tac {:.3e}", fused, ft, tac));
  return o;
}

// 8. kNN force estimation accuracy and exactness.
Vec3 linear_scan(const tactile::TactileFeature& q, const estimation::TrainingSet& set, int k,
                 std::vector<std::pair<double, int>>& scratch) {
  scratch.clear();
  for (std::size_t i = 0; i < set.size(); ++i) {
    double d = 0.0;
    for (int j = 0; j < tactile::kFeatureSize; ++j) {
      const double x = set.features[i].values[j] - q.values[j];
      d += x * x;
    }
    scratch.emplace_back(d, static_cast<int>(i));
  }
  std::partial_sort(scratch.begin(), scratch.begin() + k, scratch.end());
  Vec3 sum = Vec3::Zero();
  for (int i = 0; i < k; ++i) sum += set.forces[scratch[i].second];
  return sum / static_cast<double>(k);
}

tactile::TactileFeature grid_feature(const tactile::GelPadModel& pad, const Vec3& f) {
  const auto field = tactile::marker_displacements(Wrench{f, Vec3::Zero(), Frame::kEndEffector}, pad, Vec2::Zero(), 0u);
  return tactile::feature_vector(field, pad);
}

Outcome knn() {
  Outcome o;
  const estimation::KnnConfig cfg;
  const tactile::GelPadModel pad;
  auto t0 = Clock::now();
  const auto train = estimation::generate_dataset(pad, estimation::ForceRanges{}, 10000, 81);
  const auto test = estimation::generate_dataset(pad, estimation::ForceRanges{}, 1300, 82);
  const estimation::KnnRegressor reg(train, cfg);
  double sq = 0.0;
  int mismatches = 0;
  std::vector<std::pair<double, int>> scratch;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const Vec3 est = reg.estimate(test.features[i]);
    sq += (est - test.forces[i]).squaredNorm();
    if (est != linear_scan(test.features[i], train, cfg.k, scratch)) ++mismatches;
  }
  const double default_rmse = std::sqrt(sq / static_cast<double>(test.size()));
  const double default_time = seconds_since(t0);

  // Noise-free forward model, force grid at 0.125 N around the nominal contact centre.
  tactile::GelPadModel clean = pad;
  clean.marker_noise = 0.0;
  estimation::TrainingSet grid;
  const double h = 0.125;
  for (int ix = 0; ix <= 48; ++ix)
    for (int iy = 0; iy <= 48; ++iy)
      for (int iz = 0; iz <= 80; ++iz) {
        grid.forces.emplace_back(-3.0 + h * ix, -3.0 + h * iy, h * iz);
        grid.features.push_back(grid_feature(clean, grid.forces.back()));
      }
  const estimation::KnnRegressor dense(grid, cfg);
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> shear(-3.0, 3.0), normal(0.0, 10.0);
  double dense_sq = 0.0;
  for (int i = 0; i < 1300; ++i) {
    const Vec3 f(shear(rng), shear(rng), normal(rng));
    dense_sq += (dense.estimate(grid_feature(clean, f)) - f).squaredNorm();
  }
  const double dense_rmse = std::sqrt(dense_sq / 1300.0);

  o.check(default_rmse <= 1.0, fmt::format("held-out RMSE {:.3f} N (1300 pts, N=10000, K={})", default_rmse, cfg.k));
  o.check(dense_rmse <= 0.1, fmt::format("noise-free dense RMSE {:.3f} N (N={})", dense_rmse, grid.size()));
  o.check(mismatches == 0, fmt::format("{} oracle mismatches", mismatches));
  o.check(default_time < 60.0, fmt::format("{:.1f} s for the 10000-point set", default_time));
  return o;
}

// 9. Render-then-track recovery.
Outcome marker_tracking() {
  Outcome o;
  const tactile::GelPadModel pad;
  const tactile::TactileImage ref =
      tactile::render_tactile_image(tactile::MarkerField::at_rest(pad), std::nullopt, pad, 1u);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> shear(-3.0, 3.0), normal(0.0, 10.0), centre(-2.0, 2.0), mag(0.05, 1.5);
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const Wrench w{Vec3(shear(rng), shear(rng), normal(rng)), Vec3::Zero(), Frame::kEndEffector};
    tactile::MarkerField field = tactile::marker_displacements(w, pad, Vec2(centre(rng), centre(rng)), rng);
    double peak = 0.0;
    for (const Vec2& d : field.displacement) peak = std::max(peak, d.norm());
    const double scale = mag(rng) / std::max(peak, 1e-12);
    for (Vec2& d : field.displacement) d *= scale;
    try {
      const tactile::TactileImage img = tactile::render_tactile_image(field, std::nullopt, pad, 100u + i);
      const tactile::MarkerField tracked = tactile::track_markers(ref, img, pad);
      double sq = 0.0;
      int n = 0;
      for (int idx : pad.tracked_indices()) {
        sq += (tracked.displacement[idx] - field.displacement[idx]).squaredNorm();
        ++n;
      }
      worst = std::max(worst, std::sqrt(sq / n) * pad.px_per_mm);
    } catch (const Error&) {
      ++failures;
    }
  }
  o.check(failures == 0, fmt::format("{} tracking losses", failures));
  o.check(worst < 0.2, fmt::format("worst per-field RMS {:.4f} px over 100 fields", worst));
  return o;
}

// 10. Texture flight.
Outcome texture_recognition() {
  Outcome o;
  const auto t0 = Clock::now();
  const harness::TextureFlightResult r = harness::texture_flight(harness::texture_flight_scenario());
  const double elapsed = seconds_since(t0);
  int correct = 0;
  double min_contact = 1e9;
  for (const auto& s : r.run.segments) {
    correct += s.prediction == s.texture ? 1 : 0;
    min_contact = std::min(min_contact, s.contact_time);
  }
  const int segments = static_cast<int>(r.run.segments.size());
  o.check(segments == 12 && min_contact >= 10.0,
          fmt::format("{} engagements, shortest contact {:.2f} s", segments, min_contact));
  o.check(r.frame_confusion.accuracy() >= 0.93, fmt::format("per-frame accuracy {:.4f}", r.frame_confusion.accuracy()));
  o.check(correct == segments, fmt::format("post-contact {}/{}", correct, segments));
  o.check(r.argmax_equivalent, "argmax equivalence on every frame");
  o.check(elapsed < 120.0, fmt::format("{:.1f} s", elapsed));
  return o;
}

// 11. CLI determinism.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "aerotact_acceptance_cli";
  fs::remove_all(root);
  const std::string cli = AEROTACT_CLI_PATH;
  const fs::path configs = AEROTACT_CONFIG_DIR;
  struct Command {
    std::string name;
    std::string args;
  };
  const std::vector<Command> commands = {
      {"run", "run " + (configs / "nominal_push.json").string() + " --seed 5"},
      {"run-image", "run " + (configs / "hover.json").string() + " --seed 5 --image-path --dump-frames"},
      {"compare-modes", "compare-modes " + (configs / "nominal_push.json").string() + " --seed 5 --replicates 2"},
      {"texture-flight", "texture-flight " + (configs / "texture_short.json").string() + " --seed 5"},
      {"gen-dataset", "gen-dataset " + (configs / "hover.json").string() + " --seed 5"},
  };
  int compared = 0;
  for (const Command& c : commands) {
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / c.name / std::to_string(rep);
      fs::create_directories(dir);
      // Same relative output directory each time, so printed paths match too.
      const std::string line =
          fmt::format("cd \"{}\" && \"{}\" {} --out-dir out > stdout.txt 2>&1", dir.string(), cli, c.args);
      if (std::system(line.c_str()) != 0) o.check(false, c.name + " exited non-zero");
    }
    for (const auto& entry : fs::recursive_directory_iterator(root / c.name / "0")) {
      if (!entry.is_regular_file()) continue;
      const fs::path rel = fs::relative(entry.path(), root / c.name / "0");
      const fs::path other = root / c.name / "1" / rel;
      if (slurp(entry.path()) != slurp(other)) o.check(false, c.name + ": " + rel.string() + " differs");
      ++compared;
    }
  }
  // metrics on a logged CSV, twice.
  const std::string csv = (root / "run" / "0" / "out" / "control.csv").string();
  std::string outputs[2];
  for (int rep = 0; rep < 2; ++rep) {
    const fs::path out = root / fmt::format("metrics_{}.txt", rep);
    const std::string line = fmt::format("\"{}\" metrics \"{}\" > \"{}\"", cli, csv, out.string());
    if (std::system(line.c_str()) != 0) o.check(false, "metrics exited non-zero");
    outputs[rep] = slurp(out);
  }
  if (outputs[0] != outputs[1] || outputs[0].empty()) o.check(false, "metrics output differs");
  ++compared;
  if (o.pass) o.check(true, fmt::format("{} outputs byte-identical across repeated invocations", compared));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  const std::vector<Criterion> criteria = {
      {1, "dynamics fidelity", dynamics_fidelity},
      {2, "feedback-linearization cancellation", feedback_linearization},
      {3, "allocation", allocation},
      {4, "hybrid selection", hybrid_selection},
      {5, "force tracking", force_tracking},
      {6, "sensor-mode ordering", sensor_modes},
      {7, "kalman properties", kalman},
      {8, "knn force estimation", knn},
      {9, "marker tracking", marker_tracking},
      {10, "texture recognition", texture_recognition},
      {11, "cli determinism", cli_determinism},
  };
  int failed = 0;
  int ran = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
