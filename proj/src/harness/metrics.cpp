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
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "aerotact/harness.hpp"

namespace aerotact::harness {

namespace {

constexpr double kSettlingBand = 0.5;  // N
constexpr double kSteadyWindow = 5.0;  // s

struct Interval {
  std::size_t begin;
  std::size_t end;  // exclusive
};

std::vector<Interval> contact_intervals(const std::vector<ControlRow>& rows) {
  std::vector<Interval> out;
  for (std::size_t i = 0; i < rows.size();) {
    if (rows[i].lambda != 1) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < rows.size() && rows[j].lambda == 1) ++j;
    out.push_back({i, j});
    i = j;
  }
  return out;
}

// Overshoot: max(F - F_ref) after the first upward crossing. Undershoot:
// max(F_ref - F) after the first peak, the peak being the maximum between the
// first crossing and the next downward crossing.
void transient(const std::vector<ControlRow>& rows, const Interval& iv, double& overshoot, double& undershoot) {
  std::size_t cross = iv.end;
  for (std::size_t i = iv.begin; i < iv.end; ++i) {
    if (rows[i].force_true.z() >= rows[i].force_reference) {
      cross = i;
      break;
    }
  }
  if (cross == iv.end) return;
  std::size_t down = iv.end;
  std::size_t peak = cross;
  for (std::size_t i = cross; i < iv.end; ++i) {
    const double e = rows[i].force_true.z() - rows[i].force_reference;
    overshoot = std::max(overshoot, e);
    if (down == iv.end) {
      if (e < 0.0) {
        down = i;
      } else if (rows[i].force_true.z() > rows[peak].force_true.z()) {
        peak = i;
      }
    }
  }
  if (down == iv.end) return;
  for (std::size_t i = peak; i < iv.end; ++i) {
    undershoot = std::max(undershoot, rows[i].force_reference - rows[i].force_true.z());
  }
}

}  // namespace

RunMetrics compute_metrics(const std::vector<ControlRow>& rows) {
  const std::vector<Interval> intervals = contact_intervals(rows);
  if (intervals.empty()) throw Error(ErrorCode::kNoContactWindow, "compute_metrics: log has no contact window (lambda = 1)");
  const double dt = rows.size() > 1 ? rows[1].t - rows[0].t : 0.0;

  RunMetrics m;
  double force_sq = 0.0, pos_sq = 0.0, pos_sum = 0.0, est_sq = 0.0;
  std::size_t count = 0;
  for (const Interval& iv : intervals) {
    for (std::size_t i = iv.begin; i < iv.end; ++i) {
      const ControlRow& r = rows[i];
      const double e = r.force_true.z() - r.force_reference;
      force_sq += e * e;
      const double p = (r.position - r.operating_position).norm();
      pos_sq += p * p;
      pos_sum += p;
      est_sq += (r.force_estimate - r.force_true).squaredNorm();
      ++count;
    }
    transient(rows, iv, m.force_overshoot, m.force_undershoot);
    m.contact_duration += rows[iv.end - 1].t - rows[iv.begin].t + dt;
  }
  const double n = static_cast<double>(count);
  m.force_rmse = std::sqrt(force_sq / n);
  m.position_rmse_mm = 1000.0 * std::sqrt(pos_sq / n);
  const double mean = pos_sum / n;
  m.position_std_mm = 1000.0 * std::sqrt(std::max(0.0, pos_sq / n - mean * mean));
  m.estimate_rmse = std::sqrt(est_sq / n);

  const Interval& first = intervals.front();
  std::size_t settled = first.begin;
  for (std::size_t i = first.begin; i < first.end; ++i) {
    if (std::abs(rows[i].force_true.z() - rows[i].force_reference) > kSettlingBand) settled = i + 1;
  }
  m.settling_time = settled == first.begin ? 0.0
                    : settled == first.end ? rows[first.end - 1].t - rows[first.begin].t + dt
                                           : rows[settled].t - rows[first.begin].t;

  const Interval& last = intervals.back();
  const double t_end = rows[last.end - 1].t;
  double ss_sum = 0.0;
  std::size_t ss_n = 0;
  for (std::size_t i = last.begin; i < last.end; ++i) {
    if (rows[i].t < t_end - kSteadyWindow + 0.5 * dt) continue;
    ss_sum += std::abs(rows[i].force_true.z() - rows[i].force_reference);
    ++ss_n;
  }
  m.steady_state_error = ss_sum / static_cast<double>(ss_n);
  return m;
}

namespace {

constexpr const char* kControlHeader =
    "t,phase,lambda,px,py,pz,sp_x,sp_y,sp_z,op_x,op_y,op_z,ep_x,ep_y,ep_z,"
    "f_true_x,f_true_y,f_true_z,f_est_x,f_est_y,f_est_z,f_ref,ef_x,ef_y,ef_z,"
    "taup_fx,taup_fy,taup_fz,taup_mx,taup_my,taup_mz,"
    "tauf_fx,tauf_fy,tauf_fz,tauf_mx,tauf_my,tauf_mz,"
    "tau_fx,tau_fy,tau_fz,tau_mx,tau_my,tau_mz,saturated,windup";

void append(std::string& line, double v) {
  line += ',';
  fmt::format_to(std::back_inserter(line), "{}", v);
}

void append(std::string& line, const Vec3& v) {
  for (int i = 0; i < 3; ++i) append(line, v(i));
}

void append(std::string& line, const Vec6& v) {
  for (int i = 0; i < 6; ++i) append(line, v(i));
}

}  // namespace

void write_control_csv(const std::vector<ControlRow>& rows, std::ostream& out) {
  out << kControlHeader << '\n';
  std::string line;
  for (const ControlRow& r : rows) {
    line = fmt::format("{},{},{}", r.t, r.phase, r.lambda);
    append(line, r.position);
    append(line, r.setpoint);
    append(line, r.operating_position);
    append(line, r.position_error);
    append(line, r.force_true);
    append(line, r.force_estimate);
    append(line, r.force_reference);
    append(line, r.force_error);
    append(line, r.tau_p);
    append(line, r.tau_f);
    append(line, r.tau);
    fmt::format_to(std::back_inserter(line), ",{},{}\n", r.saturated, r.windup);
    out << line;
  }
}

std::vector<ControlRow> read_control_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kIo, "control log is empty");
  if (line != kControlHeader) throw Error(ErrorCode::kIo, "control log header does not match the expected columns");
  std::vector<ControlRow> rows;
  std::vector<double> v;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    v.clear();
    const char* p = line.c_str();
    while (true) {
      char* end = nullptr;
      const double x = std::strtod(p, &end);
      if (end == p) throw Error(ErrorCode::kIo, fmt::format("control log line {}: malformed number", line_no));
      v.push_back(x);
      if (*end == '\0') break;
      if (*end != ',') throw Error(ErrorCode::kIo, fmt::format("control log line {}: expected ','", line_no));
      p = end + 1;
    }
    if (v.size() != 45) {
      throw Error(ErrorCode::kIo, fmt::format("control log line {}: {} columns, expected 45", line_no, v.size()));
    }
    ControlRow r;
    std::size_t k = 0;
    const auto vec3 = [&] {
      Vec3 out(v[k], v[k + 1], v[k + 2]);
      k += 3;
      return out;
    };
    const auto vec6 = [&] {
      Vec6 out;
      for (int i = 0; i < 6; ++i) out(i) = v[k + i];
      k += 6;
      return out;
    };
    r.t = v[k++];
    r.phase = static_cast<int>(v[k++]);
    r.lambda = static_cast<int>(v[k++]);
    r.position = vec3();
    r.setpoint = vec3();
    r.operating_position = vec3();
    r.position_error = vec3();
    r.force_true = vec3();
    r.force_estimate = vec3();
    r.force_reference = v[k++];
    r.force_error = vec3();
    r.tau_p = vec6();
    r.tau_f = vec6();
    r.tau = vec6();
    r.saturated = static_cast<int>(v[k++]);
    r.windup = static_cast<int>(v[k++]);
    rows.push_back(r);
  }
  return rows;
}

void write_tactile_csv(const std::vector<TactileRow>& rows, std::ostream& out) {
  out << "t,frame,contact,mean_disp_mm,f_tac_x,f_tac_y,f_tac_z,f_true_x,f_true_y,f_true_z,tracked\n";
  std::string line;
  for (const TactileRow& r : rows) {
    line = fmt::format("{},{},{},{}", r.t, r.frame, r.contact, r.mean_displacement);
    append(line, r.force_tactile);
    append(line, r.force_true);
    fmt::format_to(std::back_inserter(line), ",{}\n", r.tracked);
    out << line;
  }
}

void write_estimator_csv(const std::vector<EstimatorRow>& rows, std::ostream& out) {
  out << "t,f_ft_x,f_ft_y,f_ft_z,f_tac_x,f_tac_y,f_tac_z,f_c_x,f_c_y,f_c_z,p_xx,p_yy,p_zz\n";
  std::string line;
  for (const EstimatorRow& r : rows) {
    line = fmt::format("{}", r.t);
    append(line, r.force_ft);
    append(line, r.force_tactile);
    append(line, r.force_fused);
    append(line, r.variance);
    line += '\n';
    out << line;
  }
}

void write_texture_csv(const std::vector<TextureRow>& rows, std::ostream& out) {
  out << "t,truth";
  for (int i = 0; i < texture::kClassCount; ++i) out << ",p" << i;
  for (int i = 0; i < texture::kClassCount; ++i) out << ",s" << i;
  out << ",frame_prediction,prediction,argmax_agrees\n";
  std::string line;
  for (const TextureRow& r : rows) {
    line = fmt::format("{},{}", r.t, texture::class_name(r.truth));
    for (double p : r.p) append(line, p);
    for (double s : r.s) append(line, s);
    fmt::format_to(std::back_inserter(line), ",{},{},{}\n", texture::class_name(r.frame_prediction),
                   texture::class_name(r.prediction), r.argmax_agrees);
    out << line;
  }
}

std::string metrics_json(const RunMetrics& m) {
  return fmt::format(
      "{{\n"
      "  \"force_rmse_n\": {},\n"
      "  \"force_overshoot_n\": {},\n"
      "  \"force_undershoot_n\": {},\n"
      "  \"position_rmse_mm\": {},\n"
      "  \"position_std_mm\": {},\n"
      "  \"settling_time_s\": {},\n"
      "  \"steady_state_error_n\": {},\n"
      "  \"estimate_rmse_n\": {},\n"
      "  \"contact_duration_s\": {}\n"
      "}}\n",
      m.force_rmse, m.force_overshoot, m.force_undershoot, m.position_rmse_mm, m.position_std_mm, m.settling_time,
      m.steady_state_error, m.estimate_rmse, m.contact_duration);
}

std::string metrics_json(const RunResult& r) {
  std::string out = "{\n";
  fmt::format_to(std::back_inserter(out), "  \"scenario\": \"{}\",\n", r.scenario.name);
  fmt::format_to(std::back_inserter(out), "  \"sensor_mode\": \"{}\",\n", sensor_mode_name(r.scenario.sensor_mode));
  fmt::format_to(std::back_inserter(out), "  \"seed\": {},\n", r.scenario.seed);
  fmt::format_to(std::back_inserter(out), "  \"mission_complete\": {},\n", r.mission_complete);
  fmt::format_to(std::back_inserter(out), "  \"duration_s\": {},\n", r.control.empty() ? 0.0 : r.control.back().t);
  fmt::format_to(std::back_inserter(out), "  \"tracking_rmse_mm\": {},\n", r.tracking_rmse_mm);
  if (r.texture_frame_accuracy) {
    fmt::format_to(std::back_inserter(out), "  \"texture_frame_accuracy\": {},\n", *r.texture_frame_accuracy);
  }
  if (r.texture_post_contact_accuracy) {
    fmt::format_to(std::back_inserter(out), "  \"texture_post_contact_accuracy\": {},\n",
                   *r.texture_post_contact_accuracy);
  }
  if (r.metrics) {
    std::string inner = metrics_json(*r.metrics);
    // Indent the nested object.
    std::string indented;
    for (char c : inner.substr(0, inner.size() - 1)) {
      indented += c;
      if (c == '\n') indented += "  ";
    }
    fmt::format_to(std::back_inserter(out), "  \"metrics\": {}\n", indented);
  } else {
    out += "  \"metrics\": null\n";
  }
  out += "}\n";
  return out;
}

}  // namespace aerotact::harness
