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
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "aerotact/harness.hpp"

namespace aerotact::harness {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::kConfig, path + ": " + message);
}

// Object view that remembers which keys were read so leftovers can be
// reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  std::string at(const char* key) const { return path_ + "." + key; }

  const json* find(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void read(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(at(key), "expected a number");
      out = v->get<double>();
    }
  }
  void read(const char* key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(at(key), "expected an integer");
      out = v->get<int>();
    }
  }
  void read(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(at(key), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void read(const char* key, std::optional<std::uint64_t>& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(at(key), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void read(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(at(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void read(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(at(key), "expected a string");
      out = v->get<std::string>();
    }
  }
  void read(const char* key, Vec3& out) {
    if (const json* v = find(key)) out = vec3(*v, at(key));
  }
  // Scalar s -> s I, 3-array -> diagonal, 3x3 nested array -> full matrix.
  void read(const char* key, Mat3& out) {
    if (const json* v = find(key)) out = mat3(*v, at(key));
  }

  std::optional<Section> child(const char* key) {
    if (const json* v = find(key)) return Section(*v, at(key));
    return std::nullopt;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (seen_.count(it.key()) == 0) fail(path_ + "." + it.key(), "unknown key");
    }
  }

  static Vec3 vec3(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) fail(path, "expected an array of 3 numbers");
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
      if (!v[i].is_number()) fail(path, "expected an array of 3 numbers");
      out(i) = v[i].get<double>();
    }
    return out;
  }

  static Mat3 mat3(const json& v, const std::string& path) {
    if (v.is_number()) return v.get<double>() * Mat3::Identity();
    if (v.is_array() && v.size() == 3 && v[0].is_number()) return vec3(v, path).asDiagonal();
    if (v.is_array() && v.size() == 3) {
      Mat3 out;
      for (int r = 0; r < 3; ++r) out.row(r) = vec3(v[r], path).transpose();
      return out;
    }
    fail(path, "expected a number, a 3-array diagonal or a 3x3 matrix");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

texture::TextureClass texture_from(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a texture name");
  const auto c = texture::class_from_name(v.get<std::string>());
  if (!c || *c == texture::TextureClass::kNonContact) fail(path, "unknown texture '" + v.get<std::string>() + "'");
  return *c;
}

PhaseKind phase_kind_from(const std::string& name, const std::string& path) {
  if (name == "hover") return PhaseKind::kHover;
  if (name == "goto") return PhaseKind::kGoto;
  if (name == "push") return PhaseKind::kPush;
  if (name == "retreat") return PhaseKind::kRetreat;
  fail(path, "unknown phase type '" + name + "'");
}

void read_vehicle(Section s, sim::VehicleParams& v) {
  s.read("mass", v.mass);
  s.read("inertia", v.inertia);
  s.read("arm_length", v.arm_length);
  double tilt_deg = v.tilt * 180.0 / kPi;
  s.read("tilt_deg", tilt_deg);
  v.tilt = tilt_deg * kPi / 180.0;
  s.read("thrust_coeff", v.thrust_coeff);
  s.read("drag_coeff", v.drag_coeff);
  s.read("min_rotor_speed", v.min_rotor_speed);
  s.read("max_rotor_speed", v.max_rotor_speed);
  s.read("tool_offset", v.tool_offset);
  s.read("motor_time_constant", v.motor_time_constant);
  s.finish();
}

void read_wall(Section s, Scenario& sc) {
  s.read("enabled", sc.wall_enabled);
  s.read("point", sc.wall.point);
  s.read("normal", sc.wall.normal);
  s.read("stiffness", sc.wall.stiffness);
  s.read("damping", sc.wall.damping);
  s.read("friction", sc.wall.friction);
  s.finish();
}

void read_pad(Section s, tactile::GelPadModel& p) {
  s.read("pitch", p.pitch);
  s.read("rows", p.rows);
  s.read("cols", p.cols);
  s.read("image_width", p.image_width);
  s.read("image_height", p.image_height);
  s.read("px_per_mm", p.px_per_mm);
  s.read("normal_compliance", p.normal_compliance);
  s.read("shear_compliance", p.shear_compliance);
  s.read("spread_radius", p.spread_radius);
  s.read("marker_noise", p.marker_noise);
  s.read("dot_sigma", p.dot_sigma);
  s.read("dot_depth", p.dot_depth);
  s.read("frame_rate", p.frame_rate);
  s.finish();
}

void read_noise(Section s, estimation::NoiseConfig& n) {
  s.read("process", n.process);
  s.read("force_torque", n.force_torque);
  s.read("tactile", n.tactile);
  s.finish();
}

void read_motion(Section s, control::MotionGains& g) {
  s.read("position", g.position);
  s.read("velocity", g.velocity);
  s.read("attitude", g.attitude);
  s.read("rate", g.rate);
  s.finish();
}

void read_force(Section s, control::ForceGains& g) {
  s.read("stiffness", g.stiffness);
  s.read("damping", g.damping);
  s.read("proportional", g.proportional);
  s.read("integral", g.integral);
  s.read("actual_mass", g.actual_mass);
  s.read("desired_mass", g.desired_mass);
  s.read("integral_clamp", g.integral_clamp);
  s.finish();
}

void read_interval(Section& s, const char* key, estimation::Interval& out) {
  if (const json* v = s.find(key)) {
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
      fail(s.at(key), "expected [lo, hi]");
    }
    out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
  }
}

void read_dataset(Section s, DatasetConfig& d) {
  std::uint64_t size = d.size;
  s.read("size", size);
  d.size = static_cast<std::size_t>(size);
  s.read("seed", d.seed);
  read_interval(s, "shear_x", d.ranges.shear_x);
  read_interval(s, "shear_y", d.ranges.shear_y);
  read_interval(s, "normal", d.ranges.normal);
  s.read("k", d.knn.k);
  s.read("distance_weighted", d.knn.distance_weighted);
  s.read("path", d.path);
  s.finish();
}

void read_texture(Section s, TextureConfig& t) {
  s.read("enabled", t.enabled);
  s.read("per_class", t.training.per_class);
  s.read("min_normal_force", t.training.min_normal_force);
  s.read("max_normal_force", t.training.max_normal_force);
  s.read("max_shear", t.training.max_shear);
  s.read("texture_seed", t.training.texture_seed);
  s.read("training_seed", t.training_seed);
  s.read("k", t.classifier.k);
  s.read("laplace", t.classifier.laplace);
  s.read("patch_weight", t.classifier.patch_weight);
  s.read("histogram_weight", t.classifier.histogram_weight);
  s.read("spectrum_weight", t.classifier.spectrum_weight);
  s.read("reset_after", t.reset_after);
  if (const json* v = s.find("sequence")) {
    if (!v->is_array()) fail(s.at("sequence"), "expected an array of texture names");
    t.sequence.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      t.sequence.push_back(texture_from((*v)[i], s.at("sequence") + "[" + std::to_string(i) + "]"));
    }
  }
  s.read("panel_width", t.panel_width);
  s.read("passes", t.passes);
  s.read("dwell", t.dwell);
  s.read("standoff", t.standoff);
  s.read("altitude", t.altitude);
  s.finish();
}

Phase read_phase(Section s) {
  Phase p;
  std::string type;
  s.read("type", type);
  if (type.empty()) fail(s.at("type"), "missing phase type");
  p.kind = phase_kind_from(type, s.at("type"));
  s.read("position", p.position);
  s.read("duration", p.duration);
  s.read("speed", p.speed);
  s.read("tolerance", p.tolerance);
  s.read("timeout", p.timeout);
  if (const json* v = s.find("texture")) p.texture = texture_from(*v, s.at("texture"));
  s.finish();
  return p;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json mat_json(const Mat3& m) {
  if (m.isDiagonal(0.0)) {
    if (m(0, 0) == m(1, 1) && m(1, 1) == m(2, 2)) return m(0, 0);
    return vec_json(m.diagonal());
  }
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(vec_json(m.row(r).transpose()));
  return rows;
}

}  // namespace

const char* sensor_mode_name(SensorMode mode) {
  switch (mode) {
    case SensorMode::kForceTorque: return "ft-only";
    case SensorMode::kTactile: return "tactile-only";
    case SensorMode::kFused: return "fused";
  }
  return "unknown";
}

SensorMode parse_sensor_mode(const std::string& name) {
  if (name == "ft-only") return SensorMode::kForceTorque;
  if (name == "tactile-only") return SensorMode::kTactile;
  if (name == "fused") return SensorMode::kFused;
  throw Error(ErrorCode::kConfig, "unknown sensor mode '" + name + "' (ft-only, tactile-only, fused)");
}

const char* phase_kind_name(PhaseKind kind) {
  switch (kind) {
    case PhaseKind::kHover: return "hover";
    case PhaseKind::kGoto: return "goto";
    case PhaseKind::kPush: return "push";
    case PhaseKind::kRetreat: return "retreat";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  Section s(root, "config");
  Scenario sc;
  if (s.find("schema_version") == nullptr) fail("config.schema_version", "missing");
  s.read("schema_version", sc.schema_version);
  if (sc.schema_version != kSchemaVersion) {
    fail("config.schema_version", "unsupported version " + std::to_string(sc.schema_version));
  }
  s.read("name", sc.name);
  s.read("seed", sc.seed);
  s.read("dt", sc.dt);
  s.read("max_duration", sc.max_duration);
  std::string mode = sensor_mode_name(sc.sensor_mode);
  s.read("sensor_mode", mode);
  try {
    sc.sensor_mode = parse_sensor_mode(mode);
  } catch (const Error& e) {
    fail("config.sensor_mode", e.what());
  }
  s.read("image_path", sc.image_path);
  s.read("reference_force", sc.reference_force);
  s.read("initial_position", sc.initial_position);
  if (auto c = s.child("vehicle")) read_vehicle(*c, sc.vehicle);
  if (auto c = s.child("wall")) read_wall(*c, sc);
  if (auto c = s.child("gel_pad")) read_pad(*c, sc.pad);
  if (auto c = s.child("noise")) read_noise(*c, sc.noise);
  if (auto c = s.child("motion_gains")) read_motion(*c, sc.motion_gains);
  if (auto c = s.child("force_gains")) read_force(*c, sc.force_gains);
  if (auto c = s.child("contact_detection")) {
    c->read("threshold_on", sc.contact_detection.threshold_on);
    c->read("threshold_off", sc.contact_detection.threshold_off);
    c->finish();
  }
  if (auto c = s.child("dataset")) read_dataset(*c, sc.dataset);
  if (auto c = s.child("texture")) read_texture(*c, sc.texture);
  if (auto c = s.child("disturbance")) {
    c->read("gust_std", sc.disturbance.gust_std);
    c->read("gust_time_constant", sc.disturbance.gust_time_constant);
    c->finish();
  }
  if (const json* m = s.find("mission")) {
    if (!m->is_array()) fail("config.mission", "expected an array of phases");
    for (std::size_t i = 0; i < m->size(); ++i) {
      sc.mission.push_back(read_phase(Section((*m)[i], "config.mission[" + std::to_string(i) + "]")));
    }
  }
  s.finish();
  if (sc.mission.empty() && !sc.texture.sequence.empty()) sc.mission = texture_flight_mission(sc);
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["schema_version"] = sc.schema_version;
  j["name"] = sc.name;
  j["seed"] = sc.seed;
  j["dt"] = sc.dt;
  j["max_duration"] = sc.max_duration;
  j["sensor_mode"] = sensor_mode_name(sc.sensor_mode);
  j["image_path"] = sc.image_path;
  j["reference_force"] = sc.reference_force;
  j["initial_position"] = vec_json(sc.initial_position);
  const sim::VehicleParams& v = sc.vehicle;
  j["vehicle"] = {{"mass", v.mass},
                  {"inertia", mat_json(v.inertia)},
                  {"arm_length", v.arm_length},
                  {"tilt_deg", v.tilt * 180.0 / kPi},
                  {"thrust_coeff", v.thrust_coeff},
                  {"drag_coeff", v.drag_coeff},
                  {"min_rotor_speed", v.min_rotor_speed},
                  {"max_rotor_speed", v.max_rotor_speed},
                  {"tool_offset", vec_json(v.tool_offset)},
                  {"motor_time_constant", v.motor_time_constant}};
  j["wall"] = {{"enabled", sc.wall_enabled},       {"point", vec_json(sc.wall.point)},
               {"normal", vec_json(sc.wall.normal)}, {"stiffness", sc.wall.stiffness},
               {"damping", sc.wall.damping},         {"friction", sc.wall.friction}};
  const tactile::GelPadModel& p = sc.pad;
  j["gel_pad"] = {{"pitch", p.pitch},
                  {"rows", p.rows},
                  {"cols", p.cols},
                  {"image_width", p.image_width},
                  {"image_height", p.image_height},
                  {"px_per_mm", p.px_per_mm},
                  {"normal_compliance", p.normal_compliance},
                  {"shear_compliance", p.shear_compliance},
                  {"spread_radius", p.spread_radius},
                  {"marker_noise", p.marker_noise},
                  {"dot_sigma", p.dot_sigma},
                  {"dot_depth", p.dot_depth},
                  {"frame_rate", p.frame_rate}};
  j["noise"] = {{"process", mat_json(sc.noise.process)},
                {"force_torque", mat_json(sc.noise.force_torque)},
                {"tactile", mat_json(sc.noise.tactile)}};
  j["motion_gains"] = {{"position", vec_json(sc.motion_gains.position)},
                       {"velocity", vec_json(sc.motion_gains.velocity)},
                       {"attitude", sc.motion_gains.attitude},
                       {"rate", sc.motion_gains.rate}};
  const control::ForceGains& f = sc.force_gains;
  j["force_gains"] = {{"stiffness", mat_json(f.stiffness)},
                      {"damping", mat_json(f.damping)},
                      {"proportional", mat_json(f.proportional)},
                      {"integral", mat_json(f.integral)},
                      {"actual_mass", mat_json(f.actual_mass)},
                      {"desired_mass", mat_json(f.desired_mass)},
                      {"integral_clamp", f.integral_clamp}};
  j["contact_detection"] = {{"threshold_on", sc.contact_detection.threshold_on},
                            {"threshold_off", sc.contact_detection.threshold_off}};
  const DatasetConfig& d = sc.dataset;
  j["dataset"] = {{"size", d.size},
                  {"shear_x", {d.ranges.shear_x.lo, d.ranges.shear_x.hi}},
                  {"shear_y", {d.ranges.shear_y.lo, d.ranges.shear_y.hi}},
                  {"normal", {d.ranges.normal.lo, d.ranges.normal.hi}},
                  {"k", d.knn.k},
                  {"distance_weighted", d.knn.distance_weighted},
                  {"path", d.path}};
  if (d.seed) j["dataset"]["seed"] = *d.seed;
  const TextureConfig& t = sc.texture;
  json seq = json::array();
  for (auto c : t.sequence) seq.push_back(texture::class_name(c));
  j["texture"] = {{"enabled", t.enabled},
                  {"per_class", t.training.per_class},
                  {"min_normal_force", t.training.min_normal_force},
                  {"max_normal_force", t.training.max_normal_force},
                  {"max_shear", t.training.max_shear},
                  {"texture_seed", t.training.texture_seed},
                  {"k", t.classifier.k},
                  {"laplace", t.classifier.laplace},
                  {"patch_weight", t.classifier.patch_weight},
                  {"histogram_weight", t.classifier.histogram_weight},
                  {"spectrum_weight", t.classifier.spectrum_weight},
                  {"reset_after", t.reset_after},
                  {"sequence", seq},
                  {"panel_width", t.panel_width},
                  {"passes", t.passes},
                  {"dwell", t.dwell},
                  {"standoff", t.standoff},
                  {"altitude", t.altitude}};
  if (t.training_seed) j["texture"]["training_seed"] = *t.training_seed;
  j["disturbance"] = {{"gust_std", sc.disturbance.gust_std},
                      {"gust_time_constant", sc.disturbance.gust_time_constant}};
  json mission = json::array();
  for (const Phase& ph : sc.mission) {
    json o = {{"type", phase_kind_name(ph.kind)}, {"speed", ph.speed}, {"timeout", ph.timeout}};
    if (ph.kind != PhaseKind::kPush) o["position"] = vec_json(ph.position);
    if (ph.kind == PhaseKind::kHover || ph.kind == PhaseKind::kPush) o["duration"] = ph.duration;
    if (ph.kind == PhaseKind::kGoto || ph.kind == PhaseKind::kRetreat) o["tolerance"] = ph.tolerance;
    if (ph.texture) o["texture"] = texture::class_name(*ph.texture);
    mission.push_back(o);
  }
  j["mission"] = mission;
  return j.dump(2) + "\n";
}

void Scenario::validate() const {
  const auto wrap = [](const char* path, const auto& fn) {
    try {
      fn();
    } catch (const Error& e) {
      fail(path, e.what());
    }
  };
  if (!(dt > 0.0 && dt <= 0.01)) fail("config.dt", "must lie in (0, 0.01]");
  const double ticks = 1.0 / dt;
  if (std::abs(ticks - std::round(ticks)) > 1e-9) fail("config.dt", "1/dt must be an integer tick rate");
  if (!(max_duration > 0.0)) fail("config.max_duration", "must be positive");
  if (!(reference_force >= 0.0)) fail("config.reference_force", "normal reference force must be >= 0");
  if (!initial_position.allFinite()) fail("config.initial_position", "must be finite");
  wrap("config.vehicle", [&] { vehicle.validate(); });
  if (wall_enabled) wrap("config.wall", [&] { wall.validate(); });
  wrap("config.gel_pad", [&] { pad.validate(); });
  wrap("config.noise", [&] { noise.validate(); });
  wrap("config.motion_gains", [&] { motion_gains.validate(); });
  wrap("config.force_gains", [&] { force_gains.validate(); });
  if (!(contact_detection.threshold_on > contact_detection.threshold_off && contact_detection.threshold_off > 0.0)) {
    fail("config.contact_detection", "needs threshold_on > threshold_off > 0");
  }
  wrap("config.dataset", [&] { dataset.ranges.validate(); });
  if (dataset.path.empty() && (dataset.knn.k < 1 || static_cast<std::size_t>(dataset.knn.k) > dataset.size)) {
    fail("config.dataset.k", "must satisfy 1 <= k <= size");
  }
  if (texture.enabled) {
    wrap("config.texture", [&] { texture.classifier.validate(); });
    if (texture.training.per_class < texture.classifier.k) fail("config.texture.per_class", "must be >= k");
    if (!(texture.reset_after > 0.0)) fail("config.texture.reset_after", "must be positive");
  }
  if (!(texture.panel_width > 0.0)) fail("config.texture.panel_width", "must be positive");
  if (!(disturbance.gust_std >= 0.0 && disturbance.gust_time_constant > 0.0)) {
    fail("config.disturbance", "gust_std must be >= 0 and gust_time_constant > 0");
  }
  if (mission.empty()) fail("config.mission", "needs at least one phase");
  for (std::size_t i = 0; i < mission.size(); ++i) {
    const Phase& p = mission[i];
    const std::string path = "config.mission[" + std::to_string(i) + "]";
    if (!p.position.allFinite()) fail(path + ".position", "must be finite");
    if (!(p.duration >= 0.0)) fail(path + ".duration", "must be >= 0");
    if (!(p.speed > 0.0)) fail(path + ".speed", "must be positive");
    if (!(p.tolerance > 0.0)) fail(path + ".tolerance", "must be positive");
    if (!(p.timeout > 0.0)) fail(path + ".timeout", "must be positive");
    if (p.kind == PhaseKind::kPush && !wall_enabled) fail(path, "push phase needs the wall");
  }
}

std::uint64_t Scenario::dataset_seed() const { return dataset.seed.value_or(derive_seed(seed, 1)); }

std::uint64_t Scenario::texture_seed() const { return texture.training_seed.value_or(derive_seed(seed, 5)); }

Scenario nominal_push_scenario() {
  Scenario sc;
  sc.name = "nominal-push";
  sc.initial_position = Vec3(0.0, 0.0, 1.5);
  Phase hover;
  hover.kind = PhaseKind::kHover;
  hover.position = sc.initial_position;
  hover.duration = 2.0;
  Phase approach;
  approach.kind = PhaseKind::kGoto;
  approach.position = Vec3(0.40, 0.0, 1.5);
  approach.speed = 0.2;
  Phase push;
  push.kind = PhaseKind::kPush;
  push.speed = 0.025;
  push.duration = 20.0;
  push.timeout = 15.0;
  Phase retreat;
  retreat.kind = PhaseKind::kRetreat;
  retreat.position = Vec3(0.40, 0.0, 1.5);
  retreat.speed = 0.1;
  sc.mission = {hover, approach, push, retreat};
  return sc;
}

std::vector<Phase> texture_flight_mission(const Scenario& sc) {
  const TextureConfig& t = sc.texture;
  const std::size_t n = t.sequence.size();
  std::vector<Phase> out;
  const auto panel_y = [&](std::size_t i) { return (static_cast<double>(i) - 0.5 * (n - 1.0)) * t.panel_width; };
  Phase hover;
  hover.kind = PhaseKind::kHover;
  hover.position = sc.initial_position;
  hover.duration = 1.0;
  out.push_back(hover);
  for (int pass = 0; pass < t.passes; ++pass) {
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 standoff(t.standoff, panel_y(i), t.altitude);
      Phase go;
      go.kind = PhaseKind::kGoto;
      go.position = standoff;
      go.speed = 0.3;
      go.tolerance = 0.005;
      Phase push;
      push.kind = PhaseKind::kPush;
      push.speed = 0.03;
      push.duration = t.dwell;
      push.timeout = 15.0;
      push.texture = t.sequence[i];
      Phase back;
      back.kind = PhaseKind::kRetreat;
      back.position = standoff;
      back.speed = 0.15;
      back.tolerance = 0.01;
      out.insert(out.end(), {go, push, back});
    }
  }
  return out;
}

Scenario texture_flight_scenario() {
  Scenario sc;
  sc.name = "texture-flight";
  sc.texture.enabled = true;
  sc.texture.sequence = {texture::TextureClass::kPrintedFlatPaper, texture::TextureClass::kWoodGrain,
                         texture::TextureClass::kMarbleMosaic,     texture::TextureClass::kQuartzStone,
                         texture::TextureClass::kDiamondVinyl,     texture::TextureClass::kFoamMat};
  const std::size_t n = sc.texture.sequence.size();
  sc.initial_position = Vec3(sc.texture.standoff, -0.5 * (n - 1.0) * sc.texture.panel_width, sc.texture.altitude);
  sc.mission = texture_flight_mission(sc);
  return sc;
}

}  // namespace aerotact::harness
