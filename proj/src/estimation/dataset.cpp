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
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "aerotact/estimation.hpp"

namespace aerotact::estimation {

namespace {

void check_interval(const Interval& i, const char* name) {
  if (!(std::isfinite(i.lo) && std::isfinite(i.hi) && i.lo <= i.hi)) {
    throw Error(ErrorCode::kInvalidArgument, std::string("invalid force range for ") + name);
  }
}

}  // namespace

void ForceRanges::validate() const {
  check_interval(shear_x, "shear_x");
  check_interval(shear_y, "shear_y");
  check_interval(normal, "normal");
  if (normal.lo < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "normal force range must lie in [0, inf)");
  }
}

void TrainingSet::validate() const {
  if (features.size() != forces.size()) {
    throw Error(ErrorCode::kLengthMismatch, "training set features/forces differ in length");
  }
  for (const Vec3& f : forces) {
    if (!f.allFinite()) throw Error(ErrorCode::kInvalidArgument, "non-finite training force");
  }
}

TrainingSet generate_dataset(const tactile::GelPadModel& pad, const ForceRanges& ranges,
                             std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "generate_dataset: n must be >= 1");
  ranges.validate();
  pad.validate();

  TrainingSet set;
  set.seed = seed;
  set.marker_noise = pad.marker_noise;
  set.ranges = ranges;
  set.features.reserve(n);
  set.forces.reserve(n);

  std::mt19937_64 rng(seed);
  const auto uniform = [&rng](const Interval& i) {
    return std::uniform_real_distribution<double>(i.lo, i.hi)(rng);
  };
  // Contact centres fall within the central third of the marker grid.
  const Vec2 half = pad.half_extent() / 3.0;
  for (std::size_t s = 0; s < n; ++s) {
    const Vec3 force(uniform(ranges.shear_x), uniform(ranges.shear_y), uniform(ranges.normal));
    const Vec2 center(uniform({-half.x(), half.x()}), uniform({-half.y(), half.y()}));
    const Wrench w{force, Vec3::Zero(), Frame::kEndEffector};
    const tactile::MarkerField field = tactile::marker_displacements(w, pad, center, rng);
    set.features.push_back(tactile::feature_vector(field, pad));
    set.forces.push_back(force);
  }
  return set;
}

void write_training_set(const TrainingSet& set, std::ostream& out) {
  set.validate();
  out << "# aerotact training set v1\n";
  out << fmt::format("# seed={} marker_noise={} shear_x={}:{} shear_y={}:{} normal={}:{} n={}\n",
                     set.seed, set.marker_noise, set.ranges.shear_x.lo, set.ranges.shear_x.hi,
                     set.ranges.shear_y.lo, set.ranges.shear_y.hi, set.ranges.normal.lo,
                     set.ranges.normal.hi, set.size());
  out << "fx,fy,fz";
  for (int i = 0; i < tactile::kTrackedMarkers; ++i) out << ",dx" << i << ",dy" << i;
  out << '\n';
  for (std::size_t s = 0; s < set.size(); ++s) {
    const Vec3& f = set.forces[s];
    std::string line = fmt::format("{},{},{}", f.x(), f.y(), f.z());
    for (double v : set.features[s].values) {
      line += ',';
      line += fmt::format("{}", v);
    }
    line += '\n';
    out << line;
  }
}

namespace {

std::vector<double> split_doubles(const std::string& line) {
  std::vector<double> out;
  const char* p = line.c_str();
  while (*p != '\0') {
    char* end = nullptr;
    const double v = std::strtod(p, &end);
    if (end == p) throw Error(ErrorCode::kIo, "training set: malformed number in '" + line + "'");
    out.push_back(v);
    p = end;
    if (*p == ',') ++p;
  }
  return out;
}

bool parse_range(const std::string& token, const std::string& key, Interval& out) {
  if (token.rfind(key + "=", 0) != 0) return false;
  const std::string body = token.substr(key.size() + 1);
  const auto colon = body.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::kIo, "training set: bad range " + token);
  out.lo = std::strtod(body.substr(0, colon).c_str(), nullptr);
  out.hi = std::strtod(body.substr(colon + 1).c_str(), nullptr);
  return true;
}

}  // namespace

TrainingSet read_training_set(std::istream& in) {
  TrainingSet set;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream tokens(line.substr(1));
      std::string tok;
      while (tokens >> tok) {
        if (tok.rfind("seed=", 0) == 0) set.seed = std::strtoull(tok.c_str() + 5, nullptr, 10);
        else if (tok.rfind("marker_noise=", 0) == 0) set.marker_noise = std::strtod(tok.c_str() + 13, nullptr);
        else if (parse_range(tok, "shear_x", set.ranges.shear_x)) {}
        else if (parse_range(tok, "shear_y", set.ranges.shear_y)) {}
        else if (parse_range(tok, "normal", set.ranges.normal)) {}
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("fx,", 0) == 0) continue;
    }
    const std::vector<double> values = split_doubles(line);
    if (values.size() != 3 + tactile::kFeatureSize) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "training set: row has " + std::to_string(values.size()) + " values, expected " +
                      std::to_string(3 + tactile::kFeatureSize));
    }
    set.forces.emplace_back(values[0], values[1], values[2]);
    tactile::TactileFeature f;
    std::copy(values.begin() + 3, values.end(), f.values.begin());
    set.features.push_back(f);
  }
  set.validate();
  return set;
}

}  // namespace aerotact::estimation
