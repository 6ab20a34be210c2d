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

#include "aerotact/tactile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace aerotact::tactile {

void GelPadModel::validate() const {
  const auto check = [](bool ok, const char* message) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, message);
  };
  check(pitch > 0.0, "marker pitch must be positive");
  check(rows > 0 && cols > 0 && rows * cols >= kTrackedMarkers,
        "marker grid must hold at least 39 markers");
  check(image_width > 0 && image_height > 0, "image size must be positive");
  check(px_per_mm > 0.0, "pixel scale must be positive");
  check(normal_compliance >= 0.0 && shear_compliance >= 0.0, "compliances must be >= 0");
  check(spread_radius >= 0.0, "spread radius must be >= 0");
  check(marker_noise >= 0.0, "marker noise must be >= 0");
  check(dot_sigma > 0.0 && dot_depth > 0.0 && dot_depth <= 0.5, "invalid dot appearance");
  check(frame_rate > 0.0, "frame rate must be positive");
}

std::vector<Vec2> GelPadModel::marker_positions() const {
  std::vector<Vec2> out;
  out.reserve(marker_count());
  const double cx = 0.5 * (cols - 1);
  const double cy = 0.5 * (rows - 1);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      out.emplace_back((c - cx) * pitch, (r - cy) * pitch);
    }
  }
  return out;
}

std::vector<int> GelPadModel::tracked_indices() const {
  const std::vector<Vec2> positions = marker_positions();
  std::vector<int> order(positions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return positions[a].squaredNorm() < positions[b].squaredNorm();
  });
  order.resize(kTrackedMarkers);
  std::sort(order.begin(), order.end());
  return order;
}

Vec2 GelPadModel::to_pixel(const Vec2& mm) const {
  return Vec2(0.5 * image_width + mm.x() * px_per_mm, 0.5 * image_height + mm.y() * px_per_mm);
}

Vec2 GelPadModel::to_mm(const Vec2& px) const {
  return Vec2((px.x() - 0.5 * image_width) / px_per_mm, (px.y() - 0.5 * image_height) / px_per_mm);
}

Vec2 GelPadModel::half_extent() const {
  return Vec2(0.5 * (cols - 1) * pitch, 0.5 * (rows - 1) * pitch);
}

MarkerField MarkerField::at_rest(const GelPadModel& pad, double stamp) {
  MarkerField field;
  field.reference = pad.marker_positions();
  field.displacement.assign(field.reference.size(), Vec2::Zero());
  field.valid.assign(field.reference.size(), true);
  field.stamp = stamp;
  return field;
}

void MarkerField::check_consistent() const {
  if (displacement.size() != reference.size() || valid.size() != reference.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "marker field arrays differ in length");
  }
}

double TactileFeature::mean_marker_displacement() const {
  double sum = 0.0;
  for (int i = 0; i < kTrackedMarkers; ++i) {
    sum += std::hypot(values[2 * i], values[2 * i + 1]);
  }
  return sum / kTrackedMarkers;
}

double HeightMap::sample(double x_mm, double y_mm) const {
  if (heights.empty()) return 0.0;
  const double gx = x_mm / mm_per_cell;
  const double gy = y_mm / mm_per_cell;
  const double fx = std::floor(gx);
  const double fy = std::floor(gy);
  const double tx = gx - fx;
  const double ty = gy - fy;
  const auto wrap = [](long i, int n) {
    const long m = i % n;
    return static_cast<int>(m < 0 ? m + n : m);
  };
  const int x0 = wrap(static_cast<long>(fx), width);
  const int y0 = wrap(static_cast<long>(fy), height);
  const int x1 = (x0 + 1) % width;
  const int y1 = (y0 + 1) % height;
  const auto h = [&](int x, int y) { return heights[static_cast<std::size_t>(y) * width + x]; };
  return (1 - tx) * (1 - ty) * h(x0, y0) + tx * (1 - ty) * h(x1, y0) +
         (1 - tx) * ty * h(x0, y1) + tx * ty * h(x1, y1);
}

double HeightMap::max_abs() const {
  double m = 0.0;
  for (double h : heights) m = std::max(m, std::abs(h));
  return m;
}

double contact_radius(double normal_force) {
  if (normal_force <= 0.0) return 0.0;
  return std::min(7.0, 2.8 * std::cbrt(normal_force));
}

MarkerField marker_displacements(const Wrench& contact, const GelPadModel& pad,
                                 const Vec2& contact_center, std::mt19937_64& rng) {
  require_frame(contact, Frame::kEndEffector, "marker_displacements");
  const double normal = contact.force.z();
  if (!(normal >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "marker_displacements: negative normal force (the pad cannot be pulled)");
  }
  constexpr double kGuard = 1e-6;  // mm
  MarkerField field = MarkerField::at_rest(pad);
  const Vec2 shear = pad.shear_compliance * contact.force.head<2>();
  const double spread = pad.normal_compliance * normal;
  std::normal_distribution<double> noise(0.0, pad.marker_noise > 0.0 ? pad.marker_noise : 1.0);
  for (std::size_t i = 0; i < field.reference.size(); ++i) {
    const Vec2 offset = field.reference[i] - contact_center;
    const double dist = offset.norm();
    const double decay = pad.spread_radius > 0.0 ? std::exp(-dist / pad.spread_radius) : 0.0;
    Vec2 d = spread * decay * offset / (dist + kGuard) + shear;
    if (pad.marker_noise > 0.0) {
      const double nx = noise(rng);
      const double ny = noise(rng);
      d += Vec2(nx, ny);
    }
    field.displacement[i] = d;
  }
  return field;
}

MarkerField marker_displacements(const Wrench& contact, const GelPadModel& pad,
                                 const Vec2& contact_center, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return marker_displacements(contact, pad, contact_center, rng);
}

TactileImage render_tactile_image(const MarkerField& field, const std::optional<ContactPatch>& patch,
                                  const GelPadModel& pad, std::uint64_t noise_seed,
                                  const RenderOptions& options) {
  field.check_consistent();
  const int w = pad.image_width;
  const int h = pad.image_height;
  std::vector<double> buf(static_cast<std::size_t>(w) * h, 0.5);

  if (patch && patch->normal_force > 0.0 && patch->radius > 0.0) {
    std::mt19937_64 rng(noise_seed);
    std::normal_distribution<double> noise(0.0, options.pixel_noise > 0.0 ? options.pixel_noise : 1.0);
    const double press = patch->normal_force / (patch->normal_force + 2.0);
    const double edge = 0.5;  // mm
    const double reach = patch->radius + edge;
    const Vec2 c_px = pad.to_pixel(patch->center);
    const int u0 = std::max(0, static_cast<int>(std::floor(c_px.x() - reach * pad.px_per_mm)));
    const int u1 = std::min(w - 1, static_cast<int>(std::ceil(c_px.x() + reach * pad.px_per_mm)));
    const int v0 = std::max(0, static_cast<int>(std::floor(c_px.y() - reach * pad.px_per_mm)));
    const int v1 = std::min(h - 1, static_cast<int>(std::ceil(c_px.y() + reach * pad.px_per_mm)));
    for (int v = v0; v <= v1; ++v) {
      for (int u = u0; u <= u1; ++u) {
        const Vec2 mm = pad.to_mm(Vec2(u, v));
        const double r = (mm - patch->center).norm();
        const double weight = std::clamp((patch->radius - r) / edge + 0.5, 0.0, 1.0);
        if (weight <= 0.0) continue;
        double value = options.contact_shading * press;
        if (patch->relief != nullptr && !patch->relief->empty()) {
          const double height =
              patch->relief->sample(patch->texture_offset.x() + mm.x(), patch->texture_offset.y() + mm.y());
          value += options.relief_gain * press * height / options.relief_scale;
        }
        if (options.pixel_noise > 0.0) value += noise(rng);
        buf[static_cast<std::size_t>(v) * w + u] += weight * value;
      }
    }
  }

  const double sigma = pad.dot_sigma;
  const int reach = static_cast<int>(std::ceil(4.0 * sigma));
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  for (std::size_t i = 0; i < field.reference.size(); ++i) {
    const Vec2 c = pad.to_pixel(field.reference[i] + field.displacement[i]);
    const int cu = static_cast<int>(std::lround(c.x()));
    const int cv = static_cast<int>(std::lround(c.y()));
    for (int v = std::max(0, cv - reach); v <= std::min(h - 1, cv + reach); ++v) {
      for (int u = std::max(0, cu - reach); u <= std::min(w - 1, cu + reach); ++u) {
        const double d2 = (u - c.x()) * (u - c.x()) + (v - c.y()) * (v - c.y());
        buf[static_cast<std::size_t>(v) * w + u] -= pad.dot_depth * std::exp(-d2 * inv_two_var);
      }
    }
  }

  TactileImage image;
  image.width = w;
  image.height = h;
  image.stamp = field.stamp;
  image.pixels.resize(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    image.pixels[i] = static_cast<float>(std::clamp(buf[i], 0.0, 1.0));
  }
  return image;
}

namespace {

constexpr int kWindow = 5;  // px, centroid half window

double ring_mean(const TactileImage& img, int cu, int cv) {
  double sum = 0.0;
  int n = 0;
  for (int d = -kWindow; d <= kWindow; ++d) {
    sum += img.at(cu + d, cv - kWindow) + img.at(cu + d, cv + kWindow);
    n += 2;
  }
  for (int d = -kWindow + 1; d <= kWindow - 1; ++d) {
    sum += img.at(cu - kWindow, cv + d) + img.at(cu + kWindow, cv + d);
    n += 2;
  }
  return sum / n;
}

bool inside(const TactileImage& img, int u, int v) {
  return u >= kWindow && v >= kWindow && u < img.width - kWindow && v < img.height - kWindow;
}

std::optional<Vec2> centroid(const TactileImage& img, int cu, int cv, double background) {
  double sw = 0.0, su = 0.0, sv = 0.0;
  for (int v = cv - kWindow + 1; v <= cv + kWindow - 1; ++v) {
    for (int u = cu - kWindow + 1; u <= cu + kWindow - 1; ++u) {
      const double wgt = std::max(0.0, background - img.at(u, v));
      sw += wgt;
      su += wgt * u;
      sv += wgt * v;
    }
  }
  if (sw <= 0.0) return std::nullopt;
  return Vec2(su / sw, sv / sw);
}

}  // namespace

std::vector<DotDetection> detect_dots(const TactileImage& image, const GelPadModel& pad) {
  std::vector<DotDetection> dots;
  const double min_depth = 0.6 * pad.dot_depth;
  for (int v = kWindow; v < image.height - kWindow; ++v) {
    for (int u = kWindow; u < image.width - kWindow; ++u) {
      const float value = image.at(u, v);
      bool is_min = true;
      for (int dv = -1; dv <= 1 && is_min; ++dv) {
        for (int du = -1; du <= 1; ++du) {
          if (du == 0 && dv == 0) continue;
          const float other = image.at(u + du, v + dv);
          const bool earlier = dv < 0 || (dv == 0 && du < 0);
          if (earlier ? !(value < other) : !(value <= other)) {
            is_min = false;
            break;
          }
        }
      }
      if (!is_min) continue;
      const double background = ring_mean(image, u, v);
      const double depth = background - value;
      if (depth < min_depth) continue;
      std::optional<Vec2> c = centroid(image, u, v, background);
      if (!c) continue;
      // One re-centring pass keeps the window symmetric about the dot.
      const int ru = static_cast<int>(std::lround(c->x()));
      const int rv = static_cast<int>(std::lround(c->y()));
      if ((ru != u || rv != v) && inside(image, ru, rv)) {
        const std::optional<Vec2> c2 = centroid(image, ru, rv, ring_mean(image, ru, rv));
        if (c2) c = c2;
      }
      dots.push_back({*c, depth});
    }
  }
  return dots;
}

namespace {

// Index of the nearest dot to `target` within `gate` px, or -1.
int nearest_dot(const std::vector<DotDetection>& dots, const Vec2& target, double gate) {
  int best = -1;
  double best_d2 = gate * gate;
  for (std::size_t i = 0; i < dots.size(); ++i) {
    const double d2 = (dots[i].centroid - target).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

MarkerField track_markers(const TactileImage& reference, const TactileImage& current,
                          const GelPadModel& pad, const MarkerField* previous) {
  const std::vector<DotDetection> ref_dots = detect_dots(reference, pad);
  const std::vector<DotDetection> cur_dots = detect_dots(current, pad);
  const std::vector<Vec2> nominal = pad.marker_positions();
  const std::vector<int> tracked = pad.tracked_indices();
  const double gate = 0.5 * pad.pitch * pad.px_per_mm;
  const std::size_t n = nominal.size();

  // Reference dot for each pad marker.
  std::vector<int> ref_index(n, -1);
  for (std::size_t m = 0; m < n; ++m) {
    ref_index[m] = nearest_dot(ref_dots, pad.to_pixel(nominal[m]), gate);
  }

  // Global translation hypothesis: pair the most central referenced marker
  // with every nearby current dot.
  std::vector<Vec2> candidates;
  if (previous != nullptr && previous->displacement.size() == n) {
    Vec2 mean = Vec2::Zero();
    for (int m : tracked) mean += previous->displacement[m];
    candidates.push_back(mean / kTrackedMarkers * pad.px_per_mm);
  }
  candidates.push_back(Vec2::Zero());
  int anchor = -1;
  double anchor_d2 = 0.0;
  for (int m : tracked) {
    if (ref_index[m] < 0) continue;
    const double d2 = nominal[m].squaredNorm();
    if (anchor < 0 || d2 < anchor_d2) {
      anchor = m;
      anchor_d2 = d2;
    }
  }
  if (anchor >= 0) {
    const Vec2 a = ref_dots[ref_index[anchor]].centroid;
    const double search = 2.0 * pad.pitch * pad.px_per_mm;
    for (const DotDetection& d : cur_dots) {
      if ((d.centroid - a).norm() <= search) candidates.push_back(d.centroid - a);
    }
  }
  // Each hypothesis seeds markers sitting close to its prediction, then the
  // match grows across the grid: an unmatched marker is predicted from the
  // mean displacement of its matched neighbours, most confident extension
  // first. This follows fields whose spread across the pad exceeds the
  // half-pitch gate. The hypothesis matching the most markers wins; a lattice
  // shifted by one pitch loses the column or row that runs off the grid.
  struct Matching {
    std::vector<int> match;
    int count = 0;
    double residual = 0.0;
  };
  const int rows = pad.rows;
  const int cols = pad.cols;
  auto grow = [&](const Vec2& t) {
    Matching out;
    out.match.assign(n, -1);
    std::vector<int> owner(cur_dots.size(), -1);
    auto nearest_free = [&](const Vec2& target, double radius) {
      int best = -1;
      double best_d2 = radius * radius;
      for (std::size_t i = 0; i < cur_dots.size(); ++i) {
        if (owner[i] >= 0) continue;
        const double d2 = (cur_dots[i].centroid - target).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = static_cast<int>(i);
        }
      }
      return best;
    };
    auto claim = [&](std::size_t m, int j, double d2) {
      out.match[m] = j;
      owner[static_cast<std::size_t>(j)] = static_cast<int>(m);
      ++out.count;
      out.residual += d2;
    };
    for (const double radius : {0.3 * gate, gate}) {
      for (std::size_t m = 0; m < n; ++m) {
        if (ref_index[m] < 0 || out.match[m] >= 0) continue;
        const Vec2 predicted = ref_dots[ref_index[m]].centroid + t;
        const int j = nearest_free(predicted, radius);
        if (j >= 0) claim(m, j, (cur_dots[j].centroid - predicted).squaredNorm());
      }
      if (out.count > 0) break;
    }
    // When growth stalls, retry once with a wider reach restricted to
    // unclaimed dots for markers that stray from their neighbours.
    for (double reach = gate;;) {
      int best_m = -1;
      int best_j = -1;
      double best_d2 = 0.0;
      for (std::size_t m = 0; m < n; ++m) {
        if (ref_index[m] < 0 || out.match[m] >= 0) continue;
        const int r = static_cast<int>(m) / cols;
        const int c = static_cast<int>(m) % cols;
        Vec2 shift = Vec2::Zero();
        int support = 0;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = r + dr;
            const int cc = c + dc;
            if ((dr == 0 && dc == 0) || rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
            const auto k = static_cast<std::size_t>(rr * cols + cc);
            if (out.match[k] < 0) continue;
            shift += cur_dots[out.match[k]].centroid - ref_dots[ref_index[k]].centroid;
            ++support;
          }
        }
        if (support == 0) continue;
        const Vec2 predicted = ref_dots[ref_index[m]].centroid + shift / support;
        const int j = nearest_free(predicted, reach);
        if (j < 0) continue;
        const double d2 = (cur_dots[j].centroid - predicted).squaredNorm();
        if (best_m < 0 || d2 < best_d2) {
          best_m = static_cast<int>(m);
          best_j = j;
          best_d2 = d2;
        }
      }
      if (best_m < 0) {
        if (reach > gate) break;
        reach = 1.5 * gate;
        continue;
      }
      claim(static_cast<std::size_t>(best_m), best_j, best_d2);
      reach = gate;
    }
    return out;
  };

  Matching chosen;
  Vec2 offset = Vec2::Zero();
  bool have = false;
  for (const Vec2& t : candidates) {
    Matching m = grow(t);
    const bool tie = have && m.count == chosen.count && std::abs(m.residual - chosen.residual) < 1e-9;
    if (!have || m.count > chosen.count ||
        (m.count == chosen.count && !tie && m.residual < chosen.residual) ||
        (tie && t.squaredNorm() < offset.squaredNorm())) {
      chosen = std::move(m);
      offset = t;
      have = true;
    }
  }
  const std::vector<int>& match = chosen.match;

  MarkerField field = MarkerField::at_rest(pad, current.stamp);
  int lost = 0;
  for (std::size_t m = 0; m < n; ++m) {
    if (match[m] >= 0) {
      field.displacement[m] =
          (cur_dots[match[m]].centroid - ref_dots[ref_index[m]].centroid) / pad.px_per_mm;
    } else {
      field.valid[m] = false;
      if (previous != nullptr && previous->displacement.size() == n) {
        field.displacement[m] = previous->displacement[m];
      }
    }
  }
  for (int m : tracked) {
    if (!field.valid[m]) ++lost;
  }
  if (4 * lost > kTrackedMarkers) {
    throw Error(ErrorCode::kTrackingLoss, "track_markers: " + std::to_string(lost) + " of " +
                                              std::to_string(kTrackedMarkers) +
                                              " tracked markers unmatched");
  }
  return field;
}

TactileFeature feature_vector(const MarkerField& field, const GelPadModel& pad) {
  field.check_consistent();
  if (static_cast<int>(field.displacement.size()) != pad.marker_count()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature_vector: field has " + std::to_string(field.displacement.size()) +
                    " markers, pad has " + std::to_string(pad.marker_count()));
  }
  TactileFeature feature;
  const std::vector<int> tracked = pad.tracked_indices();
  for (int j = 0; j < kTrackedMarkers; ++j) {
    const Vec2& d = field.displacement[tracked[j]];
    if (!d.allFinite()) {
      throw Error(ErrorCode::kDimensionMismatch, "feature_vector: non-finite displacement");
    }
    feature.values[2 * j] = d.x();
    feature.values[2 * j + 1] = d.y();
  }
  return feature;
}

void write_pgm(const TactileImage& image, std::ostream& out) {
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  for (float p : image.pixels) {
    const int q = static_cast<int>(std::lround(std::clamp(p, 0.0f, 1.0f) * 255.0f));
    out.put(static_cast<char>(static_cast<unsigned char>(q)));
  }
}

}  // namespace aerotact::tactile
