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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "aerotact/texture.hpp"

namespace aerotact::texture {

namespace {

constexpr std::array<const char*, kClassCount> kNames = {
    "non-contact", "printed-flat-paper", "wood-grain", "marble-mosaic",
    "quartz-stone", "diamond-vinyl", "foam-mat"};

constexpr int kSpectrumSide = 64;
// Radial band edges in cycles per region.
constexpr std::array<double, kSpectralBands + 1> kBandEdges = {1.0, 3.0, 5.0, 7.0, 10.0, 16.0, 33.0};

// Area-average of the region onto an n_u x n_v grid.
std::vector<double> resample(const tactile::TactileImage& img, const ContactMask& r, int n_u, int n_v) {
  std::vector<double> out(static_cast<std::size_t>(n_u) * n_v, 0.0);
  for (int j = 0; j < n_v; ++j) {
    const int va = r.v0 + j * r.height / n_v;
    const int vb = std::max(va + 1, r.v0 + (j + 1) * r.height / n_v);
    for (int i = 0; i < n_u; ++i) {
      const int ua = r.u0 + i * r.width / n_u;
      const int ub = std::max(ua + 1, r.u0 + (i + 1) * r.width / n_u);
      double sum = 0.0;
      for (int v = va; v < vb; ++v) {
        for (int u = ua; u < ub; ++u) sum += img.at(u, v);
      }
      out[static_cast<std::size_t>(j) * n_u + i] = sum / ((vb - va) * (ub - ua));
    }
  }
  return out;
}

void normalized_patch(const tactile::TactileImage& img, const ContactMask& r, double* out) {
  const std::vector<double> patch = resample(img, r, kPatchSide, kPatchSide);
  const double mean = std::accumulate(patch.begin(), patch.end(), 0.0) / kPatchSize;
  double var = 0.0;
  for (double v : patch) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / kPatchSize);
  for (int i = 0; i < kPatchSize; ++i) out[i] = sd > 1e-12 ? (patch[i] - mean) / sd : 0.0;
}

void orientation_histogram(const tactile::TactileImage& img, const ContactMask& r, double* out) {
  std::array<double, kOrientationBins> bins{};
  double total = 0.0;
  for (int v = r.v0 + 1; v < r.v0 + r.height - 1; ++v) {
    for (int u = r.u0 + 1; u < r.u0 + r.width - 1; ++u) {
      const double gx = 0.5 * (img.at(u + 1, v) - img.at(u - 1, v));
      const double gy = 0.5 * (img.at(u, v + 1) - img.at(u, v - 1));
      const double mag = std::hypot(gx, gy);
      if (mag <= 0.0) continue;
      double angle = std::atan2(gy, gx);
      if (angle < 0.0) angle += kPi;
      if (angle >= kPi) angle -= kPi;
      // Linear vote between the two nearest bin centres.
      const double pos = angle / kPi * kOrientationBins - 0.5;
      const double lo = std::floor(pos);
      const double frac = pos - lo;
      const int b0 = (static_cast<int>(lo) + kOrientationBins) % kOrientationBins;
      const int b1 = (b0 + 1) % kOrientationBins;
      bins[b0] += (1.0 - frac) * mag;
      bins[b1] += frac * mag;
      total += mag;
    }
  }
  for (int b = 0; b < kOrientationBins; ++b) {
    out[b] = total > 0.0 ? bins[b] / total : 1.0 / kOrientationBins;
  }
}

void radial_spectrum(const tactile::TactileImage& img, const ContactMask& r, double* out) {
  constexpr int n = kSpectrumSide;
  std::vector<double> x = resample(img, r, n, n);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / (n * n);
  for (double& v : x) v -= mean;

  std::array<double, n> cos_table{}, sin_table{};
  for (int k = 0; k < n; ++k) {
    cos_table[k] = std::cos(2.0 * kPi * k / n);
    sin_table[k] = std::sin(2.0 * kPi * k / n);
  }
  // Rows, then columns.
  std::vector<double> re(n * n), im(n * n);
  for (int row = 0; row < n; ++row) {
    for (int k = 0; k < n; ++k) {
      double a = 0.0, b = 0.0;
      for (int t = 0; t < n; ++t) {
        const int idx = (k * t) % n;
        a += x[row * n + t] * cos_table[idx];
        b -= x[row * n + t] * sin_table[idx];
      }
      re[row * n + k] = a;
      im[row * n + k] = b;
    }
  }
  std::array<double, kSpectralBands> energy{};
  double total = 0.0;
  for (int kx = 0; kx < n; ++kx) {
    for (int ky = 0; ky < n; ++ky) {
      double a = 0.0, b = 0.0;
      for (int t = 0; t < n; ++t) {
        const int idx = (ky * t) % n;
        const double c = cos_table[idx], s = sin_table[idx];
        a += re[t * n + kx] * c + im[t * n + kx] * s;
        b += im[t * n + kx] * c - re[t * n + kx] * s;
      }
      const double fx = kx < n / 2 ? kx : kx - n;
      const double fy = ky < n / 2 ? ky : ky - n;
      const double radius = std::hypot(fx, fy);
      const double power = a * a + b * b;
      for (int band = 0; band < kSpectralBands; ++band) {
        if (radius >= kBandEdges[band] && radius < kBandEdges[band + 1]) {
          energy[band] += power;
          total += power;
          break;
        }
      }
    }
  }
  for (int band = 0; band < kSpectralBands; ++band) {
    out[band] = std::log10((total > 0.0 ? energy[band] / total : 1.0 / kSpectralBands) + 1e-6);
  }
}

}  // namespace

const char* class_name(TextureClass c) {
  const int i = class_index(c);
  return i >= 0 && i < kClassCount ? kNames[i] : "unknown";
}

std::optional<TextureClass> class_from_name(std::string_view name) {
  for (int i = 0; i < kClassCount; ++i) {
    if (name == kNames[i]) return static_cast<TextureClass>(i);
  }
  return std::nullopt;
}

TextureClass class_from_index(int index) {
  if (index < 0 || index >= kClassCount) {
    throw Error(ErrorCode::kInvalidArgument, "texture class index out of range: " + std::to_string(index));
  }
  return static_cast<TextureClass>(index);
}

ContactMask central_mask(const tactile::GelPadModel& pad, int side) {
  side = std::min({side, pad.image_width, pad.image_height});
  return ContactMask{(pad.image_width - side) / 2, (pad.image_height - side) / 2, side, side};
}

Descriptor extract_descriptor(const tactile::TactileImage& image,
                              const std::optional<ContactMask>& mask) {
  if (image.width < 3 || image.height < 3 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw Error(ErrorCode::kInvalidArgument, "extract_descriptor: malformed image");
  }
  ContactMask region = mask.value_or(ContactMask{0, 0, image.width, image.height});
  if (region.u0 < 0 || region.v0 < 0 || region.width < kPatchSide || region.height < kPatchSide ||
      region.u0 + region.width > image.width || region.v0 + region.height > image.height) {
    throw Error(ErrorCode::kInvalidArgument, "extract_descriptor: mask outside the image");
  }
  Descriptor d;
  normalized_patch(image, region, d.values.data());
  orientation_histogram(image, region, d.values.data() + kPatchSize);
  radial_spectrum(image, region, d.values.data() + kPatchSize + kOrientationBins);
  return d;
}

void ClassifierConfig::validate() const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "K_tex must be >= 1");
  if (!(laplace >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "Laplace beta must be >= 0");
  if (!(patch_weight >= 0.0 && histogram_weight >= 0.0 && spectrum_weight >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "descriptor block weights must be >= 0");
  }
}

ClassifierModel ClassifierModel::train(const std::vector<Descriptor>& descriptors,
                                       const std::vector<TextureClass>& labels,
                                       const ClassifierConfig& config) {
  config.validate();
  if (descriptors.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "texture training: descriptors and labels differ in length");
  }
  if (descriptors.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "texture training: no exemplars");
  std::array<long, kClassCount> counts{};
  for (TextureClass c : labels) ++counts[static_cast<std::size_t>(class_index(c))];
  for (int i = 0; i < kClassCount; ++i) {
    if (counts[i] < config.k) {
      throw Error(ErrorCode::kEmptyTrainingSet,
                  std::string("texture training: class ") + kNames[i] + " has fewer than K exemplars");
    }
  }

  ClassifierModel model;
  model.config_ = config;
  const double n = static_cast<double>(descriptors.size());
  for (int j = 0; j < kDescriptorSize; ++j) {
    double mean = 0.0;
    for (const Descriptor& d : descriptors) mean += d.values[j];
    mean /= n;
    double var = 0.0;
    for (const Descriptor& d : descriptors) var += (d.values[j] - mean) * (d.values[j] - mean);
    const double sd = std::sqrt(var / n);
    const double weight = j < kPatchSize                      ? config.patch_weight
                          : j < kPatchSize + kOrientationBins ? config.histogram_weight
                                                              : config.spectrum_weight;
    model.transform_mean_[j] = mean;
    model.transform_scale_[j] = sd > 1e-12 ? weight / sd : 0.0;
  }
  model.exemplars_.resize(descriptors.size() * kDescriptorSize);
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    model.transform(descriptors[i], model.exemplars_.data() + i * kDescriptorSize);
  }
  model.labels_ = labels;
  for (int i = 0; i < kClassCount; ++i) model.priors_[i] = counts[i] / n;
  return model;
}

void ClassifierModel::transform(const Descriptor& d, double* out) const {
  for (int j = 0; j < kDescriptorSize; ++j) out[j] = (d.values[j] - transform_mean_[j]) * transform_scale_[j];
}

std::vector<int> ClassifierModel::neighbors(const Descriptor& d) const {
  if (!trained()) throw Error(ErrorCode::kUntrainedModel, "texture classifier is not trained");
  std::array<double, kDescriptorSize> q{};
  transform(d, q.data());
  std::vector<std::pair<double, int>> dist(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const double* row = exemplars_.data() + i * kDescriptorSize;
    double acc = 0.0;
    for (int j = 0; j < kDescriptorSize; ++j) {
      const double e = row[j] - q[j];
      acc += e * e;
    }
    dist[i] = {acc, static_cast<int>(i)};
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(config_.k), dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
  std::vector<int> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

Likelihood classify(const Descriptor& d, const ClassifierModel& model) {
  for (double v : d.values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "classify: non-finite descriptor");
  }
  const std::vector<int> nn = model.neighbors(d);
  std::array<int, kClassCount> votes{};
  for (int idx : nn) ++votes[static_cast<std::size_t>(class_index(model.label(idx)))];
  const double beta = model.config().laplace;
  const double denom = static_cast<double>(nn.size()) + kClassCount * beta;
  Likelihood p{};
  for (int i = 0; i < kClassCount; ++i) p[i] = (votes[i] + beta) / denom;
  return p;
}

ScoreState ScoreState::uniform() {
  ScoreState s;
  s.s.fill(1.0 / kClassCount);
  return s;
}

void ScoreState::validate() const {
  double sum = 0.0;
  for (double v : s) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "score entries must be finite and >= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::kInvalidArgument, "scores must sum to 1");
}

ScoreState accumulate(const ScoreState& state, const Likelihood& p) {
  ScoreState next;
  double total = 0.0;
  for (int i = 0; i < kClassCount; ++i) {
    next.s[i] = 5.0 * state.s[i] + p[i];
    total += next.s[i];
  }
  for (double& v : next.s) v /= total;
  next.step = state.step + 1;
  return next;
}

TextureClass argmax(const Likelihood& values) {
  int best = 0;
  for (int i = 1; i < kClassCount; ++i) {
    if (values[i] > values[best]) best = i;
  }
  return static_cast<TextureClass>(best);
}

TextureClass predict(const ScoreState& state) { return argmax(state.s); }

long ConfusionMatrix::total() const {
  long n = 0;
  for (const auto& row : counts) n += std::accumulate(row.begin(), row.end(), 0L);
  return n;
}

double ConfusionMatrix::accuracy() const {
  const long n = total();
  if (n == 0) return 0.0;
  long hits = 0;
  for (int i = 0; i < kClassCount; ++i) hits += counts[i][i];
  return static_cast<double>(hits) / n;
}

std::array<std::optional<double>, kClassCount> ConfusionMatrix::per_class_accuracy() const {
  std::array<std::optional<double>, kClassCount> out{};
  for (int i = 0; i < kClassCount; ++i) {
    const long row = std::accumulate(counts[i].begin(), counts[i].end(), 0L);
    if (row > 0) out[i] = static_cast<double>(counts[i][i]) / row;
  }
  return out;
}

std::array<std::array<double, kClassCount>, kClassCount> ConfusionMatrix::row_normalized() const {
  std::array<std::array<double, kClassCount>, kClassCount> out{};
  for (int i = 0; i < kClassCount; ++i) {
    const long row = std::accumulate(counts[i].begin(), counts[i].end(), 0L);
    for (int j = 0; j < kClassCount; ++j) out[i][j] = row > 0 ? static_cast<double>(counts[i][j]) / row : 0.0;
  }
  return out;
}

ConfusionMatrix confusion_matrix(const std::vector<TextureClass>& truth,
                                 const std::vector<TextureClass>& prediction) {
  if (truth.size() != prediction.size()) {
    throw Error(ErrorCode::kLengthMismatch, "confusion_matrix: truth has " + std::to_string(truth.size()) +
                                                " entries, prediction " + std::to_string(prediction.size()));
  }
  ConfusionMatrix m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++m.counts[static_cast<std::size_t>(class_index(truth[i]))][static_cast<std::size_t>(class_index(prediction[i]))];
  }
  return m;
}

LabeledDescriptors render_training_frames(const tactile::GelPadModel& pad,
                                          const TextureLibrary& library,
                                          const TrainingOptions& options, std::uint64_t seed) {
  if (options.per_class < 1) throw Error(ErrorCode::kInvalidArgument, "texture training: per_class must be >= 1");
  if (!(options.min_normal_force > 0.0 && options.max_normal_force >= options.min_normal_force)) {
    throw Error(ErrorCode::kInvalidArgument, "texture training: invalid normal force range");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> normal(options.min_normal_force, options.max_normal_force);
  std::uniform_real_distribution<double> shear(-options.max_shear, options.max_shear);
  std::uniform_real_distribution<double> centre(-0.3, 0.3);
  std::uniform_real_distribution<double> offset(0.0, 25.6);
  const ContactMask mask = central_mask(pad);

  LabeledDescriptors out;
  for (int c = 0; c < kClassCount; ++c) {
    const TextureClass cls = class_from_index(c);
    for (int s = 0; s < options.per_class; ++s) {
      if (cls == TextureClass::kNonContact) {
        const tactile::MarkerField field =
            tactile::marker_displacements(Wrench::zero(Frame::kEndEffector), pad, Vec2::Zero(), rng);
        const std::uint64_t noise_seed = rng();
        const tactile::TactileImage img = tactile::render_tactile_image(field, std::nullopt, pad, noise_seed);
        out.descriptors.push_back(extract_descriptor(img, std::nullopt));
      } else {
        const Vec3 force(shear(rng), shear(rng), normal(rng));
        const double cx = centre(rng);
        const double cy = centre(rng);
        const Vec2 center(cx, cy);
        const tactile::MarkerField field = tactile::marker_displacements(
            Wrench{force, Vec3::Zero(), Frame::kEndEffector}, pad, center, rng);
        tactile::ContactPatch patch;
        patch.center = center;
        patch.normal_force = force.z();
        patch.radius = tactile::contact_radius(force.z());
        const double ox = offset(rng);
        const double oy = offset(rng);
        patch.texture_offset = Vec2(ox, oy);
        patch.relief = library.relief(cls);
        const std::uint64_t noise_seed = rng();
        const tactile::TactileImage img = tactile::render_tactile_image(field, patch, pad, noise_seed);
        out.descriptors.push_back(extract_descriptor(img, mask));
      }
      out.labels.push_back(cls);
    }
  }
  return out;
}

}  // namespace aerotact::texture
