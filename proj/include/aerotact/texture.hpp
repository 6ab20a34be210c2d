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

// Surface texture recognition from tactile images.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aerotact/common.hpp"
#include "aerotact/tactile.hpp"

namespace aerotact::texture {

inline constexpr int kClassCount = 7;

enum class TextureClass : int {
  kNonContact = 0,
  kPrintedFlatPaper = 1,
  kWoodGrain = 2,
  kMarbleMosaic = 3,
  kQuartzStone = 4,
  kDiamondVinyl = 5,
  kFoamMat = 6,
};

const char* class_name(TextureClass c);
std::optional<TextureClass> class_from_name(std::string_view name);
TextureClass class_from_index(int index);
inline int class_index(TextureClass c) { return static_cast<int>(c); }

// 256 x 256 cells at 0.1 mm, periodic.
tactile::HeightMap synth_texture(TextureClass c, std::uint64_t seed);

inline constexpr int kPatchSide = 16;
inline constexpr int kPatchSize = kPatchSide * kPatchSide;
inline constexpr int kOrientationBins = 8;
inline constexpr int kSpectralBands = 6;
inline constexpr int kDescriptorSize = kPatchSize + kOrientationBins + kSpectralBands;  // 270

struct Descriptor {
  std::array<double, kDescriptorSize> values{};
  bool operator==(const Descriptor& other) const { return values == other.values; }
};

// Pixel rectangle [u0, u0 + width) x [v0, v0 + height).
struct ContactMask {
  int u0 = 0;
  int v0 = 0;
  int width = 0;
  int height = 0;
};

// Central square used for contact frames, side in pixels.
ContactMask central_mask(const tactile::GelPadModel& pad, int side = 96);

// No mask: the full frame.
Descriptor extract_descriptor(const tactile::TactileImage& image,
                              const std::optional<ContactMask>& mask);

struct ClassifierConfig {
  int k = 5;                    // K_tex
  double laplace = 0.1;         // beta
  double patch_weight = 0.05;   // block weights after per-dimension standardization
  double histogram_weight = 1.0;
  double spectrum_weight = 1.0;

  void validate() const;
};

class ClassifierModel {
 public:
  ClassifierModel() = default;

  // Standardizes each descriptor dimension over the training set. Every class
  // needs at least K exemplars.
  static ClassifierModel train(const std::vector<Descriptor>& descriptors,
                               const std::vector<TextureClass>& labels,
                               const ClassifierConfig& config);

  bool trained() const { return !labels_.empty(); }
  const ClassifierConfig& config() const { return config_; }
  const std::array<double, kClassCount>& priors() const { return priors_; }
  std::size_t size() const { return labels_.size(); }

  // Exact K nearest exemplars, ordered by (distance, index).
  std::vector<int> neighbors(const Descriptor& d) const;
  TextureClass label(int index) const { return labels_[static_cast<std::size_t>(index)]; }

 private:
  std::array<double, kDescriptorSize> transform_scale_{};
  std::array<double, kDescriptorSize> transform_mean_{};
  std::vector<double> exemplars_;  // row-major, transformed
  std::vector<TextureClass> labels_;
  std::array<double, kClassCount> priors_{};
  ClassifierConfig config_;

  void transform(const Descriptor& d, double* out) const;
};

using Likelihood = std::array<double, kClassCount>;

Likelihood classify(const Descriptor& d, const ClassifierModel& model);

struct ScoreState {
  Likelihood s{};
  long step = 0;

  static ScoreState uniform();
  void validate() const;
};

// s' = (5 s + p) / sum(5 s + p).
ScoreState accumulate(const ScoreState& state, const Likelihood& p);

// Argmax, ties to the lowest index.
TextureClass predict(const ScoreState& state);
TextureClass argmax(const Likelihood& values);

struct ConfusionMatrix {
  std::array<std::array<long, kClassCount>, kClassCount> counts{};  // [truth][prediction]

  long total() const;
  double accuracy() const;  // trace / total
  // Diagonal over row sum; empty rows report nullopt.
  std::array<std::optional<double>, kClassCount> per_class_accuracy() const;
  std::array<std::array<double, kClassCount>, kClassCount> row_normalized() const;
};

ConfusionMatrix confusion_matrix(const std::vector<TextureClass>& truth,
                                 const std::vector<TextureClass>& prediction);

// Labeled training frames rendered from the synthetic textures.
struct TrainingOptions {
  int per_class = 300;
  double min_normal_force = 2.0;  // N
  double max_normal_force = 8.0;  // N
  double max_shear = 1.5;         // N
  std::uint64_t texture_seed = 1;
};

struct TextureLibrary {
  std::array<tactile::HeightMap, kClassCount> maps;  // empty for non-contact

  static TextureLibrary build(std::uint64_t texture_seed);
  const tactile::HeightMap* relief(TextureClass c) const;
};

struct LabeledDescriptors {
  std::vector<Descriptor> descriptors;
  std::vector<TextureClass> labels;
};

LabeledDescriptors render_training_frames(const tactile::GelPadModel& pad,
                                          const TextureLibrary& library,
                                          const TrainingOptions& options, std::uint64_t seed);

}  // namespace aerotact::texture
