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
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "aerotact/texture.hpp"

namespace aerotact::texture {
namespace {

using tactile::GelPadModel;
using tactile::HeightMap;

// Fraction of non-DC spectral energy in the strongest of 8 orientation sectors.
double dominant_orientation_fraction(const HeightMap& m) {
  const int n = m.width;
  using C = std::complex<double>;
  std::vector<C> rows(static_cast<std::size_t>(n) * n), full(rows.size());
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < n; ++k) {
      C acc = 0.0;
      for (int u = 0; u < n; ++u) acc += m.heights[v * n + u] * std::polar(1.0, -2.0 * kPi * k * u / n);
      rows[v * n + k] = acc;
    }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      C acc = 0.0;
      for (int v = 0; v < n; ++v) acc += rows[v * n + k] * std::polar(1.0, -2.0 * kPi * l * v / n);
      full[l * n + k] = acc;
    }
  std::array<double, 8> sector{};
  double total = 0.0;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) {
      const int fx = k <= n / 2 ? k : k - n;
      const int fy = l <= n / 2 ? l : l - n;
      if (fx == 0 && fy == 0) continue;
      double angle = std::atan2(fy, fx);
      if (angle < 0) angle += kPi;
      const int bin = std::min(7, static_cast<int>(angle / kPi * 8.0));
      const double e = std::norm(full[l * n + k]);
      sector[bin] += e;
      total += e;
    }
  return *std::max_element(sector.begin(), sector.end()) / total;
}

tactile::TactileImage contact_frame(const GelPadModel& pad, const HeightMap* relief, double force,
                                    std::uint64_t seed) {
  const auto field = tactile::marker_displacements(Wrench{Vec3(0, 0, force), Vec3::Zero(), Frame::kEndEffector},
                                                   pad, Vec2::Zero(), seed);
  tactile::ContactPatch patch;
  patch.normal_force = force;
  patch.radius = tactile::contact_radius(force);
  patch.relief = relief;
  return tactile::render_tactile_image(field, patch, pad, seed);
}

TEST(Classes, StableEncodingAndNames) {
  for (int i = 0; i < kClassCount; ++i) {
    const TextureClass c = class_from_index(i);
    EXPECT_EQ(class_index(c), i);
    EXPECT_EQ(class_from_name(class_name(c)), c);
  }
  EXPECT_EQ(class_index(TextureClass::kFoamMat), 6);
  EXPECT_FALSE(class_from_name("velvet").has_value());
  EXPECT_THROW(class_from_index(7), Error);
}

TEST(Synth, FlatPaperIsZero) {
  const HeightMap m = synth_texture(TextureClass::kPrintedFlatPaper, 3);
  EXPECT_FALSE(m.empty());
  EXPECT_EQ(m.max_abs(), 0.0);
}

TEST(Synth, Deterministic) {
  for (int i = 1; i < kClassCount; ++i) {
    const TextureClass c = class_from_index(i);
    EXPECT_EQ(synth_texture(c, 5).heights, synth_texture(c, 5).heights);
  }
  EXPECT_NE(synth_texture(TextureClass::kQuartzStone, 5).heights,
            synth_texture(TextureClass::kQuartzStone, 6).heights);
  EXPECT_THROW(synth_texture(TextureClass::kNonContact, 1), Error);
}

TEST(Synth, WoodIsDirectionalFoamIsNot) {
  const double wood = dominant_orientation_fraction(synth_texture(TextureClass::kWoodGrain, 2));
  const double foam = dominant_orientation_fraction(synth_texture(TextureClass::kFoamMat, 2));
  EXPECT_GT(wood, 0.7);
  EXPECT_LT(foam, 0.6);
}

TEST(Descriptor, LengthAndNormalization) {
  const GelPadModel pad;
  const HeightMap wood = synth_texture(TextureClass::kWoodGrain, 1);
  const Descriptor d = extract_descriptor(contact_frame(pad, &wood, 5.0, 1), central_mask(pad));
  EXPECT_EQ(d.values.size(), 270u);
  double mean = 0.0, sq = 0.0;
  for (int i = 0; i < kPatchSize; ++i) mean += d.values[i];
  mean /= kPatchSize;
  for (int i = 0; i < kPatchSize; ++i) sq += (d.values[i] - mean) * (d.values[i] - mean);
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(sq / kPatchSize, 1.0, 1e-9);
  for (double v : d.values) EXPECT_TRUE(std::isfinite(v));
}

TEST(Descriptor, IdenticalImagesIdenticalDescriptors) {
  const GelPadModel pad;
  const HeightMap marble = synth_texture(TextureClass::kMarbleMosaic, 1);
  EXPECT_EQ(extract_descriptor(contact_frame(pad, &marble, 4.0, 3), central_mask(pad)),
            extract_descriptor(contact_frame(pad, &marble, 4.0, 3), central_mask(pad)));
}

TEST(Descriptor, PatchIsBrightnessInvariant) {
  const GelPadModel pad;
  const HeightMap quartz = synth_texture(TextureClass::kQuartzStone, 1);
  const tactile::TactileImage a = contact_frame(pad, &quartz, 5.0, 4);
  tactile::TactileImage b = a;
  for (float& p : b.pixels) p *= 1.1f;
  const Descriptor da = extract_descriptor(a, central_mask(pad));
  const Descriptor db = extract_descriptor(b, central_mask(pad));
  for (int i = 0; i < kPatchSize; ++i) EXPECT_NEAR(da.values[i], db.values[i], 1e-5);
}

TEST(Descriptor, FlatPaperContactDiffersFromNoContact) {
  const GelPadModel pad;
  const HeightMap printed = synth_texture(TextureClass::kPrintedFlatPaper, 1);
  const Descriptor touch = extract_descriptor(contact_frame(pad, &printed, 5.0, 2), central_mask(pad));
  const auto rest = tactile::render_tactile_image(tactile::MarkerField::at_rest(pad), std::nullopt, pad, 2);
  const Descriptor free = extract_descriptor(rest, std::nullopt);
  EXPECT_FALSE(touch == free);
}

Descriptor unit(int dim, double v) {
  Descriptor d;
  d.values[dim] = v;
  return d;
}

// Seven well separated clusters in the histogram block.
void toy_set(std::vector<Descriptor>& ds, std::vector<TextureClass>& ls, int per_class) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 0.01);
  for (int c = 0; c < kClassCount; ++c)
    for (int i = 0; i < per_class; ++i) {
      Descriptor d = unit(kPatchSize + (c % kOrientationBins), 1.0 + n(rng));
      d.values[kPatchSize + kOrientationBins] = 0.1 * c + n(rng);
      ds.push_back(d);
      ls.push_back(class_from_index(c));
    }
}

TEST(Classifier, ExemplarWithKOneIsItsClass) {
  std::vector<Descriptor> ds;
  std::vector<TextureClass> ls;
  toy_set(ds, ls, 5);
  ClassifierConfig cfg;
  cfg.k = 1;
  const ClassifierModel m = ClassifierModel::train(ds, ls, cfg);
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(argmax(classify(ds[i], m)), ls[i]);
}

TEST(Classifier, UnanimousNeighboursWithoutSmoothing) {
  std::vector<Descriptor> ds;
  std::vector<TextureClass> ls;
  toy_set(ds, ls, 10);
  ClassifierConfig cfg;
  cfg.laplace = 0.0;
  const ClassifierModel m = ClassifierModel::train(ds, ls, cfg);
  const Likelihood p = classify(ds[23], m);
  EXPECT_EQ(p[class_index(ls[23])], 1.0);
}

TEST(Classifier, LikelihoodIsOnSimplex) {
  std::vector<Descriptor> ds;
  std::vector<TextureClass> ls;
  toy_set(ds, ls, 8);
  const ClassifierModel m = ClassifierModel::train(ds, ls, ClassifierConfig{});
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int t = 0; t < 200; ++t) {
    Descriptor q;
    for (double& v : q.values) v = n(rng);
    const Likelihood p = classify(q, m);
    double sum = 0.0;
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    // (votes + beta) / (K + 7 beta)
    for (double v : p) {
      const double votes = v * (5 + 0.7) - 0.1;
      EXPECT_NEAR(votes, std::round(votes), 1e-9);
    }
  }
}

TEST(Classifier, UntrainedAndUnderpopulated) {
  const ClassifierModel empty;
  try {
    classify(Descriptor{}, empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUntrainedModel);
  }
  std::vector<Descriptor> ds;
  std::vector<TextureClass> ls;
  toy_set(ds, ls, 3);
  try {
    ClassifierModel::train(ds, ls, ClassifierConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyTrainingSet);
  }
}

TEST(Classifier, HeldOutSyntheticFrames) {
  const GelPadModel pad;
  const TextureLibrary lib = TextureLibrary::build(1);
  TrainingOptions opts;
  const LabeledDescriptors train = render_training_frames(pad, lib, opts, 11);
  opts.per_class = 60;
  const LabeledDescriptors test = render_training_frames(pad, lib, opts, 12);
  const ClassifierModel m = ClassifierModel::train(train.descriptors, train.labels, ClassifierConfig{});
  std::vector<TextureClass> pred;
  for (const auto& d : test.descriptors) pred.push_back(argmax(classify(d, m)));
  EXPECT_GE(confusion_matrix(test.labels, pred).accuracy(), 0.93);
}

Likelihood one_hot(int c) {
  Likelihood p{};
  p[c] = 1.0;
  return p;
}

TEST(Accumulator, UniformStaysUniform) {
  ScoreState s = ScoreState::uniform();
  Likelihood p;
  p.fill(1.0 / 7.0);
  for (int i = 0; i < 20; ++i) s = accumulate(s, p);
  for (double v : s.s) EXPECT_NEAR(v, 1.0 / 7.0, 1e-15);
  EXPECT_EQ(s.step, 20);
}

TEST(Accumulator, OneHotConvergesGeometrically) {
  // Sum of 5 s + p is 6, so the on-class share follows s <- (5 s + 1) / 6.
  ScoreState s = ScoreState::uniform();
  double on = 1.0 / 7.0;
  int first_above = -1;
  for (int k = 1; k <= 30; ++k) {
    s = accumulate(s, one_hot(3));
    on = (5.0 * on + 1.0) / 6.0;
    EXPECT_NEAR(s.s[3], on, 1e-12);
    if (first_above < 0 && s.s[3] > 0.93) first_above = k;
  }
  EXPECT_EQ(first_above, 14);
  ScoreState five = ScoreState::uniform();
  for (int k = 0; k < 5; ++k) five = accumulate(five, one_hot(3));
  // 1 - (6/7)(5/6)^5
  EXPECT_NEAR(five.s[3], 1.0 - 6.0 / 7.0 * std::pow(5.0 / 6.0, 5), 1e-12);
  EXPECT_NEAR(five.s[3], 0.6555, 1e-4);
}

TEST(Accumulator, NormalizationKeepsStepArgmaxAndSimplex) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScoreState s = ScoreState::uniform();
  for (int k = 0; k < 500; ++k) {
    Likelihood p;
    double sum = 0.0;
    for (double& v : p) sum += (v = u(rng));
    for (double& v : p) v /= sum;
    Likelihood raw;
    for (int i = 0; i < kClassCount; ++i) raw[i] = 5.0 * s.s[i] + p[i];
    s = accumulate(s, p);
    EXPECT_EQ(predict(s), argmax(raw));
    double total = 0.0;
    for (double v : s.s) {
      EXPECT_GE(v, 0.0);
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Accumulator, PredictionPersistsUnderConstantInput) {
  ScoreState s = ScoreState::uniform();
  for (int i = 0; i < 10; ++i) s = accumulate(s, one_hot(1));
  bool switched = false;
  for (int i = 0; i < 200; ++i) {
    s = accumulate(s, one_hot(5));
    if (predict(s) == TextureClass::kDiamondVinyl) switched = true;
    else EXPECT_FALSE(switched);
  }
  EXPECT_TRUE(switched);
}

TEST(Predict, OneHotAndTieBreak) {
  ScoreState s;
  s.s = one_hot(4);
  EXPECT_EQ(predict(s), TextureClass::kQuartzStone);
  EXPECT_EQ(predict(ScoreState::uniform()), TextureClass::kNonContact);
}

TEST(Confusion, IdentityAndConstantColumn) {
  std::vector<TextureClass> truth;
  for (int i = 0; i < 70; ++i) truth.push_back(class_from_index(i % kClassCount));
  const ConfusionMatrix id = confusion_matrix(truth, truth);
  EXPECT_EQ(id.accuracy(), 1.0);
  for (int i = 0; i < kClassCount; ++i)
    for (int j = 0; j < kClassCount; ++j) EXPECT_EQ(id.counts[i][j], i == j ? 10 : 0);

  const std::vector<TextureClass> constant(truth.size(), TextureClass::kWoodGrain);
  const ConfusionMatrix col = confusion_matrix(truth, constant);
  for (int i = 0; i < kClassCount; ++i)
    for (int j = 0; j < kClassCount; ++j) EXPECT_EQ(col.counts[i][j], j == 2 ? 10 : 0);
  EXPECT_NEAR(col.accuracy(), 1.0 / 7.0, 1e-15);
  const auto rows = col.row_normalized();
  EXPECT_EQ(rows[0][2], 1.0);
}

TEST(Confusion, LengthMismatch) {
  try {
    confusion_matrix({TextureClass::kFoamMat}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

}  // namespace
}  // namespace aerotact::texture
