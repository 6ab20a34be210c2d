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
#include <string>
#include <utility>

#include "aerotact/estimation.hpp"

namespace aerotact::estimation {

namespace {

using Candidate = std::pair<double, int>;  // (squared distance, sample index)

}  // namespace

KnnRegressor::KnnRegressor(const TrainingSet& set, const KnnConfig& config) : config_(config) {
  if (set.size() == 0) throw Error(ErrorCode::kEmptyTrainingSet, "kNN: empty training set");
  set.validate();
  if (config.k < 1 || static_cast<std::size_t>(config.k) > set.size()) {
    throw Error(ErrorCode::kInvalidArgument, "kNN: K must satisfy 1 <= K <= N (K=" +
                                                 std::to_string(config.k) + ", N=" +
                                                 std::to_string(set.size()) + ")");
  }
  features_.reserve(set.size() * tactile::kFeatureSize);
  for (const auto& f : set.features) features_.insert(features_.end(), f.values.begin(), f.values.end());
  forces_ = set.forces;
}

Vec3 KnnRegressor::estimate(const tactile::TactileFeature& query) const {
  const std::size_t k = static_cast<std::size_t>(config_.k);
  const std::size_t n = forces_.size();
  const double* q = query.values.data();

  // Max-heap on (distance, index) holding the K best so far. Samples are
  // visited in index order, so a newcomer only displaces the current worst
  // when strictly closer; partial sums let most rows stop early.
  std::vector<Candidate> heap;
  heap.reserve(k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = features_.data() + i * tactile::kFeatureSize;
    const bool full = heap.size() == k;
    const double bound = full ? heap.front().first : 0.0;
    double acc = 0.0;
    bool rejected = false;
    for (int j = 0; j < tactile::kFeatureSize; ++j) {
      const double d = row[j] - q[j];
      acc += d * d;
      if (full && acc >= bound) {
        rejected = true;
        break;
      }
    }
    if (rejected) continue;
    if (full) {
      std::pop_heap(heap.begin(), heap.end());
      heap.pop_back();
    }
    heap.emplace_back(acc, static_cast<int>(i));
    std::push_heap(heap.begin(), heap.end());
  }
  std::sort(heap.begin(), heap.end());

  if (!config_.distance_weighted) {
    Vec3 sum = Vec3::Zero();
    for (const Candidate& c : heap) sum += forces_[c.second];
    return sum / static_cast<double>(k);
  }
  Vec3 sum = Vec3::Zero();
  double weight = 0.0;
  for (const Candidate& c : heap) {
    const double w = 1.0 / (std::sqrt(c.first) + 1e-9);
    sum += w * forces_[c.second];
    weight += w;
  }
  return sum / weight;
}

Vec3 knn_estimate(const tactile::TactileFeature& feature, const TrainingSet& set,
                  const KnnConfig& config) {
  return KnnRegressor(set, config).estimate(feature);
}

}  // namespace aerotact::estimation
