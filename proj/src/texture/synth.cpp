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
#include <random>
#include <string>

#include "aerotact/texture.hpp"

namespace aerotact::texture {

namespace {

constexpr int kCells = 256;
constexpr double kCellMm = 0.1;
constexpr double kTile = kCells * kCellMm;  // mm, texture period
constexpr double kAmplitude = 0.05;         // mm

tactile::HeightMap blank() {
  tactile::HeightMap map;
  map.width = kCells;
  map.height = kCells;
  map.mm_per_cell = kCellMm;
  map.heights.assign(static_cast<std::size_t>(kCells) * kCells, 0.0);
  return map;
}

double& cell(tactile::HeightMap& m, int x, int y) {
  return m.heights[static_cast<std::size_t>(y) * m.width + x];
}

// Shortest periodic difference on the tile.
double wrap_delta(double d) { return d - kTile * std::round(d / kTile); }

void rescale(tactile::HeightMap& m) {
  double lo = m.heights.front(), hi = lo;
  for (double h : m.heights) {
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  const double span = hi - lo;
  if (span <= 0.0) return;
  for (double& h : m.heights) h = kAmplitude * ((h - lo) / span - 0.5) * 2.0;
}

tactile::HeightMap wood_grain(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Integer wave vector keeps the tile periodic; about 1.2 mm between ridges.
  const int kx = 20 + static_cast<int>(unit(rng) * 3.0);
  const int ky = static_cast<int>(unit(rng) * 5.0) - 2;
  struct Wobble {
    int fx, fy;
    double amp, phase;
  };
  std::vector<Wobble> wobbles;
  for (int i = 0; i < 4; ++i) {
    wobbles.push_back({1 + static_cast<int>(unit(rng) * 3.0), 1 + static_cast<int>(unit(rng) * 3.0),
                       0.4 + 0.8 * unit(rng), 2.0 * kPi * unit(rng)});
  }
  tactile::HeightMap m = blank();
  for (int y = 0; y < kCells; ++y) {
    for (int x = 0; x < kCells; ++x) {
      const double u = static_cast<double>(x) / kCells;
      const double v = static_cast<double>(y) / kCells;
      double jitter = 0.0;
      for (const Wobble& w : wobbles) jitter += w.amp * std::sin(2.0 * kPi * (w.fx * u + w.fy * v) + w.phase);
      const double phase = 2.0 * kPi * (kx * u + ky * v) + jitter;
      cell(m, x, y) = std::sin(phase) + 0.35 * std::sin(2.0 * phase);
    }
  }
  rescale(m);
  return m;
}

tactile::HeightMap marble_mosaic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.0, kTile);
  std::uniform_real_distribution<double> level(-0.3, 0.3);
  constexpr int kSites = 160;  // roughly 2 mm cells
  std::vector<Vec2> sites;
  std::vector<double> levels;
  for (int i = 0; i < kSites; ++i) {
    const double sx = pos(rng);
    const double sy = pos(rng);
    sites.emplace_back(sx, sy);
    levels.push_back(level(rng));
  }
  constexpr double kGroove = 0.12;  // mm
  tactile::HeightMap m = blank();
  for (int y = 0; y < kCells; ++y) {
    for (int x = 0; x < kCells; ++x) {
      const Vec2 p(x * kCellMm, y * kCellMm);
      double d1 = 1e9, d2 = 1e9;
      int owner = 0;
      for (int i = 0; i < kSites; ++i) {
        const double dx = wrap_delta(p.x() - sites[i].x());
        const double dy = wrap_delta(p.y() - sites[i].y());
        const double d = std::sqrt(dx * dx + dy * dy);
        if (d < d1) {
          d2 = d1;
          d1 = d;
          owner = i;
        } else if (d < d2) {
          d2 = d;
        }
      }
      const double edge = 0.5 * (d2 - d1);
      cell(m, x, y) = levels[owner] - std::exp(-edge * edge / (2.0 * kGroove * kGroove));
    }
  }
  rescale(m);
  return m;
}

tactile::HeightMap quartz_stone(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.0, kTile);
  std::uniform_real_distribution<double> size(0.25, 0.5);
  std::uniform_real_distribution<double> amp(0.3, 1.0);
  constexpr int kBumps = 900;
  tactile::HeightMap m = blank();
  for (int b = 0; b < kBumps; ++b) {
    const double bx = pos(rng);
    const double by = pos(rng);
    const double r = size(rng);
    const double a = amp(rng);
    const int reach = static_cast<int>(std::ceil(3.0 * r / kCellMm));
    const int cx = static_cast<int>(std::lround(bx / kCellMm));
    const int cy = static_cast<int>(std::lround(by / kCellMm));
    for (int dy = -reach; dy <= reach; ++dy) {
      for (int dx = -reach; dx <= reach; ++dx) {
        const int x = ((cx + dx) % kCells + kCells) % kCells;
        const int y = ((cy + dy) % kCells + kCells) % kCells;
        const double ex = wrap_delta(x * kCellMm - bx);
        const double ey = wrap_delta(y * kCellMm - by);
        cell(m, x, y) += a * std::exp(-(ex * ex + ey * ey) / (2.0 * r * r));
      }
    }
  }
  rescale(m);
  return m;
}

tactile::HeightMap diamond_vinyl(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int cycles = 15 + static_cast<int>(unit(rng) * 3.0);  // along each diagonal
  const double shift_a = unit(rng);
  const double shift_b = unit(rng);
  tactile::HeightMap m = blank();
  for (int y = 0; y < kCells; ++y) {
    for (int x = 0; x < kCells; ++x) {
      const double u = static_cast<double>(x) / kCells;
      const double v = static_cast<double>(y) / kCells;
      const double a = std::cos(kPi * (cycles * (u + v) + shift_a));
      const double b = std::cos(kPi * (cycles * (u - v) + shift_b));
      cell(m, x, y) = std::pow(std::abs(a), 8.0) + std::pow(std::abs(b), 8.0);
    }
  }
  rescale(m);
  return m;
}

tactile::HeightMap foam_mat(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kDomes = 10;  // per tile side, 2.56 mm spacing
  const double spacing = kTile / kDomes;
  const double radius = 0.4 * spacing * (0.95 + 0.1 * unit(rng));
  const Vec2 origin(spacing * unit(rng), spacing * unit(rng));
  tactile::HeightMap m = blank();
  for (int y = 0; y < kCells; ++y) {
    for (int x = 0; x < kCells; ++x) {
      const double px = x * kCellMm - origin.x();
      const double py = y * kCellMm - origin.y();
      const double dx = px - spacing * std::round(px / spacing);
      const double dy = py - spacing * std::round(py / spacing);
      const double q = 1.0 - (dx * dx + dy * dy) / (radius * radius);
      cell(m, x, y) = q > 0.0 ? std::sqrt(q) : 0.0;
    }
  }
  rescale(m);
  return m;
}

}  // namespace

tactile::HeightMap synth_texture(TextureClass c, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(class_index(c))));
  switch (c) {
    case TextureClass::kNonContact:
      throw Error(ErrorCode::kInvalidArgument, "synth_texture: non-contact has no height map");
    case TextureClass::kPrintedFlatPaper:
      return blank();
    case TextureClass::kWoodGrain:
      return wood_grain(rng);
    case TextureClass::kMarbleMosaic:
      return marble_mosaic(rng);
    case TextureClass::kQuartzStone:
      return quartz_stone(rng);
    case TextureClass::kDiamondVinyl:
      return diamond_vinyl(rng);
    case TextureClass::kFoamMat:
      return foam_mat(rng);
  }
  throw Error(ErrorCode::kInvalidArgument, "synth_texture: unknown class");
}

TextureLibrary TextureLibrary::build(std::uint64_t texture_seed) {
  TextureLibrary lib;
  for (int i = 1; i < kClassCount; ++i) lib.maps[i] = synth_texture(class_from_index(i), texture_seed);
  return lib;
}

const tactile::HeightMap* TextureLibrary::relief(TextureClass c) const {
  const auto& m = maps[static_cast<std::size_t>(class_index(c))];
  return m.empty() ? nullptr : &m;
}

}  // namespace aerotact::texture
