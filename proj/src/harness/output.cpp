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
#include <fstream>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "aerotact/harness.hpp"

namespace aerotact::harness {

namespace {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

struct Span {
  double from;
  double to;
};

constexpr double kWidth = 900, kHeight = 360, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr std::size_t kMaxPoints = 3000;

std::string line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, const std::vector<Span>& shaded) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= y0) y1 = y0 + 1.0;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  const auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kWidth, kHeight);
  for (const Span& s : shaded) {
    fmt::format_to(std::back_inserter(svg),
                   "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#cfe0ff\"/>\n",
                   px(s.from), kTop, std::max(0.5, px(s.to) - px(s.from)), ph);
  }
  fmt::format_to(std::back_inserter(svg),
                 "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
                 kTop, pw, ph);
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0;
    const double yv = y0 + (y1 - y0) * i / 5.0;
    fmt::format_to(std::back_inserter(svg), "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.3g}</text>\n",
                   px(xv), kTop + ph + 18, xv);
    fmt::format_to(std::back_inserter(svg), "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3g}</text>\n",
                   kLeft - 6, py(yv) + 4, yv);
  }
  fmt::format_to(std::back_inserter(svg), "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                 kWidth / 2, title);
  fmt::format_to(std::back_inserter(svg), "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                 kLeft + pw / 2, kHeight - 10, x_label);
  fmt::format_to(std::back_inserter(svg),
                 "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
                 kTop + ph / 2, kTop + ph / 2, y_label);
  int legend = 0;
  for (const Series& s : series) {
    const std::size_t stride = std::max<std::size_t>(1, s.x.size() / kMaxPoints);
    svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); i += stride) {
      fmt::format_to(std::back_inserter(svg), "{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
    }
    svg += "\"/>\n";
    fmt::format_to(std::back_inserter(svg),
                   "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>"
                   "<text x=\"{4}\" y=\"{5}\">{6}</text>\n",
                   kLeft + 10 + 170 * legend, kTop + 12, kLeft + 30 + 170 * legend, s.color,
                   kLeft + 34 + 170 * legend, kTop + 16, s.label);
    ++legend;
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<Span> contact_spans(const std::vector<ControlRow>& rows) {
  std::vector<Span> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].lambda != 1) continue;
    if (i == 0 || rows[i - 1].lambda != 1) out.push_back({rows[i].t, rows[i].t});
    out.back().to = rows[i].t;
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

template <typename Rows, typename Writer>
void write_csv(const std::filesystem::path& path, const Rows& rows, Writer writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  writer(rows, out);
}

}  // namespace

std::string force_plot_svg(const RunResult& r) {
  Series truth{"contact force (true)", "#d62728", {}, {}};
  Series estimate{"controller estimate", "#1f77b4", {}, {}};
  Series reference{"reference", "#2ca02c", {}, {}};
  for (const ControlRow& row : r.control) {
    truth.x.push_back(row.t);
    truth.y.push_back(row.force_true.z());
    estimate.x.push_back(row.t);
    estimate.y.push_back(row.force_estimate.z());
    reference.x.push_back(row.t);
    reference.y.push_back(row.force_reference);
  }
  return line_plot(fmt::format("Normal force, {} ({})", r.scenario.name, sensor_mode_name(r.scenario.sensor_mode)),
                   "time [s]", "force [N]", {truth, estimate, reference}, contact_spans(r.control));
}

std::string position_plot_svg(const RunResult& r) {
  Series err{"position error", "#9467bd", {}, {}};
  for (const ControlRow& row : r.control) {
    err.x.push_back(row.t);
    const Vec3 e = row.lambda == 1 ? Vec3(row.position - row.operating_position) : row.position_error;
    err.y.push_back(1000.0 * e.norm());
  }
  return line_plot(fmt::format("Position error, {}", r.scenario.name), "time [s]", "error [mm]", {err},
                   contact_spans(r.control));
}

std::string confusion_csv(const texture::ConfusionMatrix& m) {
  std::string out = "truth";
  for (int j = 0; j < texture::kClassCount; ++j) out += std::string(",") + texture::class_name(texture::class_from_index(j));
  out += '\n';
  for (int i = 0; i < texture::kClassCount; ++i) {
    out += texture::class_name(texture::class_from_index(i));
    for (int j = 0; j < texture::kClassCount; ++j) fmt::format_to(std::back_inserter(out), ",{}", m.counts[i][j]);
    out += '\n';
  }
  return out;
}

std::string confusion_svg(const texture::ConfusionMatrix& m) {
  constexpr double cell = 64, left = 150, top = 150;
  const auto norm = m.row_normalized();
  const double size = left + cell * texture::kClassCount + 20;
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" font-family=\"sans-serif\" "
      "font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{1}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">Texture confusion (accuracy {2:.4f})</text>\n",
      size, size / 2, m.accuracy());
  for (int i = 0; i < texture::kClassCount; ++i) {
    const char* name = texture::class_name(texture::class_from_index(i));
    fmt::format_to(std::back_inserter(svg), "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", left - 6,
                   top + cell * (i + 0.5) + 4, name);
    fmt::format_to(std::back_inserter(svg),
                   "<text x=\"{0}\" y=\"{1}\" text-anchor=\"start\" transform=\"rotate(-45 {0} {1})\">{2}</text>\n",
                   left + cell * (i + 0.5), top - 6, name);
    for (int j = 0; j < texture::kClassCount; ++j) {
      const double v = norm[i][j];
      const int shade = static_cast<int>(std::lround(255.0 * (1.0 - v)));
      fmt::format_to(std::back_inserter(svg),
                     "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"rgb({},{},255)\" stroke=\"#888\"/>"
                     "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"{}\">{:.2f}</text>\n",
                     left + cell * j, top + cell * i, cell, cell, shade, shade, left + cell * (j + 0.5),
                     top + cell * (i + 0.5) + 4, v > 0.5 ? "white" : "black", v);
    }
  }
  svg += "</svg>\n";
  return svg;
}

void write_run(const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_csv(dir / "control.csv", r.control, write_control_csv);
  write_csv(dir / "tactile.csv", r.tactile, write_tactile_csv);
  write_csv(dir / "estimator.csv", r.estimator, write_estimator_csv);
  if (!r.texture.empty()) {
    write_csv(dir / "texture.csv", r.texture, write_texture_csv);
    std::vector<texture::TextureClass> truth, pred;
    for (const TextureRow& row : r.texture) {
      truth.push_back(row.truth);
      pred.push_back(row.frame_prediction);
    }
    const texture::ConfusionMatrix m = texture::confusion_matrix(truth, pred);
    write_file(dir / "confusion.csv", confusion_csv(m));
    write_file(dir / "confusion.svg", confusion_svg(m));
  }
  write_file(dir / "metrics.json", metrics_json(r));
  write_file(dir / "force.svg", force_plot_svg(r));
  write_file(dir / "position_error.svg", position_plot_svg(r));
  if (!r.frames.empty()) {
    std::filesystem::create_directories(dir / "frames");
    for (std::size_t i = 0; i < r.frames.size(); ++i) {
      std::ofstream out(dir / "frames" / fmt::format("frame_{:05d}.pgm", i), std::ios::binary);
      tactile::write_pgm(r.frames[i], out);
    }
  }
}

}  // namespace aerotact::harness
