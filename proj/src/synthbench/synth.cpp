// Copyright 2026 The logorec Authors
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
#include "synthbench/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace fs = std::filesystem;

namespace logorec {
namespace {

using Rgb = std::array<int, 3>;

constexpr Rgb kRed{220, 30, 30};
constexpr Rgb kBlue{30, 60, 220};
constexpr Rgb kGreen{30, 170, 50};
constexpr Rgb kYellow{240, 210, 20};
constexpr Rgb kWhite{245, 245, 245};
constexpr Rgb kBlack{15, 15, 15};
constexpr Rgb kOrange{245, 130, 10};
constexpr Rgb kMagenta{210, 30, 200};
constexpr Rgb kCyan{20, 200, 220};

// Shape level function over glyph-local (u, v) in [-1, 1]^2: the glyph is
// {level <= 1}. Levels are positively homogeneous, so {level <= 1 - t} is the
// same shape shrunk about the centre; the band between is the outline.
using LevelFn = double (*)(double u, double v);

struct Glyph {
  const char* name;
  Rgb body;
  Rgb outline;
  LevelFn level;
};

double disc(double u, double v) { return std::hypot(u, v); }
double triangle(double u, double v) { return std::max(v, 2.0 * std::abs(u) - v); }
double inverted_triangle(double u, double v) { return triangle(u, -v); }
double square(double u, double v) { return std::max(std::abs(u), std::abs(v)); }
double cross(double u, double v) {
  const double a = std::abs(u), b = std::abs(v);
  return std::min(std::max(a / 0.36, b), std::max(a, b / 0.36));
}
double saltire(double u, double v) {
  constexpr double k = 0.70710678118654752;
  return cross((u + v) * k, (u - v) * k) * k;
}
double diamond(double u, double v) { return std::abs(u) + std::abs(v); }
double hexagon(double u, double v) {
  return std::max(std::abs(u), 0.5 * std::abs(u) + 0.8660254037844386 * std::abs(v)) / 0.8660254037844386;
}
double octagon(double u, double v) {
  return std::max({std::abs(u), std::abs(v), (std::abs(u) + std::abs(v)) / 1.3});
}
double ellipse(double u, double v) { return std::hypot(u, v / 0.55); }
double pentagon(double u, double v) {
  const double r = std::hypot(u, v);
  if (r == 0.0) return 0.0;
  constexpr double kSector = 2.0 * std::numbers::pi / 5.0;
  const double local = std::remainder(std::atan2(u, -v), kSector);
  // Distance to the edge facing this sector, normalized so vertices sit at 1.
  return r * std::cos(std::abs(local) - kSector / 2.0) / std::cos(kSector / 2.0);
}
double star(double u, double v) {
  const double r = std::hypot(u, v);
  if (r == 0.0) return 0.0;
  const double lobe = std::cos(2.5 * std::atan2(u, -v));
  return r / (0.45 + 0.55 * lobe * lobe);
}

constexpr std::array<Glyph, kGlyphCount> kGlyphs{{
    {"ringed-disc", kRed, kWhite, disc},
    {"triangle", kBlue, kYellow, triangle},
    {"square", kGreen, kBlack, square},
    {"cross", kMagenta, kWhite, cross},
    {"diamond", kOrange, kBlue, diamond},
    {"hexagon", kCyan, kBlack, hexagon},
    {"star", kYellow, kRed, star},
    {"saltire", kBlack, kYellow, saltire},
    {"ellipse", kGreen, kWhite, ellipse},
    {"pentagon", kRed, kBlack, pentagon},
    {"octagon", kBlue, kWhite, octagon},
    {"inverted-triangle", kOrange, kBlack, inverted_triangle},
}};

std::uint8_t clamp_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

// Smooth muted background: a jittered grey-ish base colour, a bilinearly
// upsampled coarse noise field, fine per-pixel noise and distractor blobs in
// low-saturation colours. All channel values stay within [55, 205].
Image render_background(const SynthSpec& spec, Rng& rng) {
  Image img(spec.width, spec.height);
  const double base = uniform_real(rng, 90.0, 170.0);
  std::array<double, 3> tint{};
  for (auto& t : tint) t = uniform_real(rng, -20.0, 20.0);
  constexpr int kGrid = 5;
  std::array<std::array<std::array<double, 3>, kGrid>, kGrid> coarse{};
  for (auto& row : coarse)
    for (auto& cell : row) {
      const double l = uniform_real(rng, -35.0, 35.0) * spec.noise_level;
      for (int c = 0; c < 3; ++c) cell[c] = l + uniform_real(rng, -8.0, 8.0) * spec.noise_level;
    }
  for (int y = 0; y < spec.height; ++y) {
    const double gy = static_cast<double>(y) / (spec.height - 1) * (kGrid - 1);
    const int y0 = std::min(static_cast<int>(gy), kGrid - 2);
    const double ty = gy - y0;
    for (int x = 0; x < spec.width; ++x) {
      const double gx = static_cast<double>(x) / (spec.width - 1) * (kGrid - 1);
      const int x0 = std::min(static_cast<int>(gx), kGrid - 2);
      const double tx = gx - x0;
      auto* p = img.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        const double top = coarse[y0][x0][c] * (1 - tx) + coarse[y0][x0 + 1][c] * tx;
        const double bot = coarse[y0 + 1][x0][c] * (1 - tx) + coarse[y0 + 1][x0 + 1][c] * tx;
        const double fine = uniform_real(rng, -5.0, 5.0) * spec.noise_level;
        p[c] = clamp_byte(std::clamp(base + tint[c] + top * (1 - ty) + bot * ty + fine, 55.0, 205.0));
      }
    }
  }
  // Distractors: Poisson-ish count with mean distractor_rate.
  int distractors = 0;
  for (double budget = spec.distractor_rate; budget > 0.0; budget -= 1.0)
    if (uniform01(rng) < std::min(budget, 1.0)) ++distractors;
  for (int d = 0; d < distractors; ++d) {
    const double cx = uniform_real(rng, 0, spec.width), cy = uniform_real(rng, 0, spec.height);
    const double rx = uniform_real(rng, 0.08, 0.3) * spec.width, ry = uniform_real(rng, 0.08, 0.3) * spec.height;
    const bool rect = uniform01(rng) < 0.5;
    const double lum = uniform_real(rng, 70.0, 190.0);
    std::array<double, 3> col{};
    for (auto& c : col) c = std::clamp(lum + uniform_real(rng, -25.0, 25.0), 55.0, 205.0);
    for (int y = 0; y < spec.height; ++y)
      for (int x = 0; x < spec.width; ++x) {
        const double u = (x - cx) / rx, v = (y - cy) / ry;
        const bool inside = rect ? (std::abs(u) <= 1 && std::abs(v) <= 1) : (u * u + v * v <= 1);
        if (inside) img.set(x, y, clamp_byte(col[0]), clamp_byte(col[1]), clamp_byte(col[2]));
      }
  }
  return img;
}

std::uint64_t sample_stream(Split split, std::optional<std::size_t> cls, std::size_t index) {
  const std::uint64_t c = cls ? *cls + 1 : 0;
  return (static_cast<std::uint64_t>(split) << 48) ^ (c << 32) ^ index;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write file: " + path.string());
  out << text;
  if (!out) fail(ErrorCode::kIo, "failed writing file: " + path.string());
}

}  // namespace

std::vector<std::string> synth_class_names(std::size_t num_classes) {
  require(num_classes >= 1 && num_classes <= kGlyphCount, [&] { return
          "synthetic benchmark supports 1.." + std::to_string(kGlyphCount) + " classes"; });
  std::vector<std::string> names;
  for (std::size_t i = 0; i < num_classes; ++i) names.emplace_back(kGlyphs[i].name);
  std::sort(names.begin(), names.end());
  return names;
}

std::size_t per_class_count(const SynthSpec& spec, Split split) {
  switch (split) {
    case Split::kTrain: return spec.train_per_class;
    case Split::kVal: return spec.val_per_class;
    case Split::kTest: return spec.test_per_class;
  }
  return 0;
}

std::size_t no_logo_count(const SynthSpec& spec, Split split) {
  switch (split) {
    case Split::kTrain: return spec.no_logo_train;
    case Split::kVal: return spec.no_logo_val;
    case Split::kTest: return spec.no_logo_test;
  }
  return 0;
}

RenderedImage render_sample(const SynthSpec& spec, Split split, std::optional<std::size_t> class_index,
                            std::size_t index) {
  require(spec.width >= 16 && spec.height >= 16, "synthetic images must be at least 16x16");
  require(spec.min_logo_fraction > 0 && spec.min_logo_fraction <= spec.max_logo_fraction &&
              spec.max_logo_fraction <= 0.7,
          "logo size fractions must satisfy 0 < min <= max <= 0.7");
  const auto names = synth_class_names(spec.num_classes);
  Rng rng = make_rng(spec.seed, sample_stream(split, class_index, index));
  RenderedImage out;
  out.background = render_background(spec, rng);
  out.image = out.background;
  if (!class_index) return out;
  require(*class_index < names.size(), "synthetic class index out of range");

  const auto it = std::find_if(kGlyphs.begin(), kGlyphs.end(),
                               [&](const Glyph& g) { return names[*class_index] == g.name; });
  const Glyph& glyph = *it;
  std::array<Rgb, 2> colors{glyph.body, glyph.outline};
  for (auto& col : colors)
    for (auto& c : col)
      c = std::clamp(static_cast<int>(std::lround(c + uniform_real(rng, -spec.color_jitter, spec.color_jitter))), 0, 255);
  // Keep saturated colours away from the muted background range so every
  // glyph pixel differs from the pixel it covers.
  for (auto& col : colors) {
    const int lo = *std::min_element(col.begin(), col.end()), hi = *std::max_element(col.begin(), col.end());
    if (hi - lo < 120) {
      const int target = lo < 128 ? 0 : 255;
      for (auto& c : col) c = (c + 3 * target) / 4;
      for (auto& c : col) c = target == 0 ? std::min(c, 40) : std::max(c, 225);
    }
  }

  const int side = std::min(spec.width, spec.height);
  const double extent = uniform_real(rng, spec.min_logo_fraction, spec.max_logo_fraction) * side;
  const double stretch = std::exp(uniform_real(rng, -0.25, 0.25));
  const double half_w = extent * 0.5 * stretch, half_h = extent * 0.5 / stretch;
  const double angle = uniform_real(rng, -spec.max_rotation_deg, spec.max_rotation_deg) * std::numbers::pi / 180.0;
  const double radius = std::hypot(half_w, half_h);
  const double reach_x = std::min(radius, std::abs(half_w * std::cos(angle)) + std::abs(half_h * std::sin(angle)));
  const double reach_y = std::min(radius, std::abs(half_w * std::sin(angle)) + std::abs(half_h * std::cos(angle)));
  const double cx = uniform_real(rng, reach_x + 1.0, spec.width - reach_x - 1.0);
  const double cy = uniform_real(rng, reach_y + 1.0, spec.height - reach_y - 1.0);
  const double ca = std::cos(angle), sa = std::sin(angle);
  // Outline about 2.5 px wide, kept within [0.15, 0.25] of the half extent
  // so the body's box still overlaps the glyph box with IoU above 0.5.
  const double outline = std::clamp(2.5 / std::min(half_w, half_h), 0.15, 0.25);

  int x0 = spec.width, y0 = spec.height, x1 = -1, y1 = -1;
  const int bx0 = std::max(0, static_cast<int>(std::floor(cx - radius)) - 1);
  const int bx1 = std::min(spec.width - 1, static_cast<int>(std::ceil(cx + radius)) + 1);
  const int by0 = std::max(0, static_cast<int>(std::floor(cy - radius)) - 1);
  const int by1 = std::min(spec.height - 1, static_cast<int>(std::ceil(cy + radius)) + 1);
  for (int y = by0; y <= by1; ++y) {
    for (int x = bx0; x <= bx1; ++x) {
      const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      const double u = (ca * dx + sa * dy) / half_w;
      const double v = (-sa * dx + ca * dy) / half_h;
      if (std::abs(u) > 1.0 || std::abs(v) > 1.0) continue;
      const double level = glyph.level(u, v);
      if (level > 1.0) continue;
      const auto& col = colors[level > 1.0 - outline ? 1 : 0];
      out.image.set(x, y, static_cast<std::uint8_t>(col[0]), static_cast<std::uint8_t>(col[1]),
                    static_cast<std::uint8_t>(col[2]));
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) fail(ErrorCode::kInternal, "glyph rendered no pixels");
  out.annotations.push_back(Annotation{BoundingBox{x0, y0, x1 - x0 + 1, y1 - y0 + 1}, *class_index});
  return out;
}

DatasetIndex generate(const SynthSpec& spec, const fs::path& root) {
  const auto names = synth_class_names(spec.num_classes);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec || !fs::is_directory(root)) fail(ErrorCode::kIo, "cannot create output root: " + root.string());
  for (auto split : kAllSplits) {
    const fs::path split_dir = root / split_name(split);
    auto make_dir = [&](const fs::path& dir) {
      fs::create_directories(dir, ec);
      if (ec) fail(ErrorCode::kIo, "cannot create directory: " + dir.string());
    };
    for (std::size_t c = 0; c < names.size(); ++c) {
      const fs::path dir = split_dir / names[c];
      make_dir(dir);
      for (std::size_t i = 0; i < per_class_count(spec, split); ++i) {
        const auto sample = render_sample(spec, split, c, i);
        char file[128];
        std::snprintf(file, sizeof file, "%s_%s_%04zu.jpg", names[c].c_str(), split_name(split), i);
        const fs::path path = dir / file;
        write_jpeg(path, sample.image);
        std::vector<BoundingBox> boxes;
        for (const auto& a : sample.annotations) boxes.push_back(a.box);
        write_text(path.string() + std::string(kSidecarSuffix), format_sidecar(boxes));
      }
    }
    if (no_logo_count(spec, split) > 0) {
      const fs::path dir = split_dir / std::string(kNoLogoDir);
      make_dir(dir);
      for (std::size_t i = 0; i < no_logo_count(spec, split); ++i) {
        const auto sample = render_sample(spec, split, std::nullopt, i);
        char file[128];
        std::snprintf(file, sizeof file, "nologo_%s_%04zu.jpg", split_name(split), i);
        write_jpeg(dir / file, sample.image);
      }
    }
  }
  return load_dataset(root);
}

}  // namespace logorec
