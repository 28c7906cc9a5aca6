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
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "common/image.hpp"
#include "datamodel/dataset.hpp"

namespace logorec {

// Synthetic logo benchmark. Each class is a distinct glyph (silhouette plus
// body/outline colour pair) pasted at random position, scale, stretch and small
// rotation onto smooth muted-colour backgrounds with distractor blobs.
struct SynthSpec {
  std::size_t num_classes = 8;
  std::size_t train_per_class = 10;
  std::size_t val_per_class = 15;
  std::size_t test_per_class = 30;
  std::size_t no_logo_train = 10;
  std::size_t no_logo_val = 15;
  std::size_t no_logo_test = 30;
  int width = 128;
  int height = 128;
  double min_logo_fraction = 0.15;  // glyph extent relative to the image side
  double max_logo_fraction = 0.40;
  double noise_level = 1.0;         // scales background texture amplitude
  double distractor_rate = 1.0;     // expected distractor blobs per image
  double max_rotation_deg = 15.0;
  double color_jitter = 20.0;       // per-channel glyph colour jitter, 0-255 units
  std::uint64_t seed = 1;
};

inline constexpr std::size_t kGlyphCount = 12;

// Class names of the first num_classes glyphs, sorted (dataset class order).
std::vector<std::string> synth_class_names(std::size_t num_classes);

struct RenderedImage {
  Image image;
  Image background;  // the same image before the glyph was painted
  std::vector<Annotation> annotations;
};

// class_index indexes synth_class_names(spec.num_classes); nullopt renders a
// no-logo image. Deterministic in (spec.seed, split, class, index).
RenderedImage render_sample(const SynthSpec& spec, Split split, std::optional<std::size_t> class_index,
                            std::size_t index);

std::size_t per_class_count(const SynthSpec& spec, Split split);
std::size_t no_logo_count(const SynthSpec& spec, Split split);

// Writes the dataset layout under root and returns load_dataset(root).
DatasetIndex generate(const SynthSpec& spec, const std::filesystem::path& root);

}  // namespace logorec
