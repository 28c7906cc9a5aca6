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

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/image.hpp"
#include "datamodel/labeling.hpp"

namespace logorec {

// On-disk layout:
//   <root>/<split>/<class>/<image>.jpg
//   <root>/<split>/<class>/<image>.jpg.bboxes.txt   "x y width height" header,
//                                                   then one box per line
//   <root>/<split>/no-logo/<image>.jpg              no sidecar
// Splits are "train", "val" and "test". Logo classes come from the directory
// names (sorted); the background index is one past the last logo class.
inline constexpr std::string_view kNoLogoDir = "no-logo";
inline constexpr std::string_view kSidecarSuffix = ".bboxes.txt";

enum class Split { kTrain = 0, kVal = 1, kTest = 2 };
inline constexpr std::array<Split, 3> kAllSplits{Split::kTrain, Split::kVal, Split::kTest};

const char* split_name(Split split) noexcept;
std::optional<Split> parse_split(std::string_view name);

struct ImageRecord {
  std::filesystem::path path;
  ImageSize size;
  std::optional<std::size_t> label;  // image-level class; empty for no-logo images
  std::vector<Annotation> annotations;
};

struct DatasetIndex {
  std::vector<std::string> class_names;
  std::array<std::vector<ImageRecord>, 3> splits;
  std::vector<std::string> warnings;

  std::size_t num_classes() const noexcept { return class_names.size(); }
  std::size_t background_index() const noexcept { return class_names.size(); }
  const std::vector<ImageRecord>& split(Split s) const { return splits[static_cast<int>(s)]; }
  std::vector<ImageRecord>& split(Split s) { return splits[static_cast<int>(s)]; }
  std::size_t image_count() const noexcept;
  std::optional<std::size_t> class_index(std::string_view name) const;
};

DatasetIndex load_dataset(const std::filesystem::path& root);

// Parses sidecar text; throws Error(kData) naming `origin` on malformed lines.
std::vector<BoundingBox> parse_sidecar(std::string_view text, std::string_view origin);
std::string format_sidecar(const std::vector<BoundingBox>& boxes);

}  // namespace logorec
