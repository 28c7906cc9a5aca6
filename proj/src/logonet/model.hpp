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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "datamodel/normalize.hpp"
#include "logonet/logonet.hpp"

namespace logorec {

// A trained classifier plus everything needed to run it at test time.
// class_names lists logo classes; the background output is the last one.
struct Model {
  LogoNet net;
  std::vector<std::string> class_names;
  std::optional<NormStats> norm;  // present iff trained with contrast normalization
  double threshold = 0.0;

  std::size_t background_index() const noexcept { return class_names.size(); }
};

inline constexpr int kModelFormatVersion = 1;

// File layout: a text header terminated by a "payload float32le <count>" line,
// followed by <count> little-endian IEEE-754 binary32 values holding each
// parameter tensor (weights then bias, layer order) in row-major order.
// Doubles in the header are written with 17 significant digits.
void save_model(const Model& model, const std::filesystem::path& path);

// Throws Error with kFormat (bad magic or malformed header), kVersion,
// kTruncated, or kShape (manifest inconsistent with the architecture, or with
// expected_classes when given, counted including background).
Model load_model(const std::filesystem::path& path, std::optional<std::size_t> expected_classes = std::nullopt);

// Rounds every parameter to binary32, matching what save/load preserves.
void round_to_stored_precision(LogoNet& net);

}  // namespace logorec
