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
#include <span>
#include <string>
#include <vector>

#include "common/image.hpp"
#include "logonet/model.hpp"
#include "proposals/selective_search.hpp"

namespace logorec {

// Image-level outcome. predicted is a logo class index, or the background
// index for NO-LOGO. winner is the arg-max of the pooled scores (background
// included) and confidence its pooled score (0 when there are no proposals).
struct ImageDecision {
  std::size_t predicted = 0;
  std::size_t winner = 0;
  double confidence = 0.0;
  std::vector<double> pooled;
  std::size_t proposal_count = 0;

  bool no_logo(std::size_t background) const noexcept { return predicted == background; }
};

struct StageTimes {
  double proposal = 0.0;
  double preprocess = 0.0;
  double classify = 0.0;
  double overall = 0.0;
};

// Elementwise max over the rows of an N x C probability matrix.
std::vector<double> max_pool(const nn::Tensor& probs);

// Arg-max with background winning any tie it is part of; other ties go to
// the lower index.
std::size_t pooled_winner(const std::vector<double>& pooled, std::size_t background);

// A logo is assigned only when the winner is a logo class whose pooled score
// is strictly above the threshold.
ImageDecision decide(std::vector<double> pooled, double threshold, std::size_t background,
                     std::size_t proposal_count);

// Crops every box, applies the model's normalization and returns the
// N x C probability rows (N may be 0).
nn::Tensor score_proposals(const Image& image, std::span<const BoundingBox> boxes, const Model& model,
                           std::size_t batch_size = 64, StageTimes* times = nullptr);

// Stage times are added to *times; overall covers the whole call.
ImageDecision classify_image(const Image& image, const std::string& image_key, const Model& model,
                             const RegionProposer& proposer, StageTimes* times = nullptr,
                             std::size_t batch_size = 64);

struct BatchResult {
  std::filesystem::path path;
  std::optional<ImageDecision> decision;  // empty when the image failed
  std::string error;
  StageTimes times;
};

// Per-image errors are recorded and do not stop the batch. Results are in
// input order regardless of threads.
std::vector<BatchResult> classify_batch(std::span<const std::filesystem::path> paths, const Model& model,
                                        const RegionProposer& proposer, std::size_t threads = 1,
                                        std::size_t batch_size = 64);

}  // namespace logorec
