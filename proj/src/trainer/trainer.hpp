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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "datamodel/dataset.hpp"
#include "datamodel/normalize.hpp"
#include "inference/inference.hpp"
#include "logonet/model.hpp"
#include "nncore/tensor.hpp"
#include "proposals/selective_search.hpp"
#include "trainer/config.hpp"

namespace logorec {

enum class SampleOrigin { kGroundTruth = 0, kProposal = 1, kAugmented = 2, kBackground = 3 };
inline constexpr std::size_t kOriginCount = 4;
const char* sample_origin_name(SampleOrigin origin) noexcept;

struct LabeledSample {
  nn::Tensor crop;  // 32 x 32 x 3, normalized when the set carries NormStats
  std::size_t label = 0;
  double iou = 1.0;
  double weight = 1.0;
  SampleOrigin origin = SampleOrigin::kGroundTruth;
};

struct TrainingSet {
  std::vector<LabeledSample> samples;
  std::optional<NormStats> norm;
  std::size_t num_outputs = 0;  // logo classes + background

  std::vector<std::size_t> labels() const;
};

// Crops and labels every training sample. Images are processed independently
// (threads only changes speed); sample order follows the image order.
TrainingSet build_training_set(const TrainingConfig& config, const DatasetIndex& dataset,
                               const RegionProposer& proposer, std::size_t threads = 1);

struct EpochStats {
  double loss = 0.0;      // mean weighted loss over the samples fed this epoch
  double accuracy = 0.0;  // fraction of fed samples whose arg-max was the label
  double lr = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  double threshold = 0.0;
  double calibration_accuracy = 0.0;
  std::size_t sample_count = 0;
  std::array<std::size_t, kOriginCount> origin_counts{};
  std::vector<std::size_t> class_counts;  // per output, background last
};

using ProgressFn = std::function<void(const std::string&)>;

// Mini-batch order for one epoch under the given balancing mode.
std::vector<std::vector<std::size_t>> plan_epoch(std::span<const std::size_t> labels, BalanceMode mode,
                                                 std::size_t batch_size, std::uint64_t seed);

// Momentum SGD on weighted cross-entropy averaged over each batch.
// Single-threaded and deterministic for a fixed seed.
void fit(LogoNet& net, std::span<const LabeledSample> samples, const TrainingConfig& config,
         std::vector<EpochStats>* stats = nullptr, const ProgressFn& progress = {});

// Unweighted mean cross-entropy of the network over the samples.
double mean_loss(const LogoNet& net, std::span<const LabeledSample> samples, std::size_t batch_size = 64);

struct TrainOptions {
  std::size_t threads = 1;  // per-image stages only; SGD itself is sequential
  ProgressFn progress;
};

struct TrainResult {
  Model model;
  TrainReport report;
};

// Builds the set, fits a fresh network and calibrates its threshold on the
// training images (train + val).
TrainResult train(const TrainingConfig& config, const DatasetIndex& dataset, const RegionProposer& proposer,
                  const TrainOptions& options = {});

// Image-level ground truth: a logo class index, or background for NO-LOGO.
std::size_t image_label(const ImageRecord& record, std::size_t background);

struct ThresholdChoice {
  double threshold = 0.0;
  double accuracy = 0.0;
};

// Accuracy of the decision rule over pre-computed decisions at a threshold.
double accuracy_at(std::span<const ImageDecision> decisions, std::span<const std::size_t> labels,
                   std::size_t background, double threshold);

// Smallest threshold in {0} U {confidences of logo winners} maximizing
// image-level accuracy. Throws on an empty set.
ThresholdChoice choose_threshold(std::span<const ImageDecision> decisions, std::span<const std::size_t> labels,
                                 std::size_t background);

ThresholdChoice calibrate_threshold(const Model& model, std::span<const ImageRecord> images,
                                    const RegionProposer& proposer, std::size_t threads = 1);

}  // namespace logorec
