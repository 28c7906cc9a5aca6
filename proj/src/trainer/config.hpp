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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logorec {

enum class BoxSource { kGt, kGtOp };
enum class BalanceMode { kNone, kEpoch, kBatch };

struct Hyperparams {
  double lr = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 64;
  std::size_t epochs = 30;
  std::uint64_t seed = 1;
  double lr_decay_at = 2.0 / 3.0;  // fraction of epochs after which lr is scaled
  double lr_decay = 0.1;
  double weight_decay = 0.0;
  bool operator==(const Hyperparams&) const = default;
};

struct TrainingConfig {
  // The six training-choice toggles.
  bool bg_class = false;
  BoxSource bbs = BoxSource::kGt;
  bool data_augm = false;
  BalanceMode class_balance = BalanceMode::kNone;
  bool contrast_norm = false;
  bool sample_weight = false;

  Hyperparams hyper;

  // Background with GT-only positives needs the proposer just for background.
  bool harvest_bg_with_gt = false;
  std::size_t augment_copies = 5;
  int max_shift = 4;                 // pixels at 32x32 crop scale
  std::size_t bg_per_image = 12;     // 0 keeps every background proposal
  bool use_val = true;               // validation images contribute training samples

  bool operator==(const TrainingConfig&) const = default;
};

const char* box_source_name(BoxSource s) noexcept;
const char* balance_mode_name(BalanceMode m) noexcept;
std::optional<BoxSource> parse_box_source(std::string_view text);
std::optional<BalanceMode> parse_balance_mode(std::string_view text);

// "TC-I" ... "TC-X" in order.
const std::vector<std::string>& preset_names();
// Throws Error(kUsage) listing the valid names when id is unknown.
TrainingConfig preset(std::string_view id);
std::optional<std::string> matching_preset(const TrainingConfig& config);

// Throws Error(kUsage) for combinations the trainer cannot build.
void validate(const TrainingConfig& config);

}  // namespace logorec
