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
#include <span>

#include "nncore/tensor.hpp"

namespace logorec {

inline constexpr double kMinStd = 1e-6;

// Per-channel statistics over every pixel of the training crops.
struct NormStats {
  std::array<double, 3> mean{0.0, 0.0, 0.0};
  std::array<double, 3> std{1.0, 1.0, 1.0};

  bool operator==(const NormStats&) const = default;
};

// Population standard deviation, clamped below at kMinStd.
NormStats compute_norm_stats(std::span<const nn::Tensor> crops);
nn::Tensor apply_norm(const nn::Tensor& crop, const NormStats& stats);
void apply_norm_in_place(nn::Tensor& crop, const NormStats& stats);
nn::Tensor invert_norm(const nn::Tensor& crop, const NormStats& stats);

}  // namespace logorec
