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
#include "datamodel/normalize.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace logorec {

NormStats compute_norm_stats(std::span<const nn::Tensor> crops) {
  require(!crops.empty(), "cannot compute normalization statistics of an empty set");
  std::array<double, 3> sum{}, count{};
  for (const auto& crop : crops) {
    require(crop.rank() == 3 && crop.extent(2) == 3, "normalization expects H x W x 3 crops");
    for (std::size_t i = 0; i < crop.size(); ++i) {
      sum[i % 3] += crop[i];
      count[i % 3] += 1.0;
    }
  }
  NormStats stats;
  for (int c = 0; c < 3; ++c) stats.mean[c] = sum[c] / count[c];
  std::array<double, 3> sq{};
  for (const auto& crop : crops) {
    for (std::size_t i = 0; i < crop.size(); ++i) {
      const double d = crop[i] - stats.mean[i % 3];
      sq[i % 3] += d * d;
    }
  }
  for (int c = 0; c < 3; ++c) stats.std[c] = std::max(std::sqrt(sq[c] / count[c]), kMinStd);
  return stats;
}

void apply_norm_in_place(nn::Tensor& crop, const NormStats& stats) {
  require(crop.rank() >= 1 && crop.shape().back() == 3, "normalization expects 3 channels");
  for (std::size_t i = 0; i < crop.size(); ++i) crop[i] = (crop[i] - stats.mean[i % 3]) / stats.std[i % 3];
}

nn::Tensor apply_norm(const nn::Tensor& crop, const NormStats& stats) {
  nn::Tensor out = crop;
  apply_norm_in_place(out, stats);
  return out;
}

nn::Tensor invert_norm(const nn::Tensor& crop, const NormStats& stats) {
  nn::Tensor out = crop;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] * stats.std[i % 3] + stats.mean[i % 3];
  return out;
}

}  // namespace logorec
