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
#include <span>
#include <string>
#include <vector>

#include "common/image.hpp"
#include "logonet/model.hpp"

namespace logorec {

struct SsimConfig {
  std::size_t side = 128;  // images are compared as side x side grayscale
  std::size_t block = 8;   // non-overlapping block size
  double c1 = 0.01 * 0.01;
  double c2 = 0.03 * 0.03;
};

// Row-major luminance in [0, 1].
struct GrayPlane {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> values;
};

// Luminance (0.299 R + 0.587 G + 0.114 B) resampled bilinearly to side x side.
GrayPlane to_gray(const Image& image, std::size_t side = 128);

// Mean over full blocks of
//   (2 ma mb + C1)(2 sab + C2) / ((ma^2 + mb^2 + C1)(sa^2 + sb^2 + C2))
// with population (co)variances. Planes must share extents.
double ssim(const GrayPlane& a, const GrayPlane& b, const SsimConfig& config = {});
double ssim(const Image& a, const Image& b, const SsimConfig& config = {});

struct DuplicatePair {
  std::size_t a = 0;
  std::size_t b = 0;
  double ssim = 0.0;
};

// Pairs with ssim strictly above threshold. Cross-set: every (i in A, j in B).
inline constexpr double kDuplicateSsim = 0.9;
std::vector<DuplicatePair> find_exact_duplicates(std::span<const GrayPlane> a, std::span<const GrayPlane> b,
                                                 double threshold = kDuplicateSsim, const SsimConfig& config = {},
                                                 std::size_t threads = 1);
// Within one set: unordered pairs i < j, no self-pairs.
std::vector<DuplicatePair> find_exact_duplicates(std::span<const GrayPlane> set, double threshold = kDuplicateSsim,
                                                 const SsimConfig& config = {}, std::size_t threads = 1);

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

struct NeighborList {
  std::size_t query = 0;
  std::vector<Neighbor> neighbors;  // ascending distance; ties by item id
};

inline constexpr std::size_t kNeighborCount = 5;

double euclidean(std::span<const double> a, std::span<const double> b);

// Exact k nearest items for every query. item_ids break distance ties, so the
// result does not depend on item order. With same_set, query i never matches
// item i. Fewer than k candidates returns all of them.
std::vector<NeighborList> find_near_duplicates(std::span<const std::vector<double>> queries,
                                               std::span<const std::vector<double>> items,
                                               std::span<const std::string> item_ids, bool same_set,
                                               std::size_t k = kNeighborCount);

// fc64 activations for the whole image resized to the network input, with
// the model's normalization applied.
std::vector<double> image_features(const Model& model, const Image& image);

}  // namespace logorec
