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
#include <vector>

#include "common/image.hpp"

namespace logorec {

struct SegmentationMap {
  int width = 0;
  int height = 0;
  int count = 0;            // component ids are 0 .. count-1
  std::vector<int> labels;  // row-major, one id per pixel

  int at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

// Graph-based segmentation (Felzenszwalb-Huttenlocher) on the 8-connected
// pixel grid with Euclidean RGB edge weights, after an optional Gaussian
// pre-smoothing. Components below min_size pixels are merged into a
// neighbour. Ids are assigned in row-major order of first appearance.
SegmentationMap segment_graph(const Image& image, double k, int min_size, double sigma = 0.8);

}  // namespace logorec
