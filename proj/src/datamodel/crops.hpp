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
#include <vector>

#include "common/image.hpp"
#include "datamodel/box.hpp"
#include "nncore/tensor.hpp"

namespace logorec {

inline constexpr std::size_t kCropSize = 32;

// Clips the box to the image, then bilinearly resamples it (corner-aligned)
// to size x size x 3 with RGB values scaled to [0, 1]. A box entirely outside
// the image is rejected.
nn::Tensor crop_resize(const Image& image, const BoundingBox& box, std::size_t size = kCropSize);

// n copies of the box, each translated by independent uniform integer offsets
// in [-max_shift, max_shift] per axis and clipped to the image. A shift that
// would push the box completely off the image is clamped to keep one row and
// column inside.
std::vector<BoundingBox> augment_shifts(const BoundingBox& box, ImageSize extents, std::size_t n,
                                        int max_shift, std::uint64_t seed);

}  // namespace logorec
