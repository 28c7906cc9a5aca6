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

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace logorec {

// Axis-aligned pixel rectangle: columns [x, x + w), rows [y, y + h).
struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  std::int64_t area() const noexcept { return static_cast<std::int64_t>(w) * h; }
  int right() const noexcept { return x + w; }
  int bottom() const noexcept { return y + h; }
  bool valid() const noexcept { return w > 0 && h > 0; }

  auto operator<=>(const BoundingBox&) const = default;
};

std::string to_string(const BoundingBox& box);

std::int64_t intersection_area(const BoundingBox& a, const BoundingBox& b) noexcept;

// area(a & b) / area(a | b); 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

std::optional<BoundingBox> intersect(const BoundingBox& a, const BoundingBox& b) noexcept;

// Intersection with the image rectangle [0, width) x [0, height).
std::optional<BoundingBox> clip_to_image(const BoundingBox& box, int width, int height) noexcept;

BoundingBox union_box(const BoundingBox& a, const BoundingBox& b) noexcept;

}  // namespace logorec
