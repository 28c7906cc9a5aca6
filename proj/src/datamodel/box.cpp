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
#include "datamodel/box.hpp"

namespace logorec {

std::string to_string(const BoundingBox& box) {
  return std::to_string(box.x) + " " + std::to_string(box.y) + " " + std::to_string(box.w) + " " +
         std::to_string(box.h);
}

std::int64_t intersection_area(const BoundingBox& a, const BoundingBox& b) noexcept {
  const auto iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const auto ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0 || ih <= 0) return 0;
  return static_cast<std::int64_t>(iw) * ih;
}

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const auto inter = intersection_area(a, b);
  if (inter == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(a.area() + b.area() - inter);
}

std::optional<BoundingBox> intersect(const BoundingBox& a, const BoundingBox& b) noexcept {
  const int x0 = std::max(a.x, b.x), y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right()), y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return std::nullopt;
  return BoundingBox{x0, y0, x1 - x0, y1 - y0};
}

std::optional<BoundingBox> clip_to_image(const BoundingBox& box, int width, int height) noexcept {
  return intersect(box, BoundingBox{0, 0, width, height});
}

BoundingBox union_box(const BoundingBox& a, const BoundingBox& b) noexcept {
  const int x0 = std::min(a.x, b.x), y0 = std::min(a.y, b.y);
  const int x1 = std::max(a.right(), b.right()), y1 = std::max(a.bottom(), b.bottom());
  return {x0, y0, x1 - x0, y1 - y0};
}

}  // namespace logorec
