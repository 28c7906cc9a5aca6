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
#include "datamodel/crops.hpp"

#include <cmath>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace logorec {

nn::Tensor crop_resize(const Image& image, const BoundingBox& box, std::size_t size) {
  require(size >= 1, "crop size must be positive");
  const auto clipped = clip_to_image(box, image.width, image.height);
  if (!clipped) fail(ErrorCode::kInvalidArgument, "crop box " + to_string(box) + " lies outside the image");
  const BoundingBox b = *clipped;
  nn::Tensor out({size, size, 3});
  const double sx = size > 1 ? static_cast<double>(b.w - 1) / static_cast<double>(size - 1) : 0.0;
  const double sy = size > 1 ? static_cast<double>(b.h - 1) / static_cast<double>(size - 1) : 0.0;
  for (std::size_t v = 0; v < size; ++v) {
    const double fy = static_cast<double>(v) * sy;
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, b.h - 1);
    const double ty = fy - y0;
    for (std::size_t u = 0; u < size; ++u) {
      const double fx = static_cast<double>(u) * sx;
      const int x0 = static_cast<int>(std::floor(fx));
      const int x1 = std::min(x0 + 1, b.w - 1);
      const double tx = fx - x0;
      const auto* p00 = image.pixel(b.x + x0, b.y + y0);
      const auto* p01 = image.pixel(b.x + x1, b.y + y0);
      const auto* p10 = image.pixel(b.x + x0, b.y + y1);
      const auto* p11 = image.pixel(b.x + x1, b.y + y1);
      for (std::size_t c = 0; c < 3; ++c) {
        const double top = p00[c] + tx * (static_cast<double>(p01[c]) - p00[c]);
        const double bot = p10[c] + tx * (static_cast<double>(p11[c]) - p10[c]);
        out.at(v, u, c) = (top + ty * (bot - top)) / 255.0;
      }
    }
  }
  return out;
}

std::vector<BoundingBox> augment_shifts(const BoundingBox& box, ImageSize extents, std::size_t n,
                                        int max_shift, std::uint64_t seed) {
  require(max_shift >= 0, "max_shift must be nonnegative");
  require(box.valid(), "cannot augment an empty box");
  Rng rng = make_rng(seed, 0xa5a5);
  std::vector<BoundingBox> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto dx = static_cast<int>(uniform_int(rng, -max_shift, max_shift));
    const auto dy = static_cast<int>(uniform_int(rng, -max_shift, max_shift));
    BoundingBox moved{box.x + dx, box.y + dy, box.w, box.h};
    moved.x = std::clamp(moved.x, 1 - moved.w, extents.width - 1);
    moved.y = std::clamp(moved.y, 1 - moved.h, extents.height - 1);
    const auto clipped = clip_to_image(moved, extents.width, extents.height);
    out.push_back(clipped ? *clipped : box);
  }
  return out;
}

}  // namespace logorec
