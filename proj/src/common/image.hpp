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
#include <filesystem>
#include <vector>

namespace logorec {

// Interleaved 8-bit RGB, row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image() = default;
  Image(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, fill) {}

  bool empty() const noexcept { return width <= 0 || height <= 0; }

  std::uint8_t* pixel(int x, int y) {
    return rgb.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  const std::uint8_t* pixel(int x, int y) const {
    return rgb.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }

  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    auto* p = pixel(x, y);
    p[0] = r;
    p[1] = g;
    p[2] = b;
  }

  bool operator==(const Image&) const = default;
};

struct ImageSize {
  int width = 0;
  int height = 0;
};

// Supported formats: JPEG (.jpg/.jpeg) and binary PPM (.ppm). Failures throw
// Error(kIo) naming the path.
Image read_image(const std::filesystem::path& path);
ImageSize read_image_size(const std::filesystem::path& path);
void write_jpeg(const std::filesystem::path& path, const Image& image, int quality = 95);
void write_ppm(const std::filesystem::path& path, const Image& image);
void write_image(const std::filesystem::path& path, const Image& image);

bool is_image_file(const std::filesystem::path& path);

}  // namespace logorec
