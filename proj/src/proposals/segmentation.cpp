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
#include "proposals/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.hpp"

namespace logorec {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  std::size_t join(std::size_t a, std::size_t b) {
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    if (rank_[a] == rank_[b]) ++rank_[a];
    return a;
  }
  std::size_t size(std::size_t root) const { return size_[root]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
  std::vector<std::size_t> size_;
};

struct Edge {
  double w;
  std::size_t a, b;
};

// Separable Gaussian blur with clamped borders, returned as 3 double planes
// interleaved like the input.
std::vector<double> smooth(const Image& image, double sigma) {
  const auto n = static_cast<std::size_t>(image.width) * image.height * 3;
  std::vector<double> src(image.rgb.begin(), image.rgb.end());
  if (sigma <= 0.0) return src;
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(radius) + 1);
  double total = 0.0;
  for (int i = 0; i <= radius; ++i) {
    kernel[i] = std::exp(-0.5 * (i / sigma) * (i / sigma));
    total += i == 0 ? kernel[i] : 2.0 * kernel[i];
  }
  for (auto& v : kernel) v /= total;

  const int w = image.width, h = image.height;
  std::vector<double> tmp(n), out(n);
  auto idx = [w](int x, int y, int c) { return (static_cast<std::size_t>(y) * w + x) * 3 + c; };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        double s = kernel[0] * src[idx(x, y, c)];
        for (int i = 1; i <= radius; ++i)
          s += kernel[i] * (src[idx(std::max(x - i, 0), y, c)] + src[idx(std::min(x + i, w - 1), y, c)]);
        tmp[idx(x, y, c)] = s;
      }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        double s = kernel[0] * tmp[idx(x, y, c)];
        for (int i = 1; i <= radius; ++i)
          s += kernel[i] * (tmp[idx(x, std::max(y - i, 0), c)] + tmp[idx(x, std::min(y + i, h - 1), c)]);
        out[idx(x, y, c)] = s;
      }
  return out;
}

}  // namespace

SegmentationMap segment_graph(const Image& image, double k, int min_size, double sigma) {
  require(!image.empty(), "cannot segment an empty image");
  require(k >= 0.0, "segmentation scale k must be nonnegative");
  const int w = image.width, h = image.height;
  const auto pixels = static_cast<std::size_t>(w) * h;
  const auto px = smooth(image, sigma);

  auto weight = [&px](std::size_t p, std::size_t q) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double d = px[p * 3 + c] - px[q * 3 + c];
      s += d * d;
    }
    return std::sqrt(s);
  };

  std::vector<Edge> edges;
  edges.reserve(pixels * 4);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      if (x + 1 < w) edges.push_back({weight(p, p + 1), p, p + 1});
      if (y + 1 < h) edges.push_back({weight(p, p + w), p, p + w});
      if (x + 1 < w && y + 1 < h) edges.push_back({weight(p, p + w + 1), p, p + w + 1});
      if (x + 1 < w && y > 0) edges.push_back({weight(p, p - w + 1), p, p - w + 1});
    }
  }
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.w < b.w; });

  DisjointSets sets(pixels);
  std::vector<double> threshold(pixels, k);
  for (const auto& e : edges) {
    auto a = sets.find(e.a), b = sets.find(e.b);
    if (a == b || e.w > threshold[a] || e.w > threshold[b]) continue;
    a = sets.join(a, b);
    threshold[a] = e.w + k / static_cast<double>(sets.size(a));
  }
  for (const auto& e : edges) {
    const auto a = sets.find(e.a), b = sets.find(e.b);
    if (a != b && (sets.size(a) < static_cast<std::size_t>(min_size) || sets.size(b) < static_cast<std::size_t>(min_size)))
      sets.join(a, b);
  }

  SegmentationMap map{w, h, 0, std::vector<int>(pixels, -1)};
  std::vector<int> id_of_root(pixels, -1);
  for (std::size_t p = 0; p < pixels; ++p) {
    const auto r = sets.find(p);
    if (id_of_root[r] < 0) id_of_root[r] = map.count++;
    map.labels[p] = id_of_root[r];
  }
  return map;
}

}  // namespace logorec
