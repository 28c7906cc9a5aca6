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
#include "dedup/dedup.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "datamodel/crops.hpp"

namespace logorec {

GrayPlane to_gray(const Image& image, std::size_t side) {
  require(side >= 1 && image.width >= 1 && image.height >= 1, "to_gray needs a non-empty image");
  std::vector<double> lum(static_cast<std::size_t>(image.width) * image.height);
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x) {
      const auto* p = image.pixel(x, y);
      lum[static_cast<std::size_t>(y) * image.width + x] = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
    }
  GrayPlane g{side, side, std::vector<double>(side * side)};
  // Corner-aligned bilinear resampling.
  auto coord = [&](std::size_t i, int extent) {
    return side == 1 ? 0.0 : double(i) * double(extent - 1) / double(side - 1);
  };
  for (std::size_t y = 0; y < side; ++y) {
    const double fy = coord(y, image.height);
    const int y0 = std::min(static_cast<int>(fy), image.height - 1), y1 = std::min(y0 + 1, image.height - 1);
    const double ty = fy - y0;
    for (std::size_t x = 0; x < side; ++x) {
      const double fx = coord(x, image.width);
      const int x0 = std::min(static_cast<int>(fx), image.width - 1), x1 = std::min(x0 + 1, image.width - 1);
      const double tx = fx - x0;
      auto at = [&](int xx, int yy) { return lum[static_cast<std::size_t>(yy) * image.width + xx]; };
      const double top = at(x0, y0) * (1 - tx) + at(x1, y0) * tx;
      const double bot = at(x0, y1) * (1 - tx) + at(x1, y1) * tx;
      g.values[y * side + x] = top * (1 - ty) + bot * ty;
    }
  }
  return g;
}

double ssim(const GrayPlane& a, const GrayPlane& b, const SsimConfig& config) {
  require(a.width == b.width && a.height == b.height, "ssim needs planes of equal extents");
  require(config.block >= 1 && a.width >= config.block && a.height >= config.block,
          "ssim block larger than the image");
  require(config.c1 > 0.0 && config.c2 > 0.0, "ssim stabilizers must be positive");
  const std::size_t bs = config.block, bx = a.width / bs, by = a.height / bs;
  const double n = double(bs * bs);
  double total = 0.0;
  for (std::size_t j = 0; j < by; ++j) {
    for (std::size_t i = 0; i < bx; ++i) {
      double ma = 0.0, mb = 0.0;
      for (std::size_t y = j * bs; y < (j + 1) * bs; ++y)
        for (std::size_t x = i * bs; x < (i + 1) * bs; ++x) {
          ma += a.values[y * a.width + x];
          mb += b.values[y * b.width + x];
        }
      ma /= n;
      mb /= n;
      double va = 0.0, vb = 0.0, cov = 0.0;
      for (std::size_t y = j * bs; y < (j + 1) * bs; ++y)
        for (std::size_t x = i * bs; x < (i + 1) * bs; ++x) {
          const double da = a.values[y * a.width + x] - ma, db = b.values[y * b.width + x] - mb;
          va += da * da;
          vb += db * db;
          cov += da * db;
        }
      va /= n;
      vb /= n;
      cov /= n;
      total += ((2.0 * ma * mb + config.c1) * (2.0 * cov + config.c2)) /
               ((ma * ma + mb * mb + config.c1) * (va + vb + config.c2));
    }
  }
  return total / double(bx * by);
}

double ssim(const Image& a, const Image& b, const SsimConfig& config) {
  return ssim(to_gray(a, config.side), to_gray(b, config.side), config);
}

std::vector<DuplicatePair> find_exact_duplicates(std::span<const GrayPlane> a, std::span<const GrayPlane> b,
                                                 double threshold, const SsimConfig& config, std::size_t threads) {
  std::vector<std::vector<DuplicatePair>> per_row(a.size());
  parallel_for(a.size(), threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double s = ssim(a[i], b[j], config);
      if (s > threshold) per_row[i].push_back({i, j, s});
    }
  });
  std::vector<DuplicatePair> out;
  for (auto& row : per_row) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::vector<DuplicatePair> find_exact_duplicates(std::span<const GrayPlane> set, double threshold,
                                                 const SsimConfig& config, std::size_t threads) {
  std::vector<std::vector<DuplicatePair>> per_row(set.size());
  parallel_for(set.size(), threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const double s = ssim(set[i], set[j], config);
      if (s > threshold) per_row[i].push_back({i, j, s});
    }
  });
  std::vector<DuplicatePair> out;
  for (auto& row : per_row) out.insert(out.end(), row.begin(), row.end());
  return out;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "feature vectors differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

std::vector<NeighborList> find_near_duplicates(std::span<const std::vector<double>> queries,
                                               std::span<const std::vector<double>> items,
                                               std::span<const std::string> item_ids, bool same_set,
                                               std::size_t k) {
  require(item_ids.size() == items.size(), "one id per item required");
  require(!same_set || queries.size() == items.size(), "same-set search needs queries == items");
  std::vector<NeighborList> out;
  out.reserve(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    std::vector<Neighbor> all;
    for (std::size_t j = 0; j < items.size(); ++j) {
      if (same_set && j == q) continue;
      all.push_back({j, euclidean(queries[q], items[j])});
    }
    auto before = [&](const Neighbor& x, const Neighbor& y) {
      if (x.distance != y.distance) return x.distance < y.distance;
      if (item_ids[x.index] != item_ids[y.index]) return item_ids[x.index] < item_ids[y.index];
      return x.index < y.index;
    };
    const std::size_t keep = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), before);
    all.resize(keep);
    out.push_back({q, std::move(all)});
  }
  return out;
}

std::vector<double> image_features(const Model& model, const Image& image) {
  auto crop = crop_resize(image, BoundingBox{0, 0, image.width, image.height});
  if (model.norm) apply_norm_in_place(crop, *model.norm);
  const auto f = model.net.extract_features(crop);
  return {f.values().begin(), f.values().end()};
}

}  // namespace logorec
