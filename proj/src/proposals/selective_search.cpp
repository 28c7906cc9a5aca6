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
#include "proposals/selective_search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "common/error.hpp"

namespace logorec {
namespace {

template <std::size_t N>
void normalize_l1(std::array<double, N>& h) {
  double total = 0.0;
  for (double v : h) total += v;
  if (total > 0.0)
    for (double& v : h) v /= total;
}

template <std::size_t N>
double intersection(const std::array<double, N>& a, const std::array<double, N>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += std::min(a[i], b[i]);
  return s;
}

std::size_t orientation_bin(double gx, double gy) {
  double theta = std::atan2(gy, gx);
  if (theta < 0.0) theta += std::numbers::pi;
  auto bin = static_cast<std::size_t>(theta / std::numbers::pi * static_cast<double>(kTextureBins));
  return std::min(bin, kTextureBins - 1);
}

}  // namespace

std::vector<Region> initial_regions(const SegmentationMap& segmap, const Image& image) {
  require(segmap.width == image.width && segmap.height == image.height, "segmentation does not match image size");
  std::vector<Region> regions(static_cast<std::size_t>(segmap.count));
  std::vector<int> x0(regions.size(), image.width), y0(regions.size(), image.height), x1(regions.size(), -1),
      y1(regions.size(), -1);
  const int w = image.width, h = image.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto id = static_cast<std::size_t>(segmap.at(x, y));
      auto& r = regions[id];
      ++r.size;
      x0[id] = std::min(x0[id], x);
      y0[id] = std::min(y0[id], y);
      x1[id] = std::max(x1[id], x);
      y1[id] = std::max(y1[id], y);
      const auto* p = image.pixel(x, y);
      const auto* left = image.pixel(std::max(x - 1, 0), y);
      const auto* right = image.pixel(std::min(x + 1, w - 1), y);
      const auto* up = image.pixel(x, std::max(y - 1, 0));
      const auto* down = image.pixel(x, std::min(y + 1, h - 1));
      for (std::size_t c = 0; c < 3; ++c) {
        r.color[c * kColorBins + p[c] * kColorBins / 256] += 1.0;
        const double gx = static_cast<double>(right[c]) - left[c];
        const double gy = static_cast<double>(down[c]) - up[c];
        r.texture[c * kTextureBins + orientation_bin(gx, gy)] += 1.0;
      }
    }
  }
  for (std::size_t id = 0; id < regions.size(); ++id) {
    auto& r = regions[id];
    r.box = {x0[id], y0[id], x1[id] - x0[id] + 1, y1[id] - y0[id] + 1};
    normalize_l1(r.color);
    normalize_l1(r.texture);
  }
  return regions;
}

Region merge_regions(const Region& a, const Region& b) {
  Region m;
  m.size = a.size + b.size;
  m.box = union_box(a.box, b.box);
  const double wa = static_cast<double>(a.size), wb = static_cast<double>(b.size), total = wa + wb;
  for (std::size_t i = 0; i < m.color.size(); ++i) m.color[i] = (wa * a.color[i] + wb * b.color[i]) / total;
  for (std::size_t i = 0; i < m.texture.size(); ++i) m.texture[i] = (wa * a.texture[i] + wb * b.texture[i]) / total;
  return m;
}

double region_similarity(const Region& a, const Region& b, double image_area) {
  const double sizes = static_cast<double>(a.size + b.size);
  const double s_color = intersection(a.color, b.color);
  const double s_texture = intersection(a.texture, b.texture);
  const double s_size = 1.0 - sizes / image_area;
  const double s_fill = 1.0 - (static_cast<double>(union_box(a.box, b.box).area()) - sizes) / image_area;
  return s_color + s_texture + s_size + s_fill;
}

std::vector<ScoredBox> group_regions(const SegmentationMap& segmap, const Image& image) {
  std::vector<Region> regions = initial_regions(segmap, image);
  const std::size_t n = regions.size();
  const std::size_t total = 2 * n - 1;
  const double area = static_cast<double>(image.width) * image.height;

  std::vector<std::set<std::size_t>> neighbours(total);
  const int w = segmap.width, h = segmap.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto a = static_cast<std::size_t>(segmap.at(x, y));
      if (x + 1 < w) {
        const auto b = static_cast<std::size_t>(segmap.at(x + 1, y));
        if (a != b) neighbours[a].insert(b), neighbours[b].insert(a);
      }
      if (y + 1 < h) {
        const auto b = static_cast<std::size_t>(segmap.at(x, y + 1));
        if (a != b) neighbours[a].insert(b), neighbours[b].insert(a);
      }
    }
  }

  // Ordered by (-similarity, a, b): begin() is the next merge.
  using Entry = std::tuple<double, std::size_t, std::size_t>;
  std::set<Entry> queue;
  std::vector<std::vector<Entry>> entries_of(total);
  auto push = [&](std::size_t a, std::size_t b) {
    const Entry e{-region_similarity(regions[a], regions[b], area), std::min(a, b), std::max(a, b)};
    queue.insert(e);
    entries_of[a].push_back(e);
    entries_of[b].push_back(e);
  };
  for (std::size_t a = 0; a < n; ++a)
    for (auto b : neighbours[a])
      if (a < b) push(a, b);

  std::vector<ScoredBox> out;
  out.reserve(total);
  auto emit = [&](const Region& r) {
    const double t = static_cast<double>(out.size());
    out.push_back({r.box, 1.0 - t / static_cast<double>(total)});
  };
  for (const auto& r : regions) emit(r);

  regions.reserve(total);
  std::vector<bool> alive(total, false);
  std::fill(alive.begin(), alive.begin() + static_cast<std::ptrdiff_t>(n), true);
  while (!queue.empty()) {
    const auto [neg_sim, a, b] = *queue.begin();
    const std::size_t t = regions.size();
    regions.push_back(merge_regions(regions[a], regions[b]));
    alive[a] = alive[b] = false;
    alive[t] = true;
    for (auto id : {a, b}) {
      for (const auto& e : entries_of[id]) queue.erase(e);
      entries_of[id].clear();
    }
    std::set<std::size_t> joined;
    for (auto id : {a, b})
      for (auto nb : neighbours[id])
        if (alive[nb]) joined.insert(nb);
    for (auto nb : joined) {
      neighbours[nb].erase(a);
      neighbours[nb].erase(b);
      neighbours[nb].insert(t);
      neighbours[t].insert(nb);
      push(nb, t);
    }
    emit(regions[t]);
  }
  // A disconnected adjacency graph cannot occur for a full-image map, but
  // leftover roots would otherwise be silently dropped.
  if (out.size() != total) fail(ErrorCode::kInternal, "region grouping ended with several roots");
  return out;
}

std::vector<ScoredBox> propose(const Image& image, const ProposalConfig& config) {
  require(!image.empty(), "cannot propose regions on an empty image");
  require(config.max_aspect >= 1.0, "max_aspect must be >= 1");
  std::map<BoundingBox, double> best;
  for (double k : config.k_values) {
    const auto segmap = segment_graph(image, k, config.min_size, config.sigma);
    for (const auto& sb : group_regions(segmap, image)) {
      auto [it, inserted] = best.emplace(sb.box, sb.score);
      if (!inserted) it->second = std::max(it->second, sb.score);
    }
  }
  std::vector<ScoredBox> out;
  for (const auto& [box, score] : best) {
    if (box.area() < config.min_size) continue;
    if (box.w < config.min_side || box.h < config.min_side) continue;
    const double aspect = static_cast<double>(box.w) / box.h;
    if (aspect < 1.0 / config.max_aspect || aspect > config.max_aspect) continue;
    out.push_back({box, score});
  }
  std::stable_sort(out.begin(), out.end(), [](const ScoredBox& a, const ScoredBox& b) { return a.score > b.score; });
  if (out.size() > config.max_proposals) out.resize(config.max_proposals);
  return out;
}

std::vector<BoundingBox> SelectiveSearchProposer::propose(const Image& image, const std::string&) const {
  std::vector<BoundingBox> boxes;
  for (const auto& sb : logorec::propose(image, config_)) boxes.push_back(sb.box);
  return boxes;
}

std::vector<BoundingBox> CachingProposer::propose(const Image& image, const std::string& image_key) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(image_key); it != cache_.end()) return it->second;
  }
  auto boxes = inner_.propose(image, image_key);
  std::lock_guard lock(mutex_);
  cache_.emplace(image_key, boxes);
  return boxes;
}

}  // namespace logorec
