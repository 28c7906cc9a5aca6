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

#include <array>
#include <cstddef>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "common/image.hpp"
#include "datamodel/box.hpp"
#include "proposals/segmentation.hpp"

namespace logorec {

inline constexpr std::size_t kColorBins = 25;
inline constexpr std::size_t kTextureBins = 10;

// Grouping state for one region. Both histograms are L1-normalized over all
// three channels together.
struct Region {
  BoundingBox box;
  std::size_t size = 0;
  std::array<double, kColorBins * 3> color{};
  std::array<double, kTextureBins * 3> texture{};
};

struct ScoredBox {
  BoundingBox box;
  double score = 0.0;

  bool operator==(const ScoredBox&) const = default;
};

// Initial regions, one per segmentation component, indexed by component id.
std::vector<Region> initial_regions(const SegmentationMap& segmap, const Image& image);

// Pixel-count-weighted average of the children's histograms.
Region merge_regions(const Region& a, const Region& b);

// Colour intersection + texture intersection + size complement + fill, each
// weighted 1.
double region_similarity(const Region& a, const Region& b, double image_area);

// Greedy hierarchical grouping: repeatedly merges the most similar adjacent
// pair (ties: smallest id pair) until one region remains. Returns the boxes
// of all leaves and merged regions (2n - 1 entries, not deduplicated) in
// creation order. The score 1 - t / (2n - 1) ranks earlier (smaller)
// regions first.
std::vector<ScoredBox> group_regions(const SegmentationMap& segmap, const Image& image);

struct ProposalConfig {
  std::vector<double> k_values{100.0, 200.0};
  int min_size = 20;            // segmentation min component and min box area, pixels
  std::size_t max_proposals = 2000;
  double sigma = 0.8;           // Gaussian pre-smoothing for segmentation
  double max_aspect = 8.0;      // boxes with w/h outside [1/max_aspect, max_aspect] dropped
  int min_side = 12;            // boxes thinner than this in either dimension dropped; 0 disables
};

// Union of group_regions over every k, deduplicated (max score kept),
// filtered by area and aspect ratio, sorted by score (ties: box order) and
// truncated to max_proposals.
std::vector<ScoredBox> propose(const Image& image, const ProposalConfig& config);

class RegionProposer {
 public:
  virtual ~RegionProposer() = default;
  // image_key identifies the image for caching implementations.
  virtual std::vector<BoundingBox> propose(const Image& image, const std::string& image_key) const = 0;
};

class SelectiveSearchProposer final : public RegionProposer {
 public:
  explicit SelectiveSearchProposer(ProposalConfig config = {}) : config_(std::move(config)) {}
  std::vector<BoundingBox> propose(const Image& image, const std::string& image_key) const override;
  const ProposalConfig& config() const noexcept { return config_; }

 private:
  ProposalConfig config_;
};

// Memoizes another proposer by image key. Safe for concurrent use.
class CachingProposer final : public RegionProposer {
 public:
  explicit CachingProposer(const RegionProposer& inner) : inner_(inner) {}
  std::vector<BoundingBox> propose(const Image& image, const std::string& image_key) const override;

 private:
  const RegionProposer& inner_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::vector<BoundingBox>> cache_;
};

}  // namespace logorec
