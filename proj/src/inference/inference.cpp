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
#include "inference/inference.hpp"

#include <algorithm>
#include <chrono>

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "datamodel/crops.hpp"

namespace logorec {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::vector<double> max_pool(const nn::Tensor& probs) {
  require(probs.rank() == 2, "max_pool expects an N x C matrix");
  const std::size_t n = probs.extent(0), c = probs.extent(1);
  std::vector<double> pooled(c, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < c; ++j) pooled[j] = std::max(pooled[j], probs[i * c + j]);
  return pooled;
}

std::size_t pooled_winner(const std::vector<double>& pooled, std::size_t background) {
  require(background < pooled.size(), "background index out of range");
  std::size_t best = 0;
  for (std::size_t j = 1; j < pooled.size(); ++j)
    if (pooled[j] > pooled[best]) best = j;
  return pooled[background] >= pooled[best] ? background : best;
}

ImageDecision decide(std::vector<double> pooled, double threshold, std::size_t background,
                     std::size_t proposal_count) {
  ImageDecision d;
  d.proposal_count = proposal_count;
  d.winner = pooled_winner(pooled, background);
  d.confidence = proposal_count == 0 ? 0.0 : pooled[d.winner];
  d.predicted = (proposal_count > 0 && d.winner != background && d.confidence > threshold) ? d.winner : background;
  d.pooled = std::move(pooled);
  return d;
}

nn::Tensor score_proposals(const Image& image, std::span<const BoundingBox> boxes, const Model& model,
                           std::size_t batch_size, StageTimes* times) {
  require(batch_size >= 1, "batch size must be positive");
  const std::size_t c = model.net.num_classes();
  constexpr std::size_t kPixels = kCropSize * kCropSize * 3;
  nn::Tensor probs({std::max<std::size_t>(boxes.size(), 1), c});
  for (std::size_t start = 0; start < boxes.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, boxes.size() - start);
    auto t0 = Clock::now();
    nn::Tensor batch({n, kCropSize, kCropSize, 3});
    for (std::size_t i = 0; i < n; ++i) {
      auto crop = crop_resize(image, boxes[start + i]);
      if (model.norm) apply_norm_in_place(crop, *model.norm);
      std::copy(crop.values().begin(), crop.values().end(), batch.data() + i * kPixels);
    }
    if (times) times->preprocess += seconds_since(t0);
    t0 = Clock::now();
    const auto rows = model.net.forward_batch(batch);
    std::copy(rows.values().begin(), rows.values().end(), probs.data() + start * c);
    if (times) times->classify += seconds_since(t0);
  }
  if (boxes.empty()) return nn::Tensor({1, c}, 0.0);
  return probs;
}

ImageDecision classify_image(const Image& image, const std::string& image_key, const Model& model,
                             const RegionProposer& proposer, StageTimes* times, std::size_t batch_size) {
  auto t0 = Clock::now();
  const auto boxes = proposer.propose(image, image_key);
  if (times) times->proposal += seconds_since(t0);
  const auto probs = score_proposals(image, boxes, model, batch_size, times);
  auto pooled = boxes.empty() ? std::vector<double>(model.net.num_classes(), 0.0) : max_pool(probs);
  auto decision = decide(std::move(pooled), model.threshold, model.background_index(), boxes.size());
  if (times) times->overall += seconds_since(t0);
  return decision;
}

std::vector<BatchResult> classify_batch(std::span<const std::filesystem::path> paths, const Model& model,
                                        const RegionProposer& proposer, std::size_t threads,
                                        std::size_t batch_size) {
  std::vector<BatchResult> results(paths.size());
  parallel_for(paths.size(), threads, [&](std::size_t i) {
    auto& r = results[i];
    r.path = paths[i];
    const auto t0 = Clock::now();
    try {
      const Image image = read_image(paths[i]);
      r.decision = classify_image(image, paths[i].string(), model, proposer, &r.times, batch_size);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.times.overall = seconds_since(t0);
  });
  return results;
}

}  // namespace logorec
