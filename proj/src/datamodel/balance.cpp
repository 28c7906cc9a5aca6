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
#include "datamodel/balance.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace logorec {

ClassGroups group_by_label(std::span<const std::size_t> labels) {
  ClassGroups groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= groups.size()) groups.resize(labels[i] + 1);
    groups[labels[i]].push_back(i);
  }
  return groups;
}

std::vector<std::size_t> balance_epoch(const ClassGroups& by_class, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0xe90c);
  std::size_t target = 0;
  for (const auto& g : by_class) target = std::max(target, g.size());
  std::vector<std::size_t> out;
  for (const auto& g : by_class) {
    if (g.empty()) continue;
    out.insert(out.end(), g.begin(), g.end());
    for (std::size_t i = g.size(); i < target; ++i)
      out.push_back(g[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(g.size()) - 1))]);
  }
  shuffle(out.begin(), out.end(), rng);
  return out;
}

namespace {

// Endless reshuffled cycle over one class's members.
class ClassStream {
 public:
  ClassStream(std::vector<std::size_t> members, Rng* rng) : members_(std::move(members)), rng_(rng) {
    shuffle(members_.begin(), members_.end(), *rng_);
  }
  std::size_t next() {
    if (pos_ == members_.size()) {
      shuffle(members_.begin(), members_.end(), *rng_);
      pos_ = 0;
    }
    return members_[pos_++];
  }

 private:
  std::vector<std::size_t> members_;
  Rng* rng_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::vector<std::size_t>> balance_batch(std::span<const std::size_t> labels,
                                                    std::size_t batch_size, std::uint64_t seed) {
  require(batch_size >= 1, "batch size must be positive");
  std::vector<std::vector<std::size_t>> batches;
  if (labels.empty()) return batches;
  Rng rng = make_rng(seed, 0xba7c);
  std::vector<ClassStream> streams;
  for (auto& g : group_by_label(labels))
    if (!g.empty()) streams.emplace_back(std::move(g), &rng);
  const std::size_t classes = streams.size();
  const std::size_t base = batch_size / classes, extra = batch_size % classes;
  const std::size_t count = (labels.size() + batch_size - 1) / batch_size;
  batches.reserve(count);
  for (std::size_t b = 0; b < count; ++b) {
    std::vector<std::size_t> batch;
    batch.reserve(batch_size);
    for (std::size_t c = 0; c < classes; ++c) {
      // Classes receiving the remainder rotate from batch to batch.
      const std::size_t slot = (c + classes - (b * extra) % classes) % classes;
      const std::size_t take = base + (slot < extra ? 1 : 0);
      for (std::size_t i = 0; i < take; ++i) batch.push_back(streams[c].next());
    }
    shuffle(batch.begin(), batch.end(), rng);
    batches.push_back(std::move(batch));
  }
  return batches;
}

}  // namespace logorec
