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
#include <span>
#include <vector>

namespace logorec {

// Sample indices grouped by class: by_class[c] lists the members of class c.
using ClassGroups = std::vector<std::vector<std::size_t>>;

ClassGroups group_by_label(std::span<const std::size_t> labels);

// Pads every non-empty class to the largest class count by sampling its
// members with replacement, then shuffles the whole list.
std::vector<std::size_t> balance_epoch(const ClassGroups& by_class, std::uint64_t seed);

// ceil(n / batch_size) batches of exactly batch_size samples. Each present
// class contributes floor(batch_size / C) or ceil(batch_size / C) samples to
// every batch, cycling through a reshuffled copy of its members.
std::vector<std::vector<std::size_t>> balance_batch(std::span<const std::size_t> labels,
                                                    std::size_t batch_size, std::uint64_t seed);

}  // namespace logorec
