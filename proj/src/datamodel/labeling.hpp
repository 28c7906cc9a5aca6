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
#include <span>
#include <vector>

#include "datamodel/box.hpp"

namespace logorec {

struct Annotation {
  BoundingBox box;
  std::size_t class_index = 0;
};

enum class ProposalRole { kPositive, kBackground, kExcluded };

struct LabeledProposal {
  BoundingBox box;
  ProposalRole role = ProposalRole::kExcluded;
  std::size_t class_index = 0;  // meaningful for positives only
  double iou = 0.0;             // best IoU over all annotations
};

inline constexpr double kPositiveIou = 0.5;

// Best-IoU annotation decides (ties: first annotation). IoU >= 0.5 is a
// positive of that class, IoU == 0 against everything is background, and
// anything in between is excluded from training.
std::vector<LabeledProposal> label_proposals(std::span<const BoundingBox> proposals,
                                             std::span<const Annotation> annotations);

}  // namespace logorec
