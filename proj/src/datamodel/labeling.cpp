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
#include "datamodel/labeling.hpp"

namespace logorec {

std::vector<LabeledProposal> label_proposals(std::span<const BoundingBox> proposals,
                                             std::span<const Annotation> annotations) {
  std::vector<LabeledProposal> out;
  out.reserve(proposals.size());
  for (const auto& p : proposals) {
    LabeledProposal lp{p, ProposalRole::kBackground, 0, 0.0};
    bool found = false;
    for (const auto& a : annotations) {
      const double v = iou(p, a.box);
      if (!found || v > lp.iou) {
        lp.iou = v;
        lp.class_index = a.class_index;
        found = true;
      }
    }
    if (lp.iou >= kPositiveIou) {
      lp.role = ProposalRole::kPositive;
    } else if (lp.iou > 0.0) {
      lp.role = ProposalRole::kExcluded;
    } else {
      lp.role = ProposalRole::kBackground;
      lp.class_index = 0;
    }
    out.push_back(lp);
  }
  return out;
}

}  // namespace logorec
