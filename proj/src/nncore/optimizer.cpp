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
#include "nncore/optimizer.hpp"

#include "common/error.hpp"

namespace logorec::nn {

void ParamBundle::add(std::string name, Tensor weights, Tensor bias) {
  layers_.push_back(LayerParams{std::move(name), Param(std::move(weights)), Param(std::move(bias))});
}

std::size_t ParamBundle::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.value.size() + l.bias.value.size();
  return n;
}

void ParamBundle::zero_grad() {
  for (auto& l : layers_) {
    l.weights.grad.fill(0.0);
    l.bias.grad.fill(0.0);
  }
}

namespace {
void step(Param& p, double lr, double momentum, double decay) {
  require(p.grad.shape() == p.value.shape() && p.velocity.shape() == p.value.shape(),
          "gradient/momentum shapes must equal parameter shape");
  for (std::size_t i = 0; i < p.value.size(); ++i) {
    p.velocity[i] = momentum * p.velocity[i] - lr * (p.grad[i] + decay * p.value[i]);
    p.value[i] += p.velocity[i];
  }
}
}  // namespace

void sgd_step(ParamBundle& params, double lr, double momentum, double weight_decay) {
  for (auto& l : params) {
    step(l.weights, lr, momentum, weight_decay);
    step(l.bias, lr, momentum, 0.0);
  }
}

}  // namespace logorec::nn
