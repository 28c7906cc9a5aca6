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
#include <string>
#include <vector>

#include "nncore/tensor.hpp"

namespace logorec::nn {

struct Param {
  Tensor value;
  Tensor grad;
  Tensor velocity;

  explicit Param(Tensor v = {})
      : value(std::move(v)),
        grad(value.empty() ? Tensor() : Tensor(value.shape())),
        velocity(value.empty() ? Tensor() : Tensor(value.shape())) {}
};

struct LayerParams {
  std::string name;
  Param weights;
  Param bias;
};

// Learnable state of a network, one entry per parametrized layer.
class ParamBundle {
 public:
  void add(std::string name, Tensor weights, Tensor bias);

  std::size_t size() const noexcept { return layers_.size(); }
  LayerParams& operator[](std::size_t i) { return layers_[i]; }
  const LayerParams& operator[](std::size_t i) const { return layers_[i]; }
  auto begin() { return layers_.begin(); }
  auto end() { return layers_.end(); }
  auto begin() const { return layers_.begin(); }
  auto end() const { return layers_.end(); }

  std::size_t parameter_count() const;
  void zero_grad();

 private:
  std::vector<LayerParams> layers_;
};

// Momentum SGD: v <- momentum * v - lr * (g + weight_decay * w); w <- w + v.
// Weight decay applies to weights only, never to biases.
void sgd_step(ParamBundle& params, double lr, double momentum, double weight_decay = 0.0);

}  // namespace logorec::nn
