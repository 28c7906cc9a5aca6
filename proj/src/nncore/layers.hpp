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

#include "nncore/tensor.hpp"

namespace logorec::nn {

// Convolution (cross-correlation, no kernel flip) over an H x W x Cin input
// with k x k x Cin x Cout weights and Cout biases.
struct ConvCache {
  Tensor input;
  std::size_t stride = 1;
  std::size_t padding = 0;
};

struct ConvGrads {
  Tensor input;
  Tensor weights;
  Tensor bias;
};

std::size_t conv_output_extent(std::size_t in, std::size_t kernel, std::size_t stride,
                               std::size_t padding);

Tensor conv2d_forward(const Tensor& input, const Tensor& weights, const Tensor& bias,
                      std::size_t stride, std::size_t padding, ConvCache* cache = nullptr);

// When need_input_grad is false the returned input gradient is empty.
ConvGrads conv2d_backward(const Tensor& grad_out, const ConvCache& cache, const Tensor& weights,
                          bool need_input_grad = true);

// Backward for a batch of samples sharing the weights. Weight and bias
// gradients are summed over the batch; inputs[i] is the forward input and
// grad_outs[i] the output gradient of sample i.
struct ConvBatchGrads {
  std::vector<Tensor> inputs;  // empty unless need_input_grad
  Tensor weights;
  Tensor bias;
};

ConvBatchGrads conv2d_backward_batch(std::span<const Tensor> grad_outs, std::span<const Tensor* const> inputs,
                                     const Tensor& weights, std::size_t stride, std::size_t padding,
                                     bool need_input_grad = true);

// 2x2 window, stride 2. Spatial extents must be even.
enum class PoolKind { kMax, kAverage };

struct PoolCache {
  PoolKind kind = PoolKind::kMax;
  Shape input_shape;
  std::vector<std::size_t> argmax;  // flat input index per output element (max only)
};

Tensor pool_forward(const Tensor& input, PoolKind kind, PoolCache* cache = nullptr);
Tensor pool_backward(const Tensor& grad_out, const PoolCache& cache);

Tensor relu_forward(const Tensor& input);
// Gradient passes only where the cached input is strictly positive.
Tensor relu_backward(const Tensor& grad_out, const Tensor& cached_input);

// y = W^T x + b with x flattened to length n, W of shape n x m.
Tensor fc_forward(const Tensor& input, const Tensor& weights, const Tensor& bias);

struct FcGrads {
  Tensor input;  // shaped like the forward input
  Tensor weights;
  Tensor bias;
};

FcGrads fc_backward(const Tensor& grad_out, const Tensor& cached_input, const Tensor& weights);

Tensor softmax(const Tensor& logits);

struct LossResult {
  double loss = 0.0;
  Tensor grad_logits;
};

// loss = -weight * log(max(p_target, 1e-12)); gradient with respect to the
// logits that produced probs.
LossResult weighted_cross_entropy(const Tensor& probs, std::size_t target, double weight);

}  // namespace logorec::nn
