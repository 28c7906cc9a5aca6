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
#include <string>
#include <vector>

#include "nncore/layers.hpp"
#include "nncore/optimizer.hpp"
#include "nncore/tensor.hpp"

namespace logorec {

enum class LayerKind { kConv, kMaxPool, kAvgPool, kRelu, kFullyConnected, kSoftmax };

const char* layer_kind_name(LayerKind kind) noexcept;

struct LayerSpec {
  LayerKind kind = LayerKind::kRelu;
  std::size_t kernel = 0;
  std::size_t stride = 1;
  std::size_t padding = 0;
  std::size_t in_channels = 0;   // conv input channels / fc input length
  std::size_t out_channels = 0;  // conv filters / fc output length

  bool operator==(const LayerSpec&) const = default;
};

// conv32/5x5 -> maxpool -> relu -> conv32/5x5 -> relu -> avgpool ->
// conv64/5x5 -> relu -> avgpool -> fc64 -> fc(num_classes) -> softmax.
// All convolutions use padding 2 so only the pools change spatial extent
// (32 -> 16 -> 8 -> 4), giving a 4*4*64 = 1024 input to fc64.
std::vector<LayerSpec> logo_architecture(std::size_t num_classes);

// Per-layer inputs captured by a training forward pass over one sample.
struct SampleTrace {
  std::vector<nn::Tensor> inputs;
  std::vector<nn::PoolCache> pools;
  nn::Tensor probs;
};

struct ForwardTrace {
  std::vector<SampleTrace> samples;
};

class LogoNet {
 public:
  static constexpr std::size_t kInputExtent = 32;
  static constexpr std::size_t kInputChannels = 3;
  static constexpr std::size_t kFeatureSize = 64;
  static constexpr std::size_t kDefaultClasses = 33;

  // Fan-in scaled Gaussian weights (std = sqrt(2 / fan_in)), zero biases.
  static LogoNet build(std::size_t num_classes = kDefaultClasses, std::uint64_t seed = 0);

  // Adopts existing parameters; shapes must match logo_architecture.
  LogoNet(std::size_t num_classes, nn::ParamBundle params);

  std::size_t num_classes() const noexcept { return num_classes_; }
  const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
  nn::ParamBundle& params() noexcept { return params_; }
  const nn::ParamBundle& params() const noexcept { return params_; }
  std::size_t parameter_count() const { return params_.parameter_count(); }

  // N x 32 x 32 x 3 -> N x num_classes probabilities. Samples are processed
  // independently, so each row depends only on its own input.
  nn::Tensor forward_batch(const nn::Tensor& batch, ForwardTrace* trace = nullptr) const;

  // Accumulates parameter gradients for dL/dlogits (N x num_classes) into
  // params().*.grad. Optionally returns dL/dinput (N x 32 x 32 x 3).
  void backward(const ForwardTrace& trace, const nn::Tensor& grad_logits, nn::Tensor* grad_input = nullptr);

  // Output of fc64: the network without its final fully-connected layer
  // and softmax.
  nn::Tensor extract_features(const nn::Tensor& crop) const;
  // The two layers removed by extract_features.
  nn::Tensor classify_features(const nn::Tensor& features) const;

 private:
  LogoNet(std::size_t num_classes, std::vector<LayerSpec> layers, nn::ParamBundle params);

  nn::Tensor run_layers(nn::Tensor x, std::size_t first, std::size_t last, SampleTrace* trace) const;

  std::size_t num_classes_ = 0;
  std::vector<LayerSpec> layers_;
  std::vector<std::size_t> param_slot_;  // layer index -> params_ index (or npos)
  std::size_t feature_layer_ = 0;        // index of fc64
  nn::ParamBundle params_;
};

std::size_t layer_parameter_count(const LayerSpec& spec);

}  // namespace logorec
