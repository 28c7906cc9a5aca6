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
#include "logonet/logonet.hpp"

#include <cmath>
#include <limits>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace logorec {
namespace {

constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();

LayerSpec conv(std::size_t in, std::size_t out) { return {LayerKind::kConv, 5, 1, 2, in, out}; }
LayerSpec pool(LayerKind kind) { return {kind, 2, 2, 0, 0, 0}; }
LayerSpec relu() { return {LayerKind::kRelu, 0, 1, 0, 0, 0}; }
LayerSpec fc(std::size_t in, std::size_t out) { return {LayerKind::kFullyConnected, 0, 1, 0, in, out}; }

nn::Shape weight_shape(const LayerSpec& s) {
  if (s.kind == LayerKind::kConv) return {s.kernel, s.kernel, s.in_channels, s.out_channels};
  return {s.in_channels, s.out_channels};
}

std::size_t fan_in(const LayerSpec& s) {
  return s.kind == LayerKind::kConv ? s.kernel * s.kernel * s.in_channels : s.in_channels;
}

bool has_params(LayerKind k) { return k == LayerKind::kConv || k == LayerKind::kFullyConnected; }

std::string param_name(const std::vector<LayerSpec>& layers, std::size_t index) {
  std::size_t conv_n = 0, fc_n = 0;
  for (std::size_t i = 0; i <= index; ++i) {
    if (layers[i].kind == LayerKind::kConv) ++conv_n;
    if (layers[i].kind == LayerKind::kFullyConnected) ++fc_n;
  }
  return layers[index].kind == LayerKind::kConv ? "conv" + std::to_string(conv_n) : "fc" + std::to_string(fc_n);
}

}  // namespace

const char* layer_kind_name(LayerKind kind) noexcept {
  switch (kind) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kMaxPool: return "maxpool";
    case LayerKind::kAvgPool: return "avgpool";
    case LayerKind::kRelu: return "relu";
    case LayerKind::kFullyConnected: return "fc";
    case LayerKind::kSoftmax: return "softmax";
  }
  return "?";
}

std::vector<LayerSpec> logo_architecture(std::size_t num_classes) {
  require(num_classes >= 2, "network needs at least 2 output classes");
  return {
      conv(3, 32),  pool(LayerKind::kMaxPool), relu(),
      conv(32, 32), relu(),                    pool(LayerKind::kAvgPool),
      conv(32, 64), relu(),                    pool(LayerKind::kAvgPool),
      fc(4 * 4 * 64, LogoNet::kFeatureSize),   fc(LogoNet::kFeatureSize, num_classes),
      {LayerKind::kSoftmax, 0, 1, 0, 0, 0},
  };
}

std::size_t layer_parameter_count(const LayerSpec& s) {
  if (!has_params(s.kind)) return 0;
  return nn::shape_volume(weight_shape(s)) + s.out_channels;
}

LogoNet LogoNet::build(std::size_t num_classes, std::uint64_t seed) {
  auto layers = logo_architecture(num_classes);
  Rng rng = make_rng(seed, 0x1417);
  nn::ParamBundle params;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& s = layers[i];
    if (!has_params(s.kind)) continue;
    nn::Tensor w(weight_shape(s));
    const double std_dev = std::sqrt(2.0 / static_cast<double>(fan_in(s)));
    for (auto& v : w.values()) v = std_dev * standard_normal(rng);
    params.add(param_name(layers, i), std::move(w), nn::Tensor({s.out_channels}));
  }
  return LogoNet(num_classes, std::move(layers), std::move(params));
}

LogoNet::LogoNet(std::size_t num_classes, nn::ParamBundle params)
    : LogoNet(num_classes, logo_architecture(num_classes), std::move(params)) {}

LogoNet::LogoNet(std::size_t num_classes, std::vector<LayerSpec> layers, nn::ParamBundle params)
    : num_classes_(num_classes), layers_(std::move(layers)), params_(std::move(params)) {
  std::size_t slot = 0;
  param_slot_.assign(layers_.size(), kNoSlot);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (!has_params(layers_[i].kind)) continue;
    if (slot >= params_.size()) fail(ErrorCode::kShape, "parameter bundle has too few layers");
    const auto& p = params_[slot];
    if (p.weights.value.shape() != weight_shape(layers_[i]) ||
        p.bias.value.shape() != nn::Shape{layers_[i].out_channels})
      fail(ErrorCode::kShape, "parameter shape mismatch at layer " + std::to_string(i) + " (" +
                                  nn::shape_string(p.weights.value.shape()) + ", expected " +
                                  nn::shape_string(weight_shape(layers_[i])) + ")");
    if (layers_[i].kind == LayerKind::kFullyConnected && layers_[i].out_channels == kFeatureSize &&
        feature_layer_ == 0)
      feature_layer_ = i;
    param_slot_[i] = slot++;
  }
  if (slot != params_.size()) fail(ErrorCode::kShape, "parameter bundle has too many layers");
}

nn::Tensor LogoNet::run_layers(nn::Tensor x, std::size_t first, std::size_t last, SampleTrace* trace) const {
  for (std::size_t i = first; i < last; ++i) {
    const auto& s = layers_[i];
    if (trace && s.kind != LayerKind::kSoftmax) trace->inputs[i] = x;
    switch (s.kind) {
      case LayerKind::kConv: {
        const auto& p = params_[param_slot_[i]];
        x = nn::conv2d_forward(x, p.weights.value, p.bias.value, s.stride, s.padding);
        break;
      }
      case LayerKind::kMaxPool:
      case LayerKind::kAvgPool:
        x = nn::pool_forward(x, s.kind == LayerKind::kMaxPool ? nn::PoolKind::kMax : nn::PoolKind::kAverage,
                             trace ? &trace->pools[i] : nullptr);
        break;
      case LayerKind::kRelu:
        x = nn::relu_forward(x);
        break;
      case LayerKind::kFullyConnected: {
        const auto& p = params_[param_slot_[i]];
        x = nn::fc_forward(x, p.weights.value, p.bias.value);
        break;
      }
      case LayerKind::kSoftmax:
        x = nn::softmax(x);
        break;
    }
  }
  return x;
}

nn::Tensor LogoNet::forward_batch(const nn::Tensor& batch, ForwardTrace* trace) const {
  const auto& s = batch.shape();
  require(s.size() == 4 && s[1] == kInputExtent && s[2] == kInputExtent && s[3] == kInputChannels, [&] { return
          "forward_batch expects N x 32 x 32 x 3, got " + nn::shape_string(s); });
  const std::size_t n = s[0];
  const std::size_t stride = kInputExtent * kInputExtent * kInputChannels;
  nn::Tensor out({n, num_classes_});
  if (trace) trace->samples.assign(n, SampleTrace{});
  for (std::size_t i = 0; i < n; ++i) {
    SampleTrace* st = nullptr;
    if (trace) {
      st = &trace->samples[i];
      st->inputs.resize(layers_.size());
      st->pools.resize(layers_.size());
    }
    nn::Tensor x({kInputExtent, kInputExtent, kInputChannels},
                 std::vector<double>(batch.data() + i * stride, batch.data() + (i + 1) * stride));
    // Same two-stage split as extract_features + classify_features, so the
    // prefix property holds bit for bit.
    nn::Tensor feat = run_layers(std::move(x), 0, feature_layer_ + 1, st);
    nn::Tensor probs = run_layers(std::move(feat), feature_layer_ + 1, layers_.size(), st);
    std::copy(probs.values().begin(), probs.values().end(), out.data() + i * num_classes_);
    if (st) st->probs = std::move(probs);
  }
  return out;
}

void LogoNet::backward(const ForwardTrace& trace, const nn::Tensor& grad_logits, nn::Tensor* grad_input) {
  const std::size_t n = trace.samples.size();
  require(n > 0, "backward called with an empty trace");
  require(grad_logits.shape() == nn::Shape({n, num_classes_}), "grad_logits must be N x num_classes");
  const std::size_t stride = kInputExtent * kInputExtent * kInputChannels;
  std::vector<nn::Tensor> g(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (trace.samples[s].inputs.size() != layers_.size())
      fail(ErrorCode::kInvalidArgument, "backward called without a forward trace");
    g[s] = nn::Tensor({num_classes_}, std::vector<double>(grad_logits.data() + s * num_classes_,
                                                          grad_logits.data() + (s + 1) * num_classes_));
  }
  auto accumulate = [](nn::Tensor& into, const nn::Tensor& add) {
    for (std::size_t k = 0; k < add.size(); ++k) into[k] += add[k];
  };

  // Layer by layer over the whole batch; the softmax is folded into
  // grad_logits, so start at the layer before it.
  for (std::size_t i = layers_.size() - 1; i-- > 0;) {
    const auto& spec = layers_[i];
    const bool need_input = i > 0 || grad_input != nullptr;
    switch (spec.kind) {
      case LayerKind::kConv: {
        auto& p = params_[param_slot_[i]];
        std::vector<const nn::Tensor*> inputs(n);
        for (std::size_t s = 0; s < n; ++s) inputs[s] = &trace.samples[s].inputs[i];
        auto grads = nn::conv2d_backward_batch(g, inputs, p.weights.value, spec.stride, spec.padding, need_input);
        accumulate(p.weights.grad, grads.weights);
        accumulate(p.bias.grad, grads.bias);
        g = std::move(grads.inputs);
        break;
      }
      case LayerKind::kMaxPool:
      case LayerKind::kAvgPool:
        for (std::size_t s = 0; s < n; ++s) g[s] = nn::pool_backward(g[s], trace.samples[s].pools[i]);
        break;
      case LayerKind::kRelu:
        for (std::size_t s = 0; s < n; ++s) g[s] = nn::relu_backward(g[s], trace.samples[s].inputs[i]);
        break;
      case LayerKind::kFullyConnected: {
        auto& p = params_[param_slot_[i]];
        for (std::size_t s = 0; s < n; ++s) {
          auto grads = nn::fc_backward(g[s], trace.samples[s].inputs[i], p.weights.value);
          accumulate(p.weights.grad, grads.weights);
          accumulate(p.bias.grad, grads.bias);
          g[s] = std::move(grads.input);
        }
        break;
      }
      case LayerKind::kSoftmax:
        fail(ErrorCode::kInternal, "softmax must be the last layer");
    }
  }
  if (grad_input) {
    *grad_input = nn::Tensor({n, kInputExtent, kInputExtent, kInputChannels});
    for (std::size_t s = 0; s < n; ++s) std::copy(g[s].values().begin(), g[s].values().end(), grad_input->data() + s * stride);
  }
}

nn::Tensor LogoNet::extract_features(const nn::Tensor& crop) const {
  require(crop.shape() == nn::Shape({kInputExtent, kInputExtent, kInputChannels}), [&] { return
          "extract_features expects a 32 x 32 x 3 crop, got " + nn::shape_string(crop.shape()); });
  return run_layers(crop, 0, feature_layer_ + 1, nullptr);
}

nn::Tensor LogoNet::classify_features(const nn::Tensor& features) const {
  require(features.size() == kFeatureSize, "classify_features expects a 64-vector");
  return run_layers(features, feature_layer_ + 1, layers_.size(), nullptr);
}

}  // namespace logorec
