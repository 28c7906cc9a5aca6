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
#include "nncore/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

#include "common/error.hpp"

namespace logorec::nn {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;

struct ConvGeometry {
  std::size_t in_h, in_w, in_c, k, out_c, out_h, out_w, stride, padding;
  std::size_t patch() const { return k * k * in_c; }
  std::size_t positions() const { return out_h * out_w; }
};

ConvGeometry conv_geometry(const Shape& in, const Shape& w, std::size_t stride, std::size_t padding) {
  require(in.size() == 3, [&] { return "conv input must be H x W x C, got " + shape_string(in); });
  require(w.size() == 4 && w[0] == w[1], [&] { return "conv weights must be k x k x Cin x Cout, got " + shape_string(w); });
  require(w[2] == in[2], [&] { return "conv channel mismatch: input has " + std::to_string(in[2]) +
                             " channels, weights expect " + std::to_string(w[2]); });
  require(stride >= 1, "conv stride must be >= 1");
  ConvGeometry g{in[0], in[1], in[2], w[0], w[3], 0, 0, stride, padding};
  g.out_h = conv_output_extent(g.in_h, g.k, stride, padding);
  g.out_w = conv_output_extent(g.in_w, g.k, stride, padding);
  return g;
}

// Row p of the result holds the k x k x Cin patch feeding output position p,
// zero where the window hangs over the padding.
// `out` must be zero-filled, positions x patch.
void im2col_into(const Tensor& input, const ConvGeometry& g, double* out) {
  const double* src = input.data();
  for (std::size_t oy = 0; oy < g.out_h; ++oy) {
    for (std::size_t ox = 0; ox < g.out_w; ++ox) {
      double* row = out + (oy * g.out_w + ox) * g.patch();
      for (std::size_t ky = 0; ky < g.k; ++ky) {
        const auto iy = static_cast<std::ptrdiff_t>(oy * g.stride + ky) - static_cast<std::ptrdiff_t>(g.padding);
        if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
        for (std::size_t kx = 0; kx < g.k; ++kx) {
          const auto ix = static_cast<std::ptrdiff_t>(ox * g.stride + kx) - static_cast<std::ptrdiff_t>(g.padding);
          if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.in_w)) continue;
          const double* px = src + (static_cast<std::size_t>(iy) * g.in_w + static_cast<std::size_t>(ix)) * g.in_c;
          std::copy(px, px + g.in_c, row + (ky * g.k + kx) * g.in_c);
        }
      }
    }
  }
}

RowMatrix im2col(const Tensor& input, const ConvGeometry& g) {
  RowMatrix cols = RowMatrix::Zero(static_cast<Eigen::Index>(g.positions()),
                                   static_cast<Eigen::Index>(g.patch()));
  im2col_into(input, g, cols.data());
  return cols;
}

void col2im(const double* cols, const ConvGeometry& g, Tensor& grad_input) {
  double* dst = grad_input.data();
  for (std::size_t oy = 0; oy < g.out_h; ++oy) {
    for (std::size_t ox = 0; ox < g.out_w; ++ox) {
      const double* row = cols + (oy * g.out_w + ox) * g.patch();
      for (std::size_t ky = 0; ky < g.k; ++ky) {
        const auto iy = static_cast<std::ptrdiff_t>(oy * g.stride + ky) - static_cast<std::ptrdiff_t>(g.padding);
        if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
        for (std::size_t kx = 0; kx < g.k; ++kx) {
          const auto ix = static_cast<std::ptrdiff_t>(ox * g.stride + kx) - static_cast<std::ptrdiff_t>(g.padding);
          if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.in_w)) continue;
          double* px = dst + (static_cast<std::size_t>(iy) * g.in_w + static_cast<std::size_t>(ix)) * g.in_c;
          const double* patch = row + (ky * g.k + kx) * g.in_c;
          for (std::size_t c = 0; c < g.in_c; ++c) px[c] += patch[c];
        }
      }
    }
  }
}

}  // namespace

std::size_t conv_output_extent(std::size_t in, std::size_t kernel, std::size_t stride,
                               std::size_t padding) {
  const std::size_t padded = in + 2 * padding;
  require(padded >= kernel, "conv kernel larger than padded input");
  require((padded - kernel) % stride == 0, [&] { return
          "conv geometry not integral: (" + std::to_string(in) + " + 2*" + std::to_string(padding) +
              " - " + std::to_string(kernel) + ") / " + std::to_string(stride); });
  return (padded - kernel) / stride + 1;
}

Tensor conv2d_forward(const Tensor& input, const Tensor& weights, const Tensor& bias,
                      std::size_t stride, std::size_t padding, ConvCache* cache) {
  const auto g = conv_geometry(input.shape(), weights.shape(), stride, padding);
  require(bias.size() == g.out_c, "conv bias length must equal output channels");
  const RowMatrix cols = im2col(input, g);
  Tensor out({g.out_h, g.out_w, g.out_c});
  MatrixMap o(out.data(), static_cast<Eigen::Index>(g.positions()), static_cast<Eigen::Index>(g.out_c));
  ConstMatrixMap w(weights.data(), static_cast<Eigen::Index>(g.patch()), static_cast<Eigen::Index>(g.out_c));
  o.noalias() = cols * w;
  o.rowwise() += ConstVectorMap(bias.data(), static_cast<Eigen::Index>(g.out_c)).transpose();
  if (cache) {
    cache->input = input;
    cache->stride = stride;
    cache->padding = padding;
  }
  return out;
}

ConvGrads conv2d_backward(const Tensor& grad_out, const ConvCache& cache, const Tensor& weights,
                          bool need_input_grad) {
  if (cache.input.empty()) fail(ErrorCode::kInvalidArgument, "conv backward called without a forward cache");
  const auto g = conv_geometry(cache.input.shape(), weights.shape(), cache.stride, cache.padding);
  require(grad_out.shape() == Shape({g.out_h, g.out_w, g.out_c}), [&] { return
          "conv grad_out shape " + shape_string(grad_out.shape()) + " does not match forward output"; });
  const RowMatrix cols = im2col(cache.input, g);
  ConstMatrixMap go(grad_out.data(), static_cast<Eigen::Index>(g.positions()), static_cast<Eigen::Index>(g.out_c));
  ConstMatrixMap w(weights.data(), static_cast<Eigen::Index>(g.patch()), static_cast<Eigen::Index>(g.out_c));

  ConvGrads grads;
  grads.weights = Tensor(weights.shape());
  MatrixMap gw(grads.weights.data(), static_cast<Eigen::Index>(g.patch()), static_cast<Eigen::Index>(g.out_c));
  gw.noalias() = cols.transpose() * go;
  grads.bias = Tensor({g.out_c});
  VectorMap(grads.bias.data(), static_cast<Eigen::Index>(g.out_c)) = go.colwise().sum().transpose();

  if (need_input_grad) {
    grads.input = Tensor(cache.input.shape());
    const RowMatrix grad_cols = go * w.transpose();
    col2im(grad_cols.data(), g, grads.input);
  }
  return grads;
}

ConvBatchGrads conv2d_backward_batch(std::span<const Tensor> grad_outs, std::span<const Tensor* const> inputs,
                                     const Tensor& weights, std::size_t stride, std::size_t padding,
                                     bool need_input_grad) {
  require(!inputs.empty() && inputs.size() == grad_outs.size(), "conv batch backward needs one gradient per input");
  const auto g = conv_geometry(inputs.front()->shape(), weights.shape(), stride, padding);
  const Shape out_shape{g.out_h, g.out_w, g.out_c};
  const auto P = static_cast<Eigen::Index>(g.positions());
  const auto K = static_cast<Eigen::Index>(g.patch());
  const auto M = static_cast<Eigen::Index>(g.out_c);
  ConstMatrixMap w(weights.data(), K, M);

  ConvBatchGrads grads;
  grads.weights = Tensor(weights.shape());
  grads.bias = Tensor({g.out_c});
  MatrixMap gw(grads.weights.data(), K, M);
  VectorMap gb(grads.bias.data(), M);
  if (need_input_grad) grads.inputs.reserve(inputs.size());

  // Chunks bound the stacked im2col buffer; sums stay in a fixed order.
  constexpr std::size_t kChunk = 4;
  for (std::size_t start = 0; start < inputs.size(); start += kChunk) {
    const std::size_t n = std::min(kChunk, inputs.size() - start);
    RowMatrix cols = RowMatrix::Zero(P * static_cast<Eigen::Index>(n), K);
    RowMatrix go(P * static_cast<Eigen::Index>(n), M);
    for (std::size_t i = 0; i < n; ++i) {
      const Tensor& in = *inputs[start + i];
      const Tensor& gout = grad_outs[start + i];
      require(in.shape() == inputs.front()->shape(), "conv batch inputs must share a shape");
      require(gout.shape() == out_shape, [&] {
        return "conv grad_out shape " + shape_string(gout.shape()) + " does not match forward output";
      });
      im2col_into(in, g, cols.data() + static_cast<Eigen::Index>(i) * P * K);
      std::copy(gout.data(), gout.data() + gout.size(), go.data() + static_cast<Eigen::Index>(i) * P * M);
    }
    gw.noalias() += cols.transpose() * go;
    gb += go.colwise().sum().transpose();
    if (need_input_grad) {
      const RowMatrix grad_cols = go * w.transpose();
      for (std::size_t i = 0; i < n; ++i) {
        Tensor gi(inputs[start + i]->shape());
        col2im(grad_cols.data() + static_cast<Eigen::Index>(i) * P * K, g, gi);
        grads.inputs.push_back(std::move(gi));
      }
    }
  }
  return grads;
}

Tensor pool_forward(const Tensor& input, PoolKind kind, PoolCache* cache) {
  const auto& s = input.shape();
  require(s.size() == 3, [&] { return "pool input must be H x W x C, got " + shape_string(s); });
  require(s[0] % 2 == 0 && s[1] % 2 == 0, [&] { return
          "pooling requires even spatial extents, got " + shape_string(s); });
  const std::size_t oh = s[0] / 2, ow = s[1] / 2, ch = s[2];
  Tensor out({oh, ow, ch});
  std::vector<std::size_t> argmax;
  if (kind == PoolKind::kMax) argmax.resize(out.size());
  for (std::size_t y = 0; y < oh; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      for (std::size_t c = 0; c < ch; ++c) {
        // Row-major scan order: (0,0), (0,1), (1,0), (1,1).
        const std::size_t idx[4] = {
            ((2 * y) * s[1] + 2 * x) * ch + c,
            ((2 * y) * s[1] + 2 * x + 1) * ch + c,
            ((2 * y + 1) * s[1] + 2 * x) * ch + c,
            ((2 * y + 1) * s[1] + 2 * x + 1) * ch + c,
        };
        const std::size_t o = (y * ow + x) * ch + c;
        if (kind == PoolKind::kMax) {
          std::size_t best = idx[0];
          for (int i = 1; i < 4; ++i)
            if (input[idx[i]] > input[best]) best = idx[i];
          out[o] = input[best];
          argmax[o] = best;
        } else {
          out[o] = (input[idx[0]] + input[idx[1]] + input[idx[2]] + input[idx[3]]) * 0.25;
        }
      }
    }
  }
  if (cache) {
    cache->kind = kind;
    cache->input_shape = s;
    cache->argmax = std::move(argmax);
  }
  return out;
}

Tensor pool_backward(const Tensor& grad_out, const PoolCache& cache) {
  const auto& s = cache.input_shape;
  require(s.size() == 3, "pool backward called without a forward cache");
  require(grad_out.shape() == Shape({s[0] / 2, s[1] / 2, s[2]}), [&] { return
          "pool grad_out shape " + shape_string(grad_out.shape()) + " does not match forward output"; });
  Tensor grad(s);
  if (cache.kind == PoolKind::kMax) {
    require(cache.argmax.size() == grad_out.size(), "max-pool cache is missing argmax indices");
    for (std::size_t o = 0; o < grad_out.size(); ++o) grad[cache.argmax[o]] += grad_out[o];
    return grad;
  }
  const std::size_t ow = s[1] / 2, ch = s[2];
  for (std::size_t y = 0; y < s[0] / 2; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      for (std::size_t c = 0; c < ch; ++c) {
        const double g = grad_out[(y * ow + x) * ch + c] * 0.25;
        grad[((2 * y) * s[1] + 2 * x) * ch + c] += g;
        grad[((2 * y) * s[1] + 2 * x + 1) * ch + c] += g;
        grad[((2 * y + 1) * s[1] + 2 * x) * ch + c] += g;
        grad[((2 * y + 1) * s[1] + 2 * x + 1) * ch + c] += g;
      }
    }
  }
  return grad;
}

Tensor relu_forward(const Tensor& input) {
  Tensor out = input;
  for (auto& v : out.values()) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor relu_backward(const Tensor& grad_out, const Tensor& cached_input) {
  require(grad_out.size() == cached_input.size(), "relu grad_out does not match cached input");
  Tensor grad(cached_input.shape());
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = cached_input[i] > 0.0 ? grad_out[i] : 0.0;
  return grad;
}

Tensor fc_forward(const Tensor& input, const Tensor& weights, const Tensor& bias) {
  require(weights.rank() == 2, "fc weights must be n x m");
  const std::size_t n = weights.extent(0), m = weights.extent(1);
  require(input.size() == n, [&] { return "fc input length " + std::to_string(input.size()) +
                                 " does not match weight rows " + std::to_string(n); });
  require(bias.size() == m, "fc bias length must equal output size");
  Tensor out({m});
  ConstMatrixMap w(weights.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  VectorMap y(out.data(), static_cast<Eigen::Index>(m));
  y.noalias() = w.transpose() * ConstVectorMap(input.data(), static_cast<Eigen::Index>(n));
  y += ConstVectorMap(bias.data(), static_cast<Eigen::Index>(m));
  return out;
}

FcGrads fc_backward(const Tensor& grad_out, const Tensor& cached_input, const Tensor& weights) {
  require(weights.rank() == 2, "fc weights must be n x m");
  const std::size_t n = weights.extent(0), m = weights.extent(1);
  require(cached_input.size() == n, "fc backward called without a matching forward input");
  require(grad_out.size() == m, "fc grad_out length does not match output size");
  ConstVectorMap go(grad_out.data(), static_cast<Eigen::Index>(m));
  ConstVectorMap x(cached_input.data(), static_cast<Eigen::Index>(n));
  ConstMatrixMap w(weights.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));

  FcGrads grads;
  grads.input = Tensor(cached_input.shape());
  VectorMap(grads.input.data(), static_cast<Eigen::Index>(n)).noalias() = w * go;
  grads.weights = Tensor(weights.shape());
  MatrixMap(grads.weights.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)).noalias() =
      x * go.transpose();
  grads.bias = Tensor({m}, std::vector<double>(grad_out.values().begin(), grad_out.values().end()));
  return grads;
}

Tensor softmax(const Tensor& logits) {
  require(!logits.empty(), "softmax of an empty tensor");
  Tensor out(logits.shape());
  const double top = *std::max_element(logits.values().begin(), logits.values().end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    total += out[i];
  }
  for (auto& v : out.values()) v /= total;
  return out;
}

LossResult weighted_cross_entropy(const Tensor& probs, std::size_t target, double weight) {
  require(target < probs.size(), [&] { return "target class " + std::to_string(target) + " out of range for " +
                                     std::to_string(probs.size()) + " classes"; });
  require(weight >= 0.0, "sample weight must be nonnegative");
  LossResult r;
  r.grad_logits = Tensor(probs.shape());
  if (weight == 0.0) return r;
  r.loss = -weight * std::log(std::max(probs[target], 1e-12));
  for (std::size_t i = 0; i < probs.size(); ++i)
    r.grad_logits[i] = weight * (probs[i] - (i == target ? 1.0 : 0.0));
  return r;
}

}  // namespace logorec::nn
