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
#include "nncore/tensor.hpp"

#include <algorithm>
#include <sstream>

#include "common/error.hpp"

namespace logorec::nn {

std::size_t shape_volume(const Shape& shape) {
  std::size_t v = 1;
  for (auto e : shape) v *= e;
  return v;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream out;
  for (std::size_t i = 0; i < shape.size(); ++i) out << (i ? "x" : "") << shape[i];
  return out.str();
}

namespace {
void check_shape(const Shape& shape) {
  require(!shape.empty(), "tensor shape must have at least one axis");
  for (auto e : shape) require(e >= 1, [&] { return "tensor extents must be >= 1, got " + shape_string(shape); });
}
}  // namespace

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
  check_shape(shape_);
  data_.assign(shape_volume(shape_), fill);
}

Tensor::Tensor(Shape shape, std::span<const double> values)
    : Tensor(std::move(shape), Storage(values.begin(), values.end())) {}

Tensor::Tensor(Shape shape, Storage values) : shape_(std::move(shape)), data_(std::move(values)) {
  check_shape(shape_);
  require(shape_volume(shape_) == data_.size(), [&] { return
          "tensor data length " + std::to_string(data_.size()) + " does not match shape " +
              shape_string(shape_); });
}

std::size_t Tensor::extent(std::size_t axis) const {
  require(axis < shape_.size(), "tensor axis out of range");
  return shape_[axis];
}

Tensor Tensor::reshaped(Shape shape) const& { return Tensor(std::move(shape), data_); }

Tensor Tensor::reshaped(Shape shape) && { return Tensor(std::move(shape), std::move(data_)); }

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

}  // namespace logorec::nn
