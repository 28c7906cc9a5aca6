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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "common/image.hpp"
#include "common/rng.hpp"
#include "datamodel/box.hpp"
#include "logonet/logonet.hpp"
#include "nncore/layers.hpp"
#include "nncore/tensor.hpp"

namespace logorec::testing {

inline nn::Tensor random_tensor(nn::Shape shape, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  nn::Tensor t(std::move(shape));
  auto rng = make_rng(seed, 77);
  for (auto& v : t.values()) v = uniform_real(rng, lo, hi);
  return t;
}

inline Image random_image(int w, int h, std::uint64_t seed) {
  Image im(w, h);
  auto rng = make_rng(seed, 91);
  for (auto& v : im.rgb) v = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
  return im;
}

inline double dot(const nn::Tensor& a, const nn::Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// IoU by counting pixels of the two rectangles.
inline double brute_iou(const BoundingBox& a, const BoundingBox& b) {
  std::int64_t inter = 0, uni = 0;
  const int x0 = std::min(a.x, b.x), x1 = std::max(a.right(), b.right());
  const int y0 = std::min(a.y, b.y), y1 = std::max(a.bottom(), b.bottom());
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) {
      const bool in_a = x >= a.x && x < a.right() && y >= a.y && y < a.bottom();
      const bool in_b = x >= b.x && x < b.right() && y >= b.y && y < b.bottom();
      inter += in_a && in_b;
      uni += in_a || in_b;
    }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

// Central difference of f with respect to every entry of x.
inline nn::Tensor numeric_gradient(nn::Tensor& x, const std::function<double()>& f, double step = 1e-5) {
  nn::Tensor g(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + step;
    const double up = f();
    x[i] = keep - step;
    const double down = f();
    x[i] = keep;
    g[i] = (up - down) / (2 * step);
  }
  return g;
}

// max |a - n| / max(|a|, |n|, floor) over entries, skipping masked ones.
// The floor keeps entries that are zero up to rounding from dominating.
inline double max_relative_error(const nn::Tensor& analytic, const nn::Tensor& numeric,
                                 const std::vector<bool>& skip = {}, double floor = 1e-3) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    if (!skip.empty() && skip[i]) continue;
    const double scale = std::max({floor, std::abs(analytic[i]), std::abs(numeric[i])});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
  }
  return worst;
}

// Naive k-NN: every (distance, id, index) triple sorted, then the first k.
struct NaiveNeighbor {
  std::size_t index;
  double distance;
};
inline std::vector<std::vector<NaiveNeighbor>> naive_knn(const std::vector<std::vector<double>>& queries,
                                                          const std::vector<std::vector<double>>& items,
                                                          const std::vector<std::string>& ids, bool same_set,
                                                          std::size_t k) {
  std::vector<std::vector<NaiveNeighbor>> out;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    std::vector<std::tuple<double, std::string, std::size_t>> all;
    for (std::size_t j = 0; j < items.size(); ++j) {
      if (same_set && j == q) continue;
      double s = 0.0;
      for (std::size_t d = 0; d < items[j].size(); ++d) s += (queries[q][d] - items[j][d]) * (queries[q][d] - items[j][d]);
      all.emplace_back(std::sqrt(s), ids[j], j);
    }
    std::sort(all.begin(), all.end());
    std::vector<NaiveNeighbor> row;
    for (std::size_t r = 0; r < std::min(k, all.size()); ++r) row.push_back({std::get<2>(all[r]), std::get<0>(all[r])});
    out.push_back(row);
  }
  return out;
}

// Which side of every kink (ReLU sign, max-pool winner) a forward pass took.
inline std::vector<std::size_t> kink_pattern(const LogoNet& net, const nn::Tensor& batch) {
  ForwardTrace trace;
  net.forward_batch(batch, &trace);
  std::vector<std::size_t> out;
  for (const auto& s : trace.samples)
    for (std::size_t i = 0; i < net.layers().size(); ++i) {
      const auto kind = net.layers()[i].kind;
      if (kind == LayerKind::kRelu)
        for (double v : s.inputs[i].values()) out.push_back(v > 0.0);
      if (kind == LayerKind::kMaxPool) out.insert(out.end(), s.pools[i].argmax.begin(), s.pools[i].argmax.end());
    }
  return out;
}

struct GradCheck {
  double worst = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // perturbations that crossed a kink
};

// Compares backward() against central differences of the summed weighted
// cross-entropy on `per_tensor` random entries of every parameter tensor and
// of the input. Entries whose +/- step lands on different sides of a kink
// are skipped.
inline GradCheck check_network_gradients(LogoNet& net, nn::Tensor batch, const std::vector<std::size_t>& targets,
                                         const std::vector<double>& weights, std::size_t per_tensor,
                                         std::uint64_t seed, double step = 1e-5) {
  const std::size_t n = targets.size();
  const std::size_t c = net.num_classes();
  const auto loss = [&] {
    const auto probs = net.forward_batch(batch);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nn::Tensor row({c}, std::vector<double>(probs.data() + i * c, probs.data() + (i + 1) * c));
      total += nn::weighted_cross_entropy(row, targets[i], weights[i]).loss;
    }
    return total;
  };

  ForwardTrace trace;
  const auto probs = net.forward_batch(batch, &trace);
  nn::Tensor grad_logits({n, c});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < c; ++j)
      grad_logits[i * c + j] = weights[i] * (probs[i * c + j] - (j == targets[i] ? 1.0 : 0.0));
  net.params().zero_grad();
  nn::Tensor grad_input;
  net.backward(trace, grad_logits, &grad_input);

  std::vector<std::pair<nn::Tensor*, const nn::Tensor*>> targets_to_check;
  for (auto& layer : net.params()) {
    targets_to_check.push_back({&layer.weights.value, &layer.weights.grad});
    targets_to_check.push_back({&layer.bias.value, &layer.bias.grad});
  }
  targets_to_check.push_back({&batch, &grad_input});

  GradCheck result;
  auto rng = make_rng(seed, 5);
  for (auto [value, grad] : targets_to_check) {
    for (std::size_t k = 0; k < per_tensor; ++k) {
      const auto idx = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(value->size()) - 1));
      const double keep = (*value)[idx];
      (*value)[idx] = keep + step;
      const double up = loss();
      const auto up_pattern = kink_pattern(net, batch);
      (*value)[idx] = keep - step;
      const double down = loss();
      const auto down_pattern = kink_pattern(net, batch);
      (*value)[idx] = keep;
      if (up_pattern != down_pattern) {
        ++result.skipped;
        continue;
      }
      const double numeric = (up - down) / (2 * step);
      const double analytic = (*grad)[idx];
      const double scale = std::max({1e-3, std::abs(analytic), std::abs(numeric)});
      result.worst = std::max(result.worst, std::abs(analytic - numeric) / scale);
      ++result.checked;
    }
  }
  return result;
}

}  // namespace logorec::testing
