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
#include "trainer/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "common/rng.hpp"
#include "datamodel/balance.hpp"
#include "datamodel/crops.hpp"
#include "datamodel/labeling.hpp"
#include "nncore/layers.hpp"

namespace logorec {
namespace {

// Disjoint rng stream families.
constexpr std::uint64_t kAugmentStream = 1ULL << 40;
constexpr std::uint64_t kBackgroundStream = 2ULL << 40;
constexpr std::uint64_t kEpochStream = 3ULL << 40;

std::vector<const ImageRecord*> training_images(const DatasetIndex& dataset, bool use_val) {
  std::vector<const ImageRecord*> out;
  for (const auto& r : dataset.split(Split::kTrain)) out.push_back(&r);
  if (use_val)
    for (const auto& r : dataset.split(Split::kVal)) out.push_back(&r);
  return out;
}

double best_class_iou(const BoundingBox& box, std::span<const Annotation> annotations, std::size_t label) {
  double best = 0.0;
  for (const auto& a : annotations)
    if (a.class_index == label) best = std::max(best, iou(box, a.box));
  return best;
}

std::vector<LabeledSample> image_samples(const TrainingConfig& config, const ImageRecord& record,
                                         std::size_t ordinal, std::size_t background,
                                         const RegionProposer& proposer) {
  const Image image = read_image(record.path);
  const ImageSize extents{image.width, image.height};
  std::vector<LabeledSample> out;

  // Positives as (box, label, iou, origin) before cropping, so augmentation
  // can derive shifted copies from them.
  struct Positive {
    BoundingBox box;
    std::size_t label;
    double iou;
    SampleOrigin origin;
  };
  std::vector<Positive> positives;
  for (const auto& a : record.annotations) positives.push_back({a.box, a.class_index, 1.0, SampleOrigin::kGroundTruth});

  const bool need_proposals = config.bbs == BoxSource::kGtOp || config.bg_class;
  std::vector<BoundingBox> background_boxes;
  if (need_proposals) {
    const auto boxes = proposer.propose(image, record.path.string());
    for (const auto& lp : label_proposals(boxes, record.annotations)) {
      if (lp.role == ProposalRole::kPositive && config.bbs == BoxSource::kGtOp)
        positives.push_back({lp.box, lp.class_index, lp.iou, SampleOrigin::kProposal});
      else if (lp.role == ProposalRole::kBackground && config.bg_class)
        background_boxes.push_back(lp.box);
    }
  }

  auto weight_of = [&](const Positive& p) {
    return (config.sample_weight && p.origin != SampleOrigin::kGroundTruth) ? p.iou : 1.0;
  };
  const std::size_t n_original = positives.size();
  for (std::size_t i = 0; i < n_original; ++i) {
    const auto p = positives[i];
    out.push_back({crop_resize(image, p.box), p.label, p.iou, weight_of(p), p.origin});
    if (!config.data_augm) continue;
    // Shift range scales with the source box so it is max_shift at crop scale.
    const int longest = std::max(p.box.w, p.box.h);
    const int shift = static_cast<int>(std::lround(config.max_shift * longest / double(kCropSize)));
    const auto stream = kAugmentStream + (std::uint64_t(ordinal) << 16) + i;
    for (const auto& b : augment_shifts(p.box, extents, config.augment_copies, shift,
                                        splitmix64(config.hyper.seed ^ splitmix64(stream)))) {
      Positive q{b, p.label, best_class_iou(b, record.annotations, p.label), SampleOrigin::kAugmented};
      const double w = config.sample_weight ? q.iou : 1.0;
      out.push_back({crop_resize(image, b), q.label, q.iou, w, q.origin});
    }
  }

  if (config.bg_per_image > 0 && background_boxes.size() > config.bg_per_image) {
    std::vector<std::size_t> idx(background_boxes.size());
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng = make_rng(config.hyper.seed, kBackgroundStream + ordinal);
    for (std::size_t i = 0; i < config.bg_per_image; ++i)
      std::swap(idx[i], idx[static_cast<std::size_t>(uniform_int(rng, std::int64_t(i), std::int64_t(idx.size() - 1)))]);
    idx.resize(config.bg_per_image);
    std::sort(idx.begin(), idx.end());
    std::vector<BoundingBox> kept;
    for (auto i : idx) kept.push_back(background_boxes[i]);
    background_boxes = std::move(kept);
  }
  for (const auto& b : background_boxes)
    out.push_back({crop_resize(image, b), background, 0.0, 1.0, SampleOrigin::kBackground});
  return out;
}

nn::Tensor probs_row(const nn::Tensor& probs, std::size_t row) {
  const std::size_t c = probs.extent(1);
  return nn::Tensor({c}, std::vector<double>(probs.data() + row * c, probs.data() + (row + 1) * c));
}

std::size_t argmax_row(const nn::Tensor& probs, std::size_t row) {
  const std::size_t c = probs.extent(1);
  const double* p = probs.data() + row * c;
  return static_cast<std::size_t>(std::max_element(p, p + c) - p);
}

nn::Tensor assemble(std::span<const LabeledSample> samples, std::span<const std::size_t> indices) {
  constexpr std::size_t kPixels = kCropSize * kCropSize * 3;
  nn::Tensor batch({indices.size(), kCropSize, kCropSize, 3});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& crop = samples[indices[i]].crop;
    std::copy(crop.values().begin(), crop.values().end(), batch.data() + i * kPixels);
  }
  return batch;
}

}  // namespace

const char* sample_origin_name(SampleOrigin origin) noexcept {
  switch (origin) {
    case SampleOrigin::kGroundTruth: return "gt";
    case SampleOrigin::kProposal: return "proposal";
    case SampleOrigin::kAugmented: return "augmented";
    case SampleOrigin::kBackground: return "background";
  }
  return "?";
}

std::vector<std::size_t> TrainingSet::labels() const {
  std::vector<std::size_t> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.label);
  return out;
}

TrainingSet build_training_set(const TrainingConfig& config, const DatasetIndex& dataset,
                               const RegionProposer& proposer, std::size_t threads) {
  validate(config);
  const auto images = training_images(dataset, config.use_val);
  std::vector<std::vector<LabeledSample>> per_image(images.size());
  parallel_for(images.size(), threads, [&](std::size_t i) {
    per_image[i] = image_samples(config, *images[i], i, dataset.background_index(), proposer);
  });

  TrainingSet set;
  set.num_outputs = dataset.num_classes() + 1;
  for (auto& v : per_image)
    for (auto& s : v) set.samples.push_back(std::move(s));
  if (config.contrast_norm && !set.samples.empty()) {
    std::vector<nn::Tensor> crops;
    crops.reserve(set.samples.size());
    for (const auto& s : set.samples) crops.push_back(s.crop);
    set.norm = compute_norm_stats(crops);
    for (auto& s : set.samples) apply_norm_in_place(s.crop, *set.norm);
  }
  return set;
}

std::vector<std::vector<std::size_t>> plan_epoch(std::span<const std::size_t> labels, BalanceMode mode,
                                                 std::size_t batch_size, std::uint64_t seed) {
  require(batch_size > 0, "batch size must be positive");
  if (mode == BalanceMode::kBatch) return balance_batch(labels, batch_size, seed);
  std::vector<std::size_t> order;
  if (mode == BalanceMode::kEpoch) {
    order = balance_epoch(group_by_label(labels), seed);
  } else {
    order.resize(labels.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng = make_rng(seed);
    shuffle(order.begin(), order.end(), rng);
  }
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t i = 0; i < order.size(); i += batch_size)
    batches.emplace_back(order.begin() + i, order.begin() + std::min(order.size(), i + batch_size));
  return batches;
}

void fit(LogoNet& net, std::span<const LabeledSample> samples, const TrainingConfig& config,
         std::vector<EpochStats>* stats, const ProgressFn& progress) {
  if (samples.empty()) fail(ErrorCode::kData, "empty training set");
  const auto& h = config.hyper;
  const std::size_t c = net.num_classes();
  std::vector<std::size_t> labels;
  for (const auto& s : samples) {
    require(s.label < c, "sample label outside the network's outputs");
    labels.push_back(s.label);
  }
  const auto decay_epoch = static_cast<std::size_t>(std::floor(h.lr_decay_at * double(h.epochs)));

  for (std::size_t epoch = 0; epoch < h.epochs; ++epoch) {
    const double lr = (h.lr_decay_at < 1.0 && epoch >= decay_epoch) ? h.lr * h.lr_decay : h.lr;
    const auto batches = plan_epoch(labels, config.class_balance, h.batch_size,
                                    splitmix64(h.seed ^ splitmix64(kEpochStream + epoch)));
    double loss_sum = 0.0;
    std::size_t fed = 0, correct = 0;
    for (const auto& indices : batches) {
      const std::size_t n = indices.size();
      net.params().zero_grad();
      ForwardTrace trace;
      const auto probs = net.forward_batch(assemble(samples, indices), &trace);
      nn::Tensor grad({n, c});
      for (std::size_t i = 0; i < n; ++i) {
        const auto& s = samples[indices[i]];
        const auto r = nn::weighted_cross_entropy(probs_row(probs, i), s.label, s.weight);
        loss_sum += r.loss;
        for (std::size_t j = 0; j < c; ++j) grad[i * c + j] = r.grad_logits[j] / double(n);
        if (argmax_row(probs, i) == s.label) ++correct;
      }
      fed += n;
      net.backward(trace, grad);
      nn::sgd_step(net.params(), lr, h.momentum, h.weight_decay);
    }
    EpochStats e{loss_sum / double(fed), double(correct) / double(fed), lr};
    if (stats) stats->push_back(e);
    if (progress)
      progress("epoch " + std::to_string(epoch + 1) + "/" + std::to_string(h.epochs) + " loss " +
               std::to_string(e.loss) + " accuracy " + std::to_string(e.accuracy));
  }
}

double mean_loss(const LogoNet& net, std::span<const LabeledSample> samples, std::size_t batch_size) {
  require(!samples.empty(), "mean_loss needs samples");
  double sum = 0.0;
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < samples.size(); start += batch_size) {
    idx.clear();
    for (std::size_t i = start; i < std::min(samples.size(), start + batch_size); ++i) idx.push_back(i);
    const auto probs = net.forward_batch(assemble(samples, idx));
    for (std::size_t i = 0; i < idx.size(); ++i)
      sum += nn::weighted_cross_entropy(probs_row(probs, i), samples[idx[i]].label, 1.0).loss;
  }
  return sum / double(samples.size());
}

std::size_t image_label(const ImageRecord& record, std::size_t background) {
  return record.label ? *record.label : background;
}

TrainResult train(const TrainingConfig& config, const DatasetIndex& dataset, const RegionProposer& proposer,
                  const TrainOptions& options) {
  validate(config);
  auto set = build_training_set(config, dataset, proposer, options.threads);
  if (set.samples.empty()) fail(ErrorCode::kData, "empty training set");

  TrainReport report;
  report.sample_count = set.samples.size();
  report.class_counts.assign(set.num_outputs, 0);
  for (const auto& s : set.samples) {
    ++report.origin_counts[static_cast<std::size_t>(s.origin)];
    ++report.class_counts[s.label];
  }
  if (options.progress) options.progress("training samples " + std::to_string(set.samples.size()));

  LogoNet net = LogoNet::build(set.num_outputs, config.hyper.seed);
  fit(net, set.samples, config, &report.epochs, options.progress);
  set.samples.clear();
  set.samples.shrink_to_fit();

  Model model{std::move(net), dataset.class_names, set.norm, 0.0};
  std::vector<ImageRecord> calibration = dataset.split(Split::kTrain);
  const auto& val = dataset.split(Split::kVal);
  calibration.insert(calibration.end(), val.begin(), val.end());
  const auto choice = calibrate_threshold(model, calibration, proposer, options.threads);
  model.threshold = choice.threshold;
  report.threshold = choice.threshold;
  report.calibration_accuracy = choice.accuracy;
  return {std::move(model), std::move(report)};
}

double accuracy_at(std::span<const ImageDecision> decisions, std::span<const std::size_t> labels,
                   std::size_t background, double threshold) {
  require(decisions.size() == labels.size(), "decision and label counts differ");
  if (decisions.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const auto& d = decisions[i];
    const bool logo = d.proposal_count > 0 && d.winner != background && d.confidence > threshold;
    if ((logo ? d.winner : background) == labels[i]) ++correct;
  }
  return double(correct) / double(decisions.size());
}

ThresholdChoice choose_threshold(std::span<const ImageDecision> decisions, std::span<const std::size_t> labels,
                                 std::size_t background) {
  if (decisions.empty()) fail(ErrorCode::kData, "empty calibration set");
  std::vector<double> candidates{0.0};
  for (const auto& d : decisions)
    if (d.proposal_count > 0 && d.winner != background) candidates.push_back(d.confidence);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  ThresholdChoice best{candidates.front(), -1.0};
  for (double t : candidates) {
    const double acc = accuracy_at(decisions, labels, background, t);
    if (acc > best.accuracy) best = {t, acc};
  }
  return best;
}

ThresholdChoice calibrate_threshold(const Model& model, std::span<const ImageRecord> images,
                                    const RegionProposer& proposer, std::size_t threads) {
  if (images.empty()) fail(ErrorCode::kData, "empty calibration set");
  std::vector<ImageDecision> decisions(images.size());
  std::vector<std::size_t> labels(images.size());
  parallel_for(images.size(), threads, [&](std::size_t i) {
    const Image image = read_image(images[i].path);
    decisions[i] = classify_image(image, images[i].path.string(), model, proposer);
    labels[i] = image_label(images[i], model.background_index());
  });
  return choose_threshold(decisions, labels, model.background_index());
}

}  // namespace logorec
