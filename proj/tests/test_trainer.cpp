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
#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "synthbench/synth.hpp"
#include "support.hpp"
#include "trainer/trainer.hpp"

using namespace logorec;

namespace {

const DatasetIndex& tiny_dataset() {
  static const DatasetIndex ds = [] {
    SynthSpec spec;
    spec.num_classes = 3;
    spec.train_per_class = 2;
    spec.val_per_class = 1;
    spec.test_per_class = 1;
    spec.no_logo_train = 1;
    spec.no_logo_val = 1;
    spec.no_logo_test = 1;
    spec.seed = 5;
    const auto root = std::filesystem::temp_directory_path() / "logorec_unit" / "tiny_synth";
    std::filesystem::remove_all(root);
    return generate(spec, root);
  }();
  return ds;
}

ImageDecision decision(std::size_t winner, double confidence) {
  ImageDecision d;
  d.winner = winner;
  d.predicted = winner;
  d.confidence = confidence;
  d.proposal_count = 1;
  return d;
}

// Two colour classes: reddish vs bluish patches with a little noise.
std::vector<LabeledSample> colour_patches(std::size_t per_class) {
  std::vector<LabeledSample> out;
  auto rng = make_rng(8);
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const std::size_t label = i % 2;
    nn::Tensor crop({32, 32, 3});
    for (std::size_t p = 0; p < 32 * 32; ++p) {
      crop[p * 3 + 0] = (label == 0 ? 0.8 : 0.2) + 0.1 * uniform01(rng);
      crop[p * 3 + 1] = 0.4 + 0.1 * uniform01(rng);
      crop[p * 3 + 2] = (label == 0 ? 0.2 : 0.8) + 0.1 * uniform01(rng);
    }
    out.push_back({crop, label, 1.0, 1.0, SampleOrigin::kGroundTruth});
  }
  return out;
}

}  // namespace

TEST_CASE("presets reproduce the ablation toggle matrix") {
  using B = BalanceMode;
  struct Row {
    const char* id;
    bool bg;
    BoxSource bbs;
    bool augm;
    B balance;
    bool norm;
    bool weight;
  };
  const BoxSource gt = BoxSource::kGt, op = BoxSource::kGtOp;
  const Row rows[] = {
      {"TC-I", false, gt, false, B::kNone, false, false},   {"TC-II", true, gt, false, B::kNone, false, false},
      {"TC-III", true, op, false, B::kNone, false, false},  {"TC-IV", true, op, true, B::kNone, false, false},
      {"TC-V", true, op, true, B::kEpoch, false, false},    {"TC-VI", true, op, true, B::kBatch, false, false},
      {"TC-VII", true, op, true, B::kEpoch, true, false},   {"TC-VIII", true, op, true, B::kEpoch, true, true},
      {"TC-IX", true, op, true, B::kBatch, true, false},    {"TC-X", true, op, true, B::kBatch, true, true},
  };
  REQUIRE(preset_names().size() == 10);
  for (const auto& r : rows) {
    CAPTURE(r.id);
    const auto c = preset(r.id);
    CHECK(c.bg_class == r.bg);
    CHECK(c.bbs == r.bbs);
    CHECK(c.data_augm == r.augm);
    CHECK(c.class_balance == r.balance);
    CHECK(c.contrast_norm == r.norm);
    CHECK(c.sample_weight == r.weight);
    CHECK(matching_preset(c) == std::optional<std::string>(r.id));
    CHECK_NOTHROW(validate(c));
  }
  CHECK_THROWS(preset("TC-XI"));
}

TEST_CASE("training set construction") {
  const auto& ds = tiny_dataset();
  const SelectiveSearchProposer search;
  const CachingProposer proposer(search);

  std::size_t annotations = 0;
  for (auto split : {Split::kTrain, Split::kVal})
    for (const auto& r : ds.split(split)) annotations += r.annotations.size();

  const auto tc1 = build_training_set(preset("TC-I"), ds, proposer);
  CHECK(tc1.samples.size() == annotations);
  CHECK(tc1.num_outputs == ds.num_classes() + 1);
  for (const auto& s : tc1.samples) {
    CHECK(s.origin == SampleOrigin::kGroundTruth);
    CHECK(s.weight == 1.0);
  }

  const auto tc3 = build_training_set(preset("TC-III"), ds, proposer);
  const auto tc4 = build_training_set(preset("TC-IV"), ds, proposer);
  const auto positives = [&](const TrainingSet& set) {
    std::size_t n = 0;
    for (const auto& s : set.samples) n += s.label != ds.background_index();
    return n;
  };
  CHECK(positives(tc4) == 6 * positives(tc3));

  const auto tc8 = build_training_set(preset("TC-VIII"), ds, proposer);
  CHECK(tc8.norm.has_value());
  bool saw_proposal = false;
  for (const auto& s : tc8.samples) {
    if (s.origin == SampleOrigin::kGroundTruth) CHECK(s.weight == 1.0);
    if (s.origin == SampleOrigin::kProposal) {
      saw_proposal = true;
      CHECK(s.weight == s.iou);
      CHECK(s.iou >= 0.5);
    }
    if (s.origin == SampleOrigin::kBackground) CHECK(s.label == ds.background_index());
  }
  CHECK(saw_proposal);
  // Threads only change speed.
  const auto threaded = build_training_set(preset("TC-VIII"), ds, proposer, 3);
  REQUIRE(threaded.samples.size() == tc8.samples.size());
  for (std::size_t i = 0; i < tc8.samples.size(); ++i) CHECK(threaded.samples[i].crop == tc8.samples[i].crop);
}

TEST_CASE("fitting") {
  const auto samples = colour_patches(10);
  auto config = preset("TC-I");
  config.hyper.epochs = 20;
  config.hyper.batch_size = 4;
  config.hyper.seed = 3;

  SUBCASE("initial loss is near ln C") {
    const auto net = LogoNet::build(2, 3);
    const double loss = mean_loss(net, samples);
    CHECK(loss == doctest::Approx(std::log(2.0)).epsilon(0.1));
  }
  SUBCASE("separable colour patches are learned") {
    auto net = LogoNet::build(2, 3);
    std::vector<EpochStats> stats;
    fit(net, samples, config, &stats);
    CHECK(stats.size() == 20);
    CHECK(stats.back().accuracy >= 0.95);
  }
  SUBCASE("same seed, same result") {
    config.hyper.epochs = 3;
    auto a = LogoNet::build(2, 3);
    auto b = LogoNet::build(2, 3);
    std::vector<EpochStats> sa, sb;
    fit(a, samples, config, &sa);
    fit(b, samples, config, &sb);
    CHECK(sa.back().loss == sb.back().loss);
    CHECK(a.params()[0].weights.value == b.params()[0].weights.value);
  }
}

TEST_CASE("epoch plans") {
  std::vector<std::size_t> labels{0, 0, 0, 0, 0, 0, 1, 1, 2};
  const auto none = plan_epoch(labels, BalanceMode::kNone, 4, 1);
  std::vector<std::size_t> flat;
  for (const auto& b : none) flat.insert(flat.end(), b.begin(), b.end());
  std::sort(flat.begin(), flat.end());
  CHECK(flat == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8});
  const auto epoch = plan_epoch(labels, BalanceMode::kEpoch, 4, 1);
  std::vector<int> hist(3);
  for (const auto& b : epoch)
    for (auto i : b) hist[labels[i]]++;
  CHECK(hist == std::vector<int>{6, 6, 6});
  CHECK(plan_epoch(labels, BalanceMode::kEpoch, 4, 1) == epoch);
}

TEST_CASE("threshold choice") {
  // Classes 0..3 are logos, 4 is background.
  const std::size_t bg = 4;
  SUBCASE("hand example") {
    const std::vector<ImageDecision> d{decision(0, 0.9), decision(1, 0.4), decision(3, 0.35)};
    const std::vector<std::size_t> labels{0, bg, 2};
    const auto c = choose_threshold(d, labels, bg);
    CHECK(c.threshold == 0.4);
    CHECK(c.accuracy == doctest::Approx(2.0 / 3));
    for (double t : {0.4, 0.5, 0.89}) CHECK(accuracy_at(d, labels, bg, t) == doctest::Approx(2.0 / 3));
    CHECK(accuracy_at(d, labels, bg, 0.9) == doctest::Approx(1.0 / 3));
    CHECK(accuracy_at(d, labels, bg, 0.39) == doctest::Approx(1.0 / 3));
  }
  SUBCASE("all correct at full confidence") {
    const std::vector<ImageDecision> d{decision(0, 1.0), decision(2, 1.0)};
    const auto c = choose_threshold(d, std::vector<std::size_t>{0, 2}, bg);
    CHECK(c.threshold == 0.0);
    CHECK(c.accuracy == 1.0);
  }
  SUBCASE("never beaten by another candidate") {
    auto rng = make_rng(31);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<ImageDecision> d;
      std::vector<std::size_t> labels;
      for (int i = 0; i < 15; ++i) {
        d.push_back(decision(uniform_int(rng, 0, 4), uniform01(rng)));
        labels.push_back(uniform_int(rng, 0, 4));
      }
      const auto c = choose_threshold(d, labels, bg);
      CHECK(accuracy_at(d, labels, bg, c.threshold) == c.accuracy);
      for (const auto& x : d) CHECK(accuracy_at(d, labels, bg, x.confidence) <= c.accuracy);
      CHECK(accuracy_at(d, labels, bg, 0.0) <= c.accuracy);
    }
  }
}
