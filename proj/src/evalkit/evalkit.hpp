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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "datamodel/dataset.hpp"
#include "inference/inference.hpp"
#include "logonet/model.hpp"
#include "proposals/selective_search.hpp"
#include "trainer/config.hpp"
#include "trainer/trainer.hpp"

namespace logorec {

// Image-level scores. Labels and decisions are class indices in [0, C];
// index C means NO-LOGO.
//   TP: decision is logo class c and the label is c.
//   FP: decision is a logo class and the label is anything else.
//   FN: the label is a logo class and the decision is not that class
//       (so a wrong class on a logo image is both an FP and an FN).
// Precision or recall with a zero denominator is 0; F1 is 0 when P + R = 0.
struct EvalResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t images = 0;
  std::vector<std::vector<std::size_t>> confusion;  // [label][decision], (C+1) x (C+1)
};

EvalResult evaluate(std::span<const std::size_t> decisions, std::span<const std::size_t> labels,
                    std::size_t num_classes);

// Keyed form: every decision's path must have a label (Error kData otherwise).
EvalResult evaluate(std::span<const std::pair<std::string, std::size_t>> decisions,
                    const std::map<std::string, std::size_t>& labels, std::size_t num_classes);

// Runs the model over one split and scores it.
EvalResult evaluate_split(const Model& model, const DatasetIndex& dataset, Split split,
                          const RegionProposer& proposer, std::size_t threads = 1);

struct AblationEntry {
  std::string id;
  TrainingConfig config;
};

struct AblationRow {
  std::string id;
  TrainingConfig config;
  std::vector<EvalResult> runs;  // one per seed
  double precision = 0.0;        // medians over runs
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
};

struct AblationOptions {
  std::vector<std::uint64_t> seeds{1};
  std::size_t threads = 1;
  Split eval_split = Split::kTest;
  ProgressFn progress;
};

// Trains and evaluates each entry under every seed (the seed replaces the
// entry's hyper.seed). Rows follow the input order.
std::vector<AblationRow> ablation_table(std::span<const AblationEntry> entries, const DatasetIndex& dataset,
                                        const RegionProposer& proposer, const AblationOptions& options = {});

double median(std::vector<double> values);

// Columns: config, the six toggles, P, R, F1, Acc.
std::string format_ablation_text(std::span<const AblationRow> rows);
std::string format_ablation_csv(std::span<const AblationRow> rows);

struct TimingRow {
  std::string device;
  StageTimes mean;
  std::size_t runs = 0;
};

// Mean stage times over the runs.
TimingRow timing_report(std::span<const StageTimes> runs, std::string device);
std::string format_timing_text(std::span<const TimingRow> rows);
std::string format_timing_csv(std::span<const TimingRow> rows);

}  // namespace logorec
