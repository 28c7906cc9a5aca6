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
#include "evalkit/evalkit.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "common/error.hpp"

namespace logorec {
namespace {

double ratio(std::size_t num, std::size_t den) { return den == 0 ? 0.0 : double(num) / double(den); }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::string> toggle_cells(const TrainingConfig& c) {
  auto yes_no = [](bool b) { return std::string(b ? "Yes" : "No"); };
  std::string balance = c.class_balance == BalanceMode::kNone ? "No"
                        : c.class_balance == BalanceMode::kEpoch ? "Epoch"
                                                                 : "Batch";
  return {yes_no(c.bg_class), box_source_name(c.bbs), yes_no(c.data_augm), balance, yes_no(c.contrast_norm),
          yes_no(c.sample_weight)};
}

const std::vector<std::string> kAblationHeader{"Train. Config.", "BG class", "BBs",  "Data Augm.", "Class bal.",
                                               "Contr. norm.",   "Sample weight", "Prec.", "Rec.", "F1", "Acc."};

std::vector<std::vector<std::string>> ablation_cells(std::span<const AblationRow> rows) {
  std::vector<std::vector<std::string>> cells{kAblationHeader};
  for (const auto& r : rows) {
    std::vector<std::string> line{r.id};
    for (auto& t : toggle_cells(r.config)) line.push_back(t);
    for (double v : {r.precision, r.recall, r.f1, r.accuracy}) line.push_back(fixed(v, 3));
    cells.push_back(std::move(line));
  }
  return cells;
}

std::string aligned(const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> width;
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], row[i].size());
    }
  std::ostringstream out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
    }
    out << line << '\n';
  }
  return out.str();
}

std::string csv(const std::vector<std::vector<std::string>>& cells) {
  std::ostringstream out;
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      const bool quote = row[i].find_first_of(",\"") != std::string::npos;
      if (i) out << ',';
      if (quote) {
        out << '"';
        for (char ch : row[i]) out << (ch == '"' ? "\"\"" : std::string(1, ch));
        out << '"';
      } else {
        out << row[i];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::vector<std::string>> timing_cells(std::span<const TimingRow> rows) {
  std::vector<std::vector<std::string>> cells{{"Device", "Proposal", "Preproc.", "Classif.", "Overall"}};
  for (const auto& r : rows)
    cells.push_back({r.device, fixed(r.mean.proposal, 2) + " s", fixed(r.mean.preprocess, 2) + " s",
                     fixed(r.mean.classify, 2) + " s", fixed(r.mean.overall, 2) + " s"});
  return cells;
}

}  // namespace

EvalResult evaluate(std::span<const std::size_t> decisions, std::span<const std::size_t> labels,
                    std::size_t num_classes) {
  require(decisions.size() == labels.size(), "decision and label counts differ");
  const std::size_t none = num_classes;
  EvalResult r;
  r.images = decisions.size();
  r.confusion.assign(num_classes + 1, std::vector<std::size_t>(num_classes + 1, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const std::size_t d = decisions[i], l = labels[i];
    if (d > none || l > none) fail(ErrorCode::kInvalidArgument, "class index out of range in evaluation");
    ++r.confusion[l][d];
    if (d == l) ++correct;
    if (d != none && d == l) ++r.tp;
    if (d != none && d != l) ++r.fp;
    if (l != none && d != l) ++r.fn;
  }
  r.precision = ratio(r.tp, r.tp + r.fp);
  r.recall = ratio(r.tp, r.tp + r.fn);
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  r.accuracy = ratio(correct, r.images);
  return r;
}

EvalResult evaluate(std::span<const std::pair<std::string, std::size_t>> decisions,
                    const std::map<std::string, std::size_t>& labels, std::size_t num_classes) {
  std::vector<std::size_t> d, l;
  for (const auto& [path, decision] : decisions) {
    const auto it = labels.find(path);
    if (it == labels.end()) fail(ErrorCode::kData, "no ground-truth label for image: " + path);
    d.push_back(decision);
    l.push_back(it->second);
  }
  return evaluate(d, l, num_classes);
}

EvalResult evaluate_split(const Model& model, const DatasetIndex& dataset, Split split,
                          const RegionProposer& proposer, std::size_t threads) {
  const auto& records = dataset.split(split);
  if (records.empty()) fail(ErrorCode::kData, std::string("dataset has no ") + split_name(split) + " images");
  require(model.class_names == dataset.class_names, "model classes differ from the dataset classes");
  std::vector<std::filesystem::path> paths;
  std::vector<std::size_t> labels;
  for (const auto& r : records) {
    paths.push_back(r.path);
    labels.push_back(image_label(r, dataset.background_index()));
  }
  const auto results = classify_batch(paths, model, proposer, threads);
  std::vector<std::size_t> decisions;
  for (const auto& r : results) {
    if (!r.decision) fail(ErrorCode::kData, "cannot classify " + r.path.string() + ": " + r.error);
    decisions.push_back(r.decision->predicted);
  }
  return evaluate(decisions, labels, dataset.num_classes());
}

double median(std::vector<double> values) {
  require(!values.empty(), "median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<AblationRow> ablation_table(std::span<const AblationEntry> entries, const DatasetIndex& dataset,
                                        const RegionProposer& proposer, const AblationOptions& options) {
  require(!options.seeds.empty(), "ablation needs at least one seed");
  std::vector<AblationRow> rows;
  for (const auto& e : entries) {
    AblationRow row{e.id, e.config, {}, 0, 0, 0, 0};
    std::vector<double> p, r, f, a;
    for (auto seed : options.seeds) {
      TrainingConfig config = e.config;
      config.hyper.seed = seed;
      if (options.progress) options.progress(e.id + " seed " + std::to_string(seed));
      const auto trained = train(config, dataset, proposer, {options.threads, options.progress});
      const auto result = evaluate_split(trained.model, dataset, options.eval_split, proposer, options.threads);
      p.push_back(result.precision);
      r.push_back(result.recall);
      f.push_back(result.f1);
      a.push_back(result.accuracy);
      row.runs.push_back(result);
    }
    row.precision = median(p);
    row.recall = median(r);
    row.f1 = median(f);
    row.accuracy = median(a);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_ablation_text(std::span<const AblationRow> rows) { return aligned(ablation_cells(rows)); }
std::string format_ablation_csv(std::span<const AblationRow> rows) { return csv(ablation_cells(rows)); }

TimingRow timing_report(std::span<const StageTimes> runs, std::string device) {
  require(!runs.empty(), "timing report needs at least one run");
  TimingRow row{std::move(device), {}, runs.size()};
  for (const auto& t : runs) {
    row.mean.proposal += t.proposal;
    row.mean.preprocess += t.preprocess;
    row.mean.classify += t.classify;
    row.mean.overall += t.overall;
  }
  const double n = double(runs.size());
  row.mean.proposal /= n;
  row.mean.preprocess /= n;
  row.mean.classify /= n;
  row.mean.overall /= n;
  return row;
}

std::string format_timing_text(std::span<const TimingRow> rows) { return aligned(timing_cells(rows)); }
std::string format_timing_csv(std::span<const TimingRow> rows) { return csv(timing_cells(rows)); }

}  // namespace logorec
