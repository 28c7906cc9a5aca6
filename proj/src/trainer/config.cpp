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
#include "trainer/config.hpp"

#include <array>

#include "common/error.hpp"

namespace logorec {
namespace {

struct Toggles {
  const char* id;
  bool bg;
  BoxSource bbs;
  bool augm;
  BalanceMode balance;
  bool norm;
  bool weight;
};

using B = BalanceMode;
constexpr auto kGt = BoxSource::kGt;
constexpr auto kOp = BoxSource::kGtOp;

constexpr std::array<Toggles, 10> kPresets{{
    {"TC-I", false, kGt, false, B::kNone, false, false},
    {"TC-II", true, kGt, false, B::kNone, false, false},
    {"TC-III", true, kOp, false, B::kNone, false, false},
    {"TC-IV", true, kOp, true, B::kNone, false, false},
    {"TC-V", true, kOp, true, B::kEpoch, false, false},
    {"TC-VI", true, kOp, true, B::kBatch, false, false},
    {"TC-VII", true, kOp, true, B::kEpoch, true, false},
    {"TC-VIII", true, kOp, true, B::kEpoch, true, true},
    {"TC-IX", true, kOp, true, B::kBatch, true, false},
    {"TC-X", true, kOp, true, B::kBatch, true, true},
}};

bool toggles_match(const Toggles& t, const TrainingConfig& c) {
  return t.bg == c.bg_class && t.bbs == c.bbs && t.augm == c.data_augm && t.balance == c.class_balance &&
         t.norm == c.contrast_norm && t.weight == c.sample_weight;
}

}  // namespace

const char* box_source_name(BoxSource s) noexcept { return s == BoxSource::kGt ? "GT" : "GT+OP"; }

const char* balance_mode_name(BalanceMode m) noexcept {
  switch (m) {
    case BalanceMode::kNone: return "none";
    case BalanceMode::kEpoch: return "epoch";
    case BalanceMode::kBatch: return "batch";
  }
  return "?";
}

std::optional<BoxSource> parse_box_source(std::string_view text) {
  if (text == "GT" || text == "gt") return BoxSource::kGt;
  if (text == "GT+OP" || text == "gt+op") return BoxSource::kGtOp;
  return std::nullopt;
}

std::optional<BalanceMode> parse_balance_mode(std::string_view text) {
  for (auto m : {BalanceMode::kNone, BalanceMode::kEpoch, BalanceMode::kBatch})
    if (text == balance_mode_name(m)) return m;
  return std::nullopt;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& t : kPresets) v.emplace_back(t.id);
    return v;
  }();
  return names;
}

TrainingConfig preset(std::string_view id) {
  for (const auto& t : kPresets) {
    if (id != t.id) continue;
    TrainingConfig c;
    c.bg_class = t.bg;
    c.bbs = t.bbs;
    c.data_augm = t.augm;
    c.class_balance = t.balance;
    c.contrast_norm = t.norm;
    c.sample_weight = t.weight;
    c.harvest_bg_with_gt = t.bg && t.bbs == BoxSource::kGt;
    return c;
  }
  std::string valid;
  for (const auto& t : kPresets) valid += (valid.empty() ? "" : ", ") + std::string(t.id);
  fail(ErrorCode::kUsage, "unknown preset '" + std::string(id) + "' (valid: " + valid + ")");
}

std::optional<std::string> matching_preset(const TrainingConfig& config) {
  for (const auto& t : kPresets)
    if (toggles_match(t, config)) return std::string(t.id);
  return std::nullopt;
}

void validate(const TrainingConfig& c) {
  if (c.bg_class && c.bbs == BoxSource::kGt && !c.harvest_bg_with_gt)
    fail(ErrorCode::kUsage,
         "bg_class requires proposal boxes (bbs = GT+OP); set harvest_bg_with_gt to use proposals for "
         "background only");
  if (c.hyper.batch_size == 0) fail(ErrorCode::kUsage, "batch_size must be positive");
  if (c.hyper.epochs == 0) fail(ErrorCode::kUsage, "epochs must be positive");
  if (!(c.hyper.lr > 0.0)) fail(ErrorCode::kUsage, "lr must be positive");
  if (c.hyper.momentum < 0.0 || c.hyper.momentum >= 1.0) fail(ErrorCode::kUsage, "momentum must be in [0, 1)");
  if (c.max_shift < 0) fail(ErrorCode::kUsage, "max_shift must be non-negative");
}

}  // namespace logorec
