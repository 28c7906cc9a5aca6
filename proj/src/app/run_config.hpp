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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "proposals/selective_search.hpp"
#include "synthbench/synth.hpp"
#include "trainer/config.hpp"

namespace logorec {

// Every tunable of a run, resolved from defaults, then a config file, then
// command-line overrides. Keys are flat: training fields use their own names
// (bg_class, lr, ...), the rest are prefixed (proposals.*, synth.*, ...).
struct RunConfig {
  TrainingConfig train;
  ProposalConfig proposals;
  SynthSpec synth;
  std::size_t threads = 1;
  std::size_t bench_runs = 100;
  double dup_threshold = 0.9;
};

struct SettingInfo {
  std::string key;
  std::string help;
};

const std::vector<SettingInfo>& setting_catalog();

// Throws Error(kUsage) naming the key for unknown keys or malformed values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

// Sets the six toggles (and the background-harvest flag) of a named preset.
// "custom" is accepted and changes nothing.
void apply_preset(RunConfig& config, std::string_view id);

// Parses "key = value" lines; '#' starts a comment. Throws kIo if unreadable
// and kUsage (with file:line) for bad content.
void load_config_file(RunConfig& config, const std::filesystem::path& path);
void load_config_text(RunConfig& config, std::string_view text, std::string_view origin);

// "preset = <id or custom>" (from the toggles), then one "key = value" line
// per setting in catalog order.
std::string dump_config(const RunConfig& config);

}  // namespace logorec
