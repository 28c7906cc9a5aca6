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
// logorec command-line front end. Everything goes through the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "logorec/logorec.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct ConfigDeleter {
  void operator()(lr_config* c) const { lr_config_destroy(c); }
};
struct ModelDeleter {
  void operator()(lr_model* m) const { lr_model_destroy(m); }
};
using ConfigPtr = std::unique_ptr<lr_config, ConfigDeleter>;
using ModelPtr = std::unique_ptr<lr_model, ModelDeleter>;

// Thrown to unwind with an exit code once the error has been reported.
struct Exit {
  int code;
};

int exit_code(lr_status s) {
  if (s == LR_OK) return kExitOk;
  if (s == LR_ERR_USAGE || s == LR_ERR_INVALID_ARGUMENT) return kExitUsage;
  return kExitData;
}

void check(lr_status s, const std::string& context = {}) {
  if (s == LR_OK) return;
  std::fprintf(stderr, "error: %s%s%s\n", context.c_str(), context.empty() ? "" : ": ", lr_last_error());
  throw Exit{exit_code(s)};
}

void print_line(void* user, const char* line) {
  auto* tee = static_cast<std::ofstream*>(user);
  std::printf("%s\n", line);
  if (tee) *tee << line << '\n';
}

void log_line(void*, const char* line) { std::fprintf(stderr, "%s\n", line); }
void echo_config(void*, const char* line) { std::fprintf(stderr, "config: %s\n", line); }
void collect(void* user, const char* line) { static_cast<std::vector<std::string>*>(user)->push_back(line); }

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

// Options shared by every subcommand.
struct Common {
  std::string config_file;
  std::vector<std::string> settings;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string preset;
  bool quiet = false;
};

std::string settings_footer() {
  std::map<std::string, std::string> defaults;
  lr_config* raw = nullptr;
  if (lr_config_create(&raw) == LR_OK) {
    ConfigPtr c(raw);
    std::vector<std::string> lines;
    lr_config_dump(c.get(), collect, &lines);
    for (const auto& l : lines)
      if (const auto eq = l.find(" = "); eq != std::string::npos) defaults[l.substr(0, eq)] = l.substr(eq + 3);
  }
  std::string text = "\nSettings (config file lines or --set key=value):\n";
  for (std::size_t i = 0; i < lr_setting_count(); ++i) {
    const std::string key = lr_setting_key(i);
    char line[320];
    std::snprintf(line, sizeof line, "  %-26s %s (default: %s)\n", key.c_str(), lr_setting_help(i),
                  defaults[key].c_str());
    text += line;
  }
  text += "\nPresets:";
  for (std::size_t i = 0; i < lr_preset_count(); ++i) text += std::string(" ") + lr_preset_name(i);
  text += "\n\nExit status: 0 success, 1 usage error, 2 data or I/O error.\n";
  return text;
}

void add_common(CLI::App* sub, Common& c, bool with_preset) {
  sub->add_option("--config", c.config_file, "Settings file of 'key = value' lines ('#' comments)");
  sub->add_option("--set", c.settings, "Override one setting, key=value (repeatable; applied after --config)");
  sub->add_option("--seed", c.seed, "Seed for training and the synthetic generator (sets seed and synth.seed)");
  sub->add_option("--threads", c.threads, "Worker threads for per-image stages (1 = deterministic order)");
  if (with_preset)
    sub->add_option("--preset", c.preset, "Training preset TC-I ... TC-X (applied after --config, before --set)");
  sub->add_flag("--quiet", c.quiet, "Do not echo the resolved settings or progress to stderr");
  sub->footer(settings_footer());
}

// defaults -> config file -> preset -> --set -> dedicated flags.
ConfigPtr resolve(const Common& c) {
  lr_config* raw = nullptr;
  check(lr_config_create(&raw));
  ConfigPtr config(raw);
  if (!c.config_file.empty()) check(lr_config_load_file(config.get(), c.config_file.c_str()), "--config");
  if (!c.preset.empty()) check(lr_config_apply_preset(config.get(), c.preset.c_str()), "--preset");
  for (const auto& kv : c.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      throw Exit{kExitUsage};
    }
    check(lr_config_set(config.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()), "--set");
  }
  if (c.seed) {
    const auto s = std::to_string(*c.seed);
    check(lr_config_set(config.get(), "seed", s.c_str()), "--seed");
    check(lr_config_set(config.get(), "synth.seed", s.c_str()), "--seed");
  }
  if (c.threads) check(lr_config_set(config.get(), "threads", std::to_string(*c.threads).c_str()), "--threads");
  lr_set_log_callback(c.quiet ? [](void*, const char*) {} : log_line, nullptr);
  if (!c.quiet) lr_config_dump(config.get(), echo_config, nullptr);
  return config;
}

ModelPtr load(const std::string& path) {
  lr_model* raw = nullptr;
  check(lr_model_load(path.c_str(), &raw), path);
  return ModelPtr(raw);
}

std::unique_ptr<std::ofstream> open_tee(const std::string& path) {
  if (path.empty()) return nullptr;
  auto out = std::make_unique<std::ofstream>(path);
  if (!*out) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    throw Exit{kExitData};
  }
  return out;
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Logo recognition with region proposals and a small convolutional network"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lr_version());
  app.footer("\nRun 'logorec <command> --help' for the options and settings of a command.");

  Common common;
  std::string data, out, model_path, split = "test", presets, seeds, csv, report;
  std::vector<std::string> inputs, reference;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic logo dataset");
  synth->add_option("--out", out, "Output dataset directory")->required();
  add_common(synth, common, false);

  auto* propose = app.add_subcommand("propose", "Print region proposals: 'path x y w h score'");
  propose->add_option("inputs", inputs, "Image files or directories")->required();
  add_common(propose, common, false);

  auto* train = app.add_subcommand("train", "Train a model and print the training report");
  train->add_option("--data", data, "Dataset root (train/val/test layout)")->required();
  train->add_option("--out", out, "Model file to write")->required();
  train->add_option("--report", report, "Also write the report to this file");
  add_common(train, common, true);

  auto* calibrate = app.add_subcommand("calibrate", "Re-choose a model's threshold on train+val images");
  calibrate->add_option("--model", model_path, "Model file")->required();
  calibrate->add_option("--data", data, "Dataset root")->required();
  calibrate->add_option("--out", out, "Where to write the calibrated model (default: overwrite --model)");
  add_common(calibrate, common, false);

  auto* predict = app.add_subcommand("predict", "Classify images: 'path class confidence n_proposals'");
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("inputs", inputs, "Image files or directories")->required();
  add_common(predict, common, false);

  auto* evaluate = app.add_subcommand("evaluate", "Precision, recall, F1 and accuracy on a dataset split");
  evaluate->add_option("--model", model_path, "Model file")->required();
  evaluate->add_option("--data", data, "Dataset root")->required();
  evaluate->add_option("--split", split, "train, val or test")->capture_default_str();
  add_common(evaluate, common, false);

  auto* ablate = app.add_subcommand("ablate", "Train and evaluate several presets; print the ablation table");
  ablate->add_option("--data", data, "Dataset root")->required();
  ablate->add_option("--presets", presets, "Comma-separated preset ids, e.g. TC-I,TC-II")->required();
  ablate->add_option("--seeds", seeds, "Comma-separated seeds; medians are reported (default: the seed setting)");
  ablate->add_option("--csv", csv, "Also write the table as CSV");
  add_common(ablate, common, false);

  auto* dedup = app.add_subcommand("dedup", "Find duplicate and near-duplicate images");
  dedup->add_option("--query", inputs, "Query image files or directories")->required();
  dedup->add_option("--reference", reference, "Reference set (default: search within the query set)");
  dedup->add_option("--model", model_path, "Model for feature-space near-duplicate search (optional)");
  add_common(dedup, common, false);

  auto* bench = app.add_subcommand("bench", "Time the recognition pipeline per stage");
  bench->add_option("--model", model_path, "Model file")->required();
  bench->add_option("inputs", inputs, "Image files or directories (the first bench.runs images are used)")
      ->required();
  bench->add_option("--csv", csv, "Also write the table as CSV");
  add_common(bench, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto config = resolve(common);
    auto* cfg = config.get();
    if (synth->parsed()) {
      check(lr_synth(cfg, out.c_str(), print_line, nullptr), out);
    } else if (propose->parsed()) {
      const auto paths = c_strings(inputs);
      check(lr_propose(cfg, paths.data(), paths.size(), print_line, nullptr));
    } else if (train->parsed()) {
      auto tee = open_tee(report);
      lr_model* raw = nullptr;
      check(lr_train(cfg, data.c_str(), &raw, print_line, tee.get()), data);
      ModelPtr model(raw);
      check(lr_model_save(model.get(), out.c_str()), out);
    } else if (calibrate->parsed()) {
      auto model = load(model_path);
      check(lr_calibrate(cfg, model.get(), data.c_str(), print_line, nullptr), data);
      const std::string& dest = out.empty() ? model_path : out;
      check(lr_model_save(model.get(), dest.c_str()), dest);
    } else if (predict->parsed()) {
      auto model = load(model_path);
      const auto paths = c_strings(inputs);
      check(lr_predict(cfg, model.get(), paths.data(), paths.size(), print_line, nullptr));
    } else if (evaluate->parsed()) {
      auto model = load(model_path);
      check(lr_evaluate(cfg, model.get(), data.c_str(), split.c_str(), print_line, nullptr), data);
    } else if (ablate->parsed()) {
      check(lr_ablate(cfg, data.c_str(), presets.c_str(), opt(seeds), opt(csv), print_line, nullptr));
    } else if (dedup->parsed()) {
      ModelPtr model;
      if (!model_path.empty()) model = load(model_path);
      const auto q = c_strings(inputs);
      const auto r = c_strings(reference);
      check(lr_dedup(cfg, q.data(), q.size(), reference.empty() ? nullptr : r.data(), r.size(), model.get(),
                     print_line, nullptr));
    } else if (bench->parsed()) {
      auto model = load(model_path);
      const auto paths = c_strings(inputs);
      check(lr_bench(cfg, model.get(), paths.data(), paths.size(), opt(csv), print_line, nullptr));
    }
  } catch (const Exit& e) {
    std::fflush(stdout);
    return e.code;
  }
  std::fflush(stdout);
  return kExitOk;
}
