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
#include "app/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "common/error.hpp"

namespace logorec {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  fail(ErrorCode::kUsage,
       "invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " + std::string(expected) + ")");
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  bad_value(key, v, "true or false");
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) bad_value(key, v, "a number");
  return out;
}

std::size_t parse_count(std::string_view key, std::string_view v) { return parse_number<std::size_t>(key, v); }

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Setting {
  const char* key;
  const char* help;
  std::function<void(RunConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define LR_SETTING(K, FIELD, HELP, PARSE, SHOW)                                     \
  Setting {                                                                       \
    K, HELP, [](RunConfig& c, std::string_view k, std::string_view v) { c.FIELD = PARSE; }, \
        [](const RunConfig& c) { return SHOW; }                                   \
  }
#define LR_BOOL(K, FIELD, HELP) \
  LR_SETTING(K, FIELD, HELP, parse_bool(k, v), std::string(c.FIELD ? "true" : "false"))
#define LR_COUNT(K, FIELD, HELP) LR_SETTING(K, FIELD, HELP, parse_count(k, v), std::to_string(c.FIELD))
#define LR_REAL(K, FIELD, HELP) LR_SETTING(K, FIELD, HELP, parse_number<double>(k, v), fmt(c.FIELD))
#define LR_INT(K, FIELD, HELP) LR_SETTING(K, FIELD, HELP, parse_number<int>(k, v), std::to_string(c.FIELD))
#define LR_U64(K, FIELD, HELP) \
  LR_SETTING(K, FIELD, HELP, parse_number<std::uint64_t>(k, v), std::to_string(c.FIELD))

const std::vector<Setting>& settings() {
  static const std::vector<Setting> table{
      LR_BOOL("bg_class", train.bg_class, "train a background class from proposals"),
      Setting{"bbs", "positive boxes: GT or GT+OP",
              [](RunConfig& c, std::string_view k, std::string_view v) {
                const auto s = parse_box_source(v);
                if (!s) bad_value(k, v, "GT or GT+OP");
                c.train.bbs = *s;
              },
              [](const RunConfig& c) { return std::string(box_source_name(c.train.bbs)); }},
      LR_BOOL("data_augm", train.data_augm, "add shifted copies of every positive"),
      Setting{"class_balance", "none, epoch or batch",
              [](RunConfig& c, std::string_view k, std::string_view v) {
                const auto m = parse_balance_mode(v);
                if (!m) bad_value(k, v, "none, epoch or batch");
                c.train.class_balance = *m;
              },
              [](const RunConfig& c) { return std::string(balance_mode_name(c.train.class_balance)); }},
      LR_BOOL("contrast_norm", train.contrast_norm, "per-channel mean/std normalization of crops"),
      LR_BOOL("sample_weight", train.sample_weight, "weight proposal positives by their IoU"),
      LR_BOOL("harvest_bg_with_gt", train.harvest_bg_with_gt, "allow bg_class with GT boxes (proposals used for background only)"),
      LR_COUNT("augment_copies", train.augment_copies, "shifted copies per positive"),
      LR_INT("max_shift", train.max_shift, "largest shift in pixels at 32x32 crop scale"),
      LR_COUNT("bg_per_image", train.bg_per_image, "background samples kept per image (0 = all)"),
      LR_BOOL("use_val", train.use_val, "validation images also provide training samples"),
      LR_REAL("lr", train.hyper.lr, "learning rate"),
      LR_REAL("momentum", train.hyper.momentum, "SGD momentum"),
      LR_REAL("weight_decay", train.hyper.weight_decay, "L2 penalty on weights"),
      LR_COUNT("batch_size", train.hyper.batch_size, "mini-batch size"),
      LR_COUNT("epochs", train.hyper.epochs, "training epochs"),
      LR_REAL("lr_decay_at", train.hyper.lr_decay_at, "fraction of epochs after which lr is scaled"),
      LR_REAL("lr_decay", train.hyper.lr_decay, "learning-rate scale applied after lr_decay_at"),
      LR_U64("seed", train.hyper.seed, "training seed"),
      Setting{"proposals.k", "comma-separated segmentation scales",
              [](RunConfig& c, std::string_view k, std::string_view v) {
                std::vector<double> ks;
                std::string_view rest = v;
                while (!rest.empty()) {
                  const auto comma = rest.find(',');
                  const auto item = trim(rest.substr(0, comma));
                  ks.push_back(parse_number<double>(k, item));
                  if (comma == std::string_view::npos) break;
                  rest.remove_prefix(comma + 1);
                }
                if (ks.empty()) bad_value(k, v, "at least one scale");
                c.proposals.k_values = ks;
              },
              [](const RunConfig& c) {
                std::string out;
                for (double k : c.proposals.k_values) out += (out.empty() ? "" : ",") + fmt(k);
                return out;
              }},
      LR_INT("proposals.min_size", proposals.min_size, "smallest segment and box area, pixels"),
      LR_COUNT("proposals.max_proposals", proposals.max_proposals, "proposals kept per image"),
      LR_REAL("proposals.sigma", proposals.sigma, "Gaussian smoothing before segmentation"),
      LR_INT("proposals.min_side", proposals.min_side, "shortest allowed box side, pixels"),
      LR_REAL("proposals.max_aspect", proposals.max_aspect, "largest allowed box aspect ratio"),
      LR_COUNT("synth.num_classes", synth.num_classes, "synthetic logo classes"),
      LR_COUNT("synth.train_per_class", synth.train_per_class, "train images per class"),
      LR_COUNT("synth.val_per_class", synth.val_per_class, "val images per class"),
      LR_COUNT("synth.test_per_class", synth.test_per_class, "test images per class"),
      LR_COUNT("synth.no_logo_train", synth.no_logo_train, "train images without a logo"),
      LR_COUNT("synth.no_logo_val", synth.no_logo_val, "val images without a logo"),
      LR_COUNT("synth.no_logo_test", synth.no_logo_test, "test images without a logo"),
      LR_INT("synth.width", synth.width, "image width"),
      LR_INT("synth.height", synth.height, "image height"),
      LR_REAL("synth.min_logo_fraction", synth.min_logo_fraction, "smallest glyph extent / image side"),
      LR_REAL("synth.max_logo_fraction", synth.max_logo_fraction, "largest glyph extent / image side"),
      LR_REAL("synth.noise_level", synth.noise_level, "background texture amplitude"),
      LR_REAL("synth.distractor_rate", synth.distractor_rate, "expected distractor blobs per image"),
      LR_REAL("synth.max_rotation_deg", synth.max_rotation_deg, "largest glyph rotation"),
      LR_REAL("synth.color_jitter", synth.color_jitter, "glyph colour jitter"),
      LR_U64("synth.seed", synth.seed, "generator seed"),
      LR_COUNT("threads", threads, "worker threads for per-image stages"),
      LR_COUNT("bench.runs", bench_runs, "images averaged by bench"),
      LR_REAL("dedup.threshold", dup_threshold, "SSIM above which images are duplicates"),
  };
  return table;
}

#undef LR_BOOL
#undef LR_COUNT
#undef LR_REAL
#undef LR_INT
#undef LR_U64
#undef LR_SETTING

}  // namespace

const std::vector<SettingInfo>& setting_catalog() {
  static const std::vector<SettingInfo> catalog = [] {
    std::vector<SettingInfo> out;
    for (const auto& s : settings()) out.push_back({s.key, s.help});
    return out;
  }();
  return catalog;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  for (const auto& s : settings())
    if (key == s.key) {
      s.set(config, key, v);
      return;
    }
  fail(ErrorCode::kUsage, "unknown setting: " + std::string(key));
}

void apply_preset(RunConfig& config, std::string_view id) {
  if (id == "custom") return;
  const TrainingConfig p = preset(id);
  auto& t = config.train;
  t.bg_class = p.bg_class;
  t.bbs = p.bbs;
  t.data_augm = p.data_augm;
  t.class_balance = p.class_balance;
  t.contrast_norm = p.contrast_norm;
  t.sample_weight = p.sample_weight;
  t.harvest_bg_with_gt = p.harvest_bg_with_gt;
}

void load_config_text(RunConfig& config, std::string_view text, std::string_view origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::kUsage, std::string(origin) + ":" + std::to_string(number) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    try {
      if (key == "preset")
        apply_preset(config, value);
      else
        apply_setting(config, key, value);
    } catch (const Error& e) {
      fail(e.code(), std::string(origin) + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

void load_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read config file: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  load_config_text(config, text.str(), path.string());
}

std::string dump_config(const RunConfig& config) {
  std::ostringstream out;
  out << "preset = " << matching_preset(config.train).value_or("custom") << '\n';
  for (const auto& s : settings()) out << s.key << " = " << s.get(config) << '\n';
  return out.str();
}

}  // namespace logorec
