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
// Exercises the shared library through its C interface only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "logorec/logorec.h"

namespace fs = std::filesystem;

namespace {

using Lines = std::vector<std::string>;

void collect(void* user, const char* line) { static_cast<Lines*>(user)->push_back(line); }
void ignore(void*, const char*) {}

struct ConfigDeleter {
  void operator()(lr_config* c) const { lr_config_destroy(c); }
};
struct ModelDeleter {
  void operator()(lr_model* m) const { lr_model_destroy(m); }
};
using ConfigPtr = std::unique_ptr<lr_config, ConfigDeleter>;
using ModelPtr = std::unique_ptr<lr_model, ModelDeleter>;

ConfigPtr make_config() {
  lr_config* c = nullptr;
  REQUIRE(lr_config_create(&c) == LR_OK);
  return ConfigPtr(c);
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::size_t count_prefix(const Lines& lines, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& l : lines) n += starts_with(l, prefix);
  return n;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("logorec_capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// A tiny two-class dataset that trains in seconds.
void small_dataset(lr_config* c) {
  const std::pair<const char*, const char*> settings[] = {
      {"synth.num_classes", "2"},   {"synth.train_per_class", "3"}, {"synth.val_per_class", "2"},
      {"synth.test_per_class", "2"}, {"synth.no_logo_train", "1"},  {"synth.no_logo_val", "1"},
      {"synth.no_logo_test", "1"},  {"epochs", "1"},                {"batch_size", "16"},
      {"bench.runs", "2"}};
  for (const auto& [k, v] : settings) REQUIRE(lr_config_set(c, k, v) == LR_OK);
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(lr_version()).size() > 0);
  CHECK(std::string(lr_status_name(LR_OK)) == "ok");
  CHECK(std::string(lr_status_name(LR_ERR_TRUNCATED)) == "truncated");
  CHECK(std::string(lr_status_name(static_cast<lr_status>(99))) == "unknown");
}

TEST_CASE("configuration") {
  auto c = make_config();
  CHECK(lr_config_set(c.get(), "epochs", "4") == LR_OK);
  CHECK(lr_config_set(c.get(), "no_such_key", "1") == LR_ERR_USAGE);
  CHECK(std::string(lr_last_error()).find("no_such_key") != std::string::npos);
  CHECK(lr_config_set(c.get(), "epochs", "four") == LR_ERR_USAGE);
  CHECK(lr_config_apply_preset(c.get(), "TC-XI") == LR_ERR_USAGE);
  CHECK(lr_config_apply_preset(c.get(), "TC-VII") == LR_OK);
  CHECK(lr_config_set(nullptr, "epochs", "1") == LR_ERR_INVALID_ARGUMENT);
  CHECK(lr_config_load_file(c.get(), "/nonexistent/logorec.cfg") == LR_ERR_IO);

  Lines dump;
  REQUIRE(lr_config_dump(c.get(), collect, &dump) == LR_OK);
  REQUIRE(dump.size() == lr_setting_count() + 1);
  CHECK(dump[0] == "preset = TC-VII");
  CHECK(count_prefix(dump, "epochs = 4") == 1);

  // The dump is itself a valid config file.
  const auto dir = scratch("config");
  {
    std::ofstream out(dir / "run.cfg");
    for (const auto& l : dump) out << l << '\n';
  }
  auto back = make_config();
  REQUIRE(lr_config_load_file(back.get(), (dir / "run.cfg").string().c_str()) == LR_OK);
  Lines again;
  REQUIRE(lr_config_dump(back.get(), collect, &again) == LR_OK);
  CHECK(again == dump);

  for (std::size_t i = 0; i < lr_setting_count(); ++i) {
    CHECK(lr_setting_key(i) != nullptr);
    CHECK(std::string(lr_setting_help(i)).size() > 0);
  }
  CHECK(lr_setting_key(lr_setting_count()) == nullptr);
  REQUIRE(lr_preset_count() == 10);
  CHECK(std::string(lr_preset_name(0)) == "TC-I");
  CHECK(lr_preset_name(10) == nullptr);
}

TEST_CASE("model loading errors") {
  lr_model* m = nullptr;
  CHECK(lr_model_load("/nonexistent/model.bin", &m) == LR_ERR_IO);
  CHECK(m == nullptr);
  const auto dir = scratch("badmodel");
  {
    std::ofstream out(dir / "junk.bin", std::ios::binary);
    out << "definitely not a model file";
  }
  CHECK(lr_model_load((dir / "junk.bin").string().c_str(), &m) == LR_ERR_FORMAT);
  CHECK(lr_model_load(nullptr, &m) == LR_ERR_INVALID_ARGUMENT);
}

TEST_CASE("end-to-end workflows") {
  const auto dir = scratch("e2e");
  const auto data = (dir / "data").string();
  auto c = make_config();
  small_dataset(c.get());
  lr_set_log_callback(ignore, nullptr);

  Lines synth;
  REQUIRE(lr_synth(c.get(), data.c_str(), collect, &synth) == LR_OK);
  CHECK(count_prefix(synth, "classes 2") == 1);
  CHECK(count_prefix(synth, "test images 5 logo 4 no-logo 1") == 1);

  const auto test_dir = fs::path(data) / "test";
  const std::string test = test_dir.string();
  const char* inputs[] = {test.c_str()};

  Lines props;
  REQUIRE(lr_propose(c.get(), inputs, 1, collect, &props) == LR_OK);
  CHECK(!props.empty());

  lr_model* raw = nullptr;
  Lines report;
  REQUIRE(lr_config_apply_preset(c.get(), "TC-IV") == LR_OK);
  REQUIRE(lr_train(c.get(), data.c_str(), &raw, collect, &report) == LR_OK);
  ModelPtr model(raw);
  CHECK(count_prefix(report, "epoch 1 ") == 1);
  CHECK(count_prefix(report, "threshold ") == 1);
  CHECK(lr_model_class_count(model.get()) == 2);
  CHECK(lr_model_class_name(model.get(), 2) == nullptr);
  CHECK(lr_model_parameter_count(model.get()) > 0);

  const auto model_path = (dir / "model.bin").string();
  REQUIRE(lr_model_save(model.get(), model_path.c_str()) == LR_OK);
  lr_model* loaded_raw = nullptr;
  REQUIRE(lr_model_load(model_path.c_str(), &loaded_raw) == LR_OK);
  ModelPtr loaded(loaded_raw);
  CHECK(lr_model_threshold(loaded.get()) == lr_model_threshold(model.get()));

  Lines pa, pb;
  REQUIRE(lr_predict(c.get(), model.get(), inputs, 1, collect, &pa) == LR_OK);
  REQUIRE(lr_predict(c.get(), loaded.get(), inputs, 1, collect, &pb) == LR_OK);
  CHECK(pa.size() == 5);
  CHECK(pa == pb);

  // An undecodable image yields an ERROR line; the rest still gets classified.
  const std::string broken = (dir / "broken.jpg").string();
  std::ofstream(broken) << "not a jpeg";
  const char* mixed[] = {broken.c_str(), test.c_str()};
  Lines pm;
  CHECK(lr_predict(c.get(), model.get(), mixed, 2, collect, &pm) == LR_ERR_DATA);
  CHECK(count_prefix(pm, broken + " ERROR ") == 1);
  CHECK(pm.size() == 6);
  // Paths that do not exist are rejected before any work.
  const std::string missing = (dir / "missing.jpg").string();
  const char* absent[] = {missing.c_str()};
  CHECK(lr_predict(c.get(), model.get(), absent, 1, collect, &pm) == LR_ERR_IO);

  Lines eval;
  REQUIRE(lr_evaluate(c.get(), model.get(), data.c_str(), "test", collect, &eval) == LR_OK);
  CHECK(count_prefix(eval, "precision ") == 1);
  CHECK(count_prefix(eval, "tp ") == 1);
  CHECK(lr_evaluate(c.get(), model.get(), data.c_str(), "holdout", collect, &eval) == LR_ERR_USAGE);

  Lines calib;
  REQUIRE(lr_calibrate(c.get(), model.get(), data.c_str(), collect, &calib) == LR_OK);
  CHECK(count_prefix(calib, "threshold ") == 1);

  Lines dup;
  REQUIRE(lr_dedup(c.get(), inputs, 1, nullptr, 0, model.get(), collect, &dup) == LR_OK);
  CHECK(!dup.empty());  // near-duplicate candidates for every query

  Lines bench;
  const auto csv = (dir / "bench.csv").string();
  REQUIRE(lr_bench(c.get(), model.get(), inputs, 1, csv.c_str(), collect, &bench) == LR_OK);
  CHECK(!bench.empty());
  CHECK(fs::exists(csv));

  lr_set_log_callback(nullptr, nullptr);
  fs::remove_all(dir);
}
