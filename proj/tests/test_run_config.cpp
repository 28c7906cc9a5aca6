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
#include "common/error.hpp"
#include "doctest.h"

using namespace logorec;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

}  // namespace

TEST_CASE("settings") {
  RunConfig c;
  apply_setting(c, "lr", "0.05");
  apply_setting(c, "class_balance", "batch");
  apply_setting(c, "bbs", "GT+OP");
  apply_setting(c, "proposals.k", "50, 300");
  apply_setting(c, "synth.seed", "9");
  apply_setting(c, "use_val", "no");
  CHECK(c.train.hyper.lr == 0.05);
  CHECK(c.train.class_balance == BalanceMode::kBatch);
  CHECK(c.train.bbs == BoxSource::kGtOp);
  CHECK(c.proposals.k_values == std::vector<double>{50, 300});
  CHECK(c.synth.seed == 9);
  CHECK_FALSE(c.train.use_val);

  CHECK(code_of([&] { apply_setting(c, "no_such_key", "1"); }) == ErrorCode::kUsage);
  CHECK(code_of([&] { apply_setting(c, "epochs", "ten"); }) == ErrorCode::kUsage);
  CHECK(code_of([&] { apply_setting(c, "bg_class", "maybe"); }) == ErrorCode::kUsage);
  CHECK(code_of([&] { apply_preset(c, "TC-0"); }) == ErrorCode::kUsage);
}

TEST_CASE("presets and hand-set toggles") {
  RunConfig c;
  apply_preset(c, "TC-VII");
  CHECK(matching_preset(c.train) == "TC-VII");
  CHECK(c.train.contrast_norm);
  apply_setting(c, "epochs", "3");
  CHECK(dump_config(c).starts_with("preset = TC-VII\n"));  // hyperparameters keep the preset
  apply_setting(c, "sample_weight", "true");
  CHECK(dump_config(c).starts_with("preset = TC-VIII\n"));
  apply_setting(c, "data_augm", "false");
  CHECK(dump_config(c).starts_with("preset = custom\n"));
  const auto before = c.train;
  apply_preset(c, "custom");
  CHECK(c.train == before);
}

TEST_CASE("config text") {
  RunConfig c;
  load_config_text(c, "# comment\npreset = TC-IV\n\nepochs = 7   # trailing\nthreads=2\n", "cfg");
  CHECK(c.train.data_augm);
  CHECK(c.train.hyper.epochs == 7);
  CHECK(c.threads == 2);
  try {
    load_config_text(c, "epochs = 2\nbogus = 1\n", "cfg");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUsage);
    CHECK(std::string(e.what()).find("cfg:2") != std::string::npos);
  }
  CHECK(code_of([&] { load_config_text(c, "just words\n", "cfg"); }) == ErrorCode::kUsage);
  CHECK(code_of([&] { load_config_file(c, "/nonexistent/logorec.cfg"); }) == ErrorCode::kIo);
}

TEST_CASE("dump round-trips") {
  RunConfig c;
  apply_preset(c, "TC-X");
  apply_setting(c, "lr", "0.0123");
  apply_setting(c, "proposals.k", "80,160,320");
  apply_setting(c, "synth.min_logo_fraction", "0.1");
  const auto text = dump_config(c);
  RunConfig back;
  load_config_text(back, text, "dump");
  CHECK(dump_config(back) == text);
  CHECK(back.train == c.train);
  CHECK(setting_catalog().size() + 1 == static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')));
}
