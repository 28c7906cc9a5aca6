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
#include <filesystem>
#include <fstream>
#include <iterator>

#include "doctest.h"
#include "synthbench/synth.hpp"

using namespace logorec;
namespace fs = std::filesystem;

namespace {

SynthSpec small_spec(std::uint64_t seed) {
  SynthSpec s;
  s.num_classes = 4;
  s.train_per_class = 2;
  s.val_per_class = 1;
  s.test_per_class = 3;
  s.no_logo_train = 1;
  s.no_logo_val = 0;
  s.no_logo_test = 2;
  s.seed = seed;
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("glyph classes") {
  const auto names = synth_class_names(8);
  CHECK(names.size() == 8);
  CHECK(std::is_sorted(names.begin(), names.end()));
  CHECK(synth_class_names(kGlyphCount).size() == kGlyphCount);
}

TEST_CASE("annotations tightly bound the painted glyph") {
  SynthSpec spec;
  spec.num_classes = kGlyphCount;
  for (std::size_t c = 0; c < kGlyphCount; ++c)
    for (std::size_t i = 0; i < 4; ++i) {
      const auto r = render_sample(spec, Split::kTrain, c, i);
      REQUIRE(r.annotations.size() == 1);
      CHECK(r.annotations[0].class_index == c);
      int x0 = r.image.width, y0 = r.image.height, x1 = -1, y1 = -1;
      for (int y = 0; y < r.image.height; ++y)
        for (int x = 0; x < r.image.width; ++x)
          if (!std::equal(r.image.pixel(x, y), r.image.pixel(x, y) + 3, r.background.pixel(x, y))) {
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
          }
      CAPTURE(c);
      CAPTURE(i);
      CHECK(r.annotations[0].box == BoundingBox{x0, y0, x1 - x0 + 1, y1 - y0 + 1});
    }
  const auto empty = render_sample(spec, Split::kTest, std::nullopt, 0);
  CHECK(empty.annotations.empty());
  CHECK(empty.image == empty.background);
}

TEST_CASE("generated dataset") {
  const auto base = fs::temp_directory_path() / "logorec_unit";
  fs::remove_all(base / "synth_a");
  fs::remove_all(base / "synth_b");
  const auto a = generate(small_spec(3), base / "synth_a");
  generate(small_spec(3), base / "synth_b");

  CHECK(a.num_classes() == 4);
  CHECK(a.split(Split::kTrain).size() == 4 * 2 + 1);
  CHECK(a.split(Split::kVal).size() == 4 * 1);
  CHECK(a.split(Split::kTest).size() == 4 * 3 + 2);
  CHECK(a.warnings.empty());

  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(base / "synth_a")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const auto twin = base / "synth_b" / fs::relative(entry.path(), base / "synth_a");
    CHECK(slurp(entry.path()) == slurp(twin));
  }
  CHECK(files > 0);

  const auto other = render_sample(small_spec(4), Split::kTrain, 0, 0);
  CHECK_FALSE(other.image == render_sample(small_spec(3), Split::kTrain, 0, 0).image);
}
