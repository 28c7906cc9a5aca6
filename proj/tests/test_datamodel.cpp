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
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "common/image.hpp"
#include "datamodel/balance.hpp"
#include "datamodel/box.hpp"
#include "datamodel/crops.hpp"
#include "datamodel/dataset.hpp"
#include "datamodel/labeling.hpp"
#include "datamodel/normalize.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace logorec;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "logorec_unit" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("iou") {
  const BoundingBox a{0, 0, 10, 10};
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, BoundingBox{20, 20, 5, 5}) == 0.0);
  CHECK(iou(a, BoundingBox{10, 0, 5, 5}) == 0.0);  // touching edges do not overlap
  CHECK(iou(a, BoundingBox{5, 5, 10, 10}) == doctest::Approx(25.0 / 175.0).epsilon(1e-15));
  auto rng = make_rng(3);
  for (int i = 0; i < 200; ++i) {
    const BoundingBox p{int(uniform_int(rng, 0, 20)), int(uniform_int(rng, 0, 20)), int(uniform_int(rng, 1, 15)),
                        int(uniform_int(rng, 1, 15))};
    const BoundingBox q{int(uniform_int(rng, 0, 20)), int(uniform_int(rng, 0, 20)), int(uniform_int(rng, 1, 15)),
                        int(uniform_int(rng, 1, 15))};
    CHECK(iou(p, q) == testing::brute_iou(p, q));
    CHECK(iou(p, q) == iou(q, p));
  }
}

TEST_CASE("clipping") {
  CHECK(clip_to_image({-5, -5, 10, 10}, 20, 20) == BoundingBox{0, 0, 5, 5});
  CHECK(clip_to_image({15, 15, 10, 10}, 20, 20) == BoundingBox{15, 15, 5, 5});
  CHECK_FALSE(clip_to_image({20, 0, 5, 5}, 20, 20).has_value());
  CHECK(union_box({0, 0, 2, 2}, {5, 5, 1, 1}) == BoundingBox{0, 0, 6, 6});
}

TEST_CASE("proposal labeling") {
  const std::vector<Annotation> anns{{{0, 0, 10, 10}, 3}};
  // 10x6 inside the 10x10 box: IoU 0.6.
  const std::vector<BoundingBox> props{{0, 0, 10, 6}, {50, 50, 5, 5}, {0, 0, 10, 3}};
  const auto l = label_proposals(props, anns);
  REQUIRE(l.size() == 3);
  CHECK(l[0].role == ProposalRole::kPositive);
  CHECK(l[0].class_index == 3);
  CHECK(l[0].iou == doctest::Approx(0.6));
  CHECK(l[1].role == ProposalRole::kBackground);
  CHECK(l[2].role == ProposalRole::kExcluded);
  CHECK(l[2].iou == doctest::Approx(0.3));
  // Exactly 0.5 is positive.
  CHECK(label_proposals(std::vector<BoundingBox>{{0, 0, 10, 5}}, anns)[0].role == ProposalRole::kPositive);
  // No annotations: everything is background.
  CHECK(label_proposals(props, {})[0].role == ProposalRole::kBackground);
  // Best IoU decides between annotations.
  const std::vector<Annotation> two{{{0, 0, 10, 10}, 0}, {{0, 0, 10, 7}, 1}};
  CHECK(label_proposals(std::vector<BoundingBox>{{0, 0, 10, 7}}, two)[0].class_index == 1);
}

TEST_CASE("crop and resize") {
  SUBCASE("full 32x32 image is the identity up to scaling") {
    const auto im = testing::random_image(32, 32, 4);
    const auto t = crop_resize(im, {0, 0, 32, 32});
    REQUIRE(t.shape() == nn::Shape{32, 32, 3});
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == doctest::Approx(im.rgb[i] / 255.0).epsilon(1e-12));
  }
  SUBCASE("uniform region stays uniform") {
    Image im(100, 100, 0);
    for (int y = 10; y < 74; ++y)
      for (int x = 20; x < 84; ++x) im.set(x, y, 200, 100, 50);
    const auto t = crop_resize(im, {20, 10, 64, 64});
    for (std::size_t p = 0; p < 32 * 32; ++p) {
      CHECK(t[p * 3 + 0] == doctest::Approx(200 / 255.0));
      CHECK(t[p * 3 + 1] == doctest::Approx(100 / 255.0));
      CHECK(t[p * 3 + 2] == doctest::Approx(50 / 255.0));
    }
  }
  SUBCASE("corners of an upsampled checkerboard are the source corners") {
    Image im(2, 2, 0);
    im.set(0, 0, 255, 255, 255);
    im.set(1, 1, 255, 255, 255);
    const auto t = crop_resize(im, {0, 0, 2, 2});
    CHECK(t.at(0, 0, 0) == 1.0);
    CHECK(t.at(0, 31, 0) == 0.0);
    CHECK(t.at(31, 0, 0) == 0.0);
    CHECK(t.at(31, 31, 0) == 1.0);
  }
}

TEST_CASE("shift augmentation") {
  const BoundingBox box{30, 30, 20, 20};
  const ImageSize size{64, 64};
  const auto same = augment_shifts(box, size, 5, 0, 1);
  CHECK(same == std::vector<BoundingBox>(5, box));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto shifted = augment_shifts({50, 0, 14, 10}, size, 8, 12, seed);
    CHECK(shifted.size() == 8);
    for (const auto& b : shifted) {
      CHECK(b.valid());
      CHECK(b.x >= 0);
      CHECK(b.y >= 0);
      CHECK(b.right() <= 64);
      CHECK(b.bottom() <= 64);
    }
    CHECK(shifted == augment_shifts({50, 0, 14, 10}, size, 8, 12, seed));
  }
}

TEST_CASE("contrast normalization") {
  SUBCASE("constant set normalizes to zeros") {
    const std::vector<nn::Tensor> crops(3, nn::Tensor({4, 4, 3}, 0.4));
    const auto stats = compute_norm_stats(crops);
    const auto normalized = apply_norm(crops[0], stats);
    // Zero up to the rounding of the mean (std is clamped to kMinStd).
    for (double v : normalized.values()) CHECK(std::abs(v) < 1e-9);
  }
  SUBCASE("hand-computed statistics") {
    // Channel 0 holds 0 and 1 in equal numbers: mean 0.5, std 0.5.
    // Channel 1 holds 0.2 everywhere. Channel 2 holds 0, 0, 0.3, 0.3 -> mean 0.15, std 0.15.
    nn::Tensor a({1, 2, 3}, std::vector<double>{0, 0.2, 0, 0, 0.2, 0});
    nn::Tensor b({1, 2, 3}, std::vector<double>{1, 0.2, 0.3, 1, 0.2, 0.3});
    const std::vector<nn::Tensor> crops{a, b};
    const auto s = compute_norm_stats(crops);
    CHECK(s.mean[0] == doctest::Approx(0.5));
    CHECK(s.std[0] == doctest::Approx(0.5));
    CHECK(s.mean[1] == doctest::Approx(0.2));
    CHECK(s.std[1] == kMinStd);
    CHECK(s.mean[2] == doctest::Approx(0.15));
    CHECK(s.std[2] == doctest::Approx(0.15));
  }
  SUBCASE("invert undoes apply") {
    const auto x = testing::random_tensor({8, 8, 3}, 6, 0.0, 1.0);
    const NormStats s{{0.3, 0.5, 0.2}, {0.1, 0.25, 0.7}};
    const auto back = invert_norm(apply_norm(x, s), s);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
  }
}

TEST_CASE("epoch balancing") {
  const std::vector<std::size_t> labels{0, 0, 1, 1, 1, 1, 1};
  const auto out = balance_epoch(group_by_label(labels), 9);
  std::map<std::size_t, int> hist;
  for (auto i : out) hist[labels[i]]++;
  CHECK(hist[0] == 5);
  CHECK(hist[1] == 5);
  for (auto i : out) CHECK(i < labels.size());

  const std::vector<std::size_t> even{2, 0, 1, 1, 0, 2};
  auto perm = balance_epoch(group_by_label(even), 3);
  std::sort(perm.begin(), perm.end());
  CHECK(perm == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("batch balancing") {
  std::vector<std::size_t> labels;
  for (std::size_t c = 0; c < 33; ++c)
    for (std::size_t k = 0; k < 1 + c * 3; ++k) labels.push_back(c);
  for (std::size_t per : {1u, 2u}) {
    const auto batches = balance_batch(labels, 33 * per, 4);
    CHECK(batches.size() == (labels.size() + 33 * per - 1) / (33 * per));
    for (const auto& b : batches) {
      std::vector<std::size_t> hist(33);
      for (auto i : b) hist[labels[i]]++;
      for (auto h : hist) CHECK(h == per);
    }
  }
  const std::vector<std::size_t> skewed{0, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2};
  for (const auto& b : balance_batch(skewed, 4, 1)) {
    std::vector<int> hist(3);
    for (auto i : b) hist[skewed[i]]++;
    CHECK(*std::max_element(hist.begin(), hist.end()) - *std::min_element(hist.begin(), hist.end()) <= 1);
  }
}

TEST_CASE("dataset loading") {
  SUBCASE("empty root") {
    const auto ds = load_dataset(fresh_dir("empty"));
    CHECK(ds.image_count() == 0);
    CHECK(ds.num_classes() == 0);
  }
  SUBCASE("one class, one image, one annotation") {
    const auto root = fresh_dir("one");
    fs::create_directories(root / "train" / "acme");
    write_jpeg(root / "train" / "acme" / "a.jpg", Image(40, 30, 128));
    std::ofstream(root / "train" / "acme" / "a.jpg.bboxes.txt") << "x y width height\n5 5 10 10\n";
    const auto ds = load_dataset(root);
    REQUIRE(ds.split(Split::kTrain).size() == 1);
    const auto& r = ds.split(Split::kTrain)[0];
    CHECK(r.label == std::optional<std::size_t>(0));
    REQUIRE(r.annotations.size() == 1);
    CHECK(r.annotations[0].box == BoundingBox{5, 5, 10, 10});
    CHECK(ds.warnings.empty());
  }
  SUBCASE("annotation past the image edge is clipped with a warning") {
    const auto root = fresh_dir("clip");
    fs::create_directories(root / "val" / "acme");
    write_jpeg(root / "val" / "acme" / "b.jpg", Image(40, 30, 128));
    std::ofstream(root / "val" / "acme" / "b.jpg.bboxes.txt") << "x y width height\n30 20 20 20\n";
    const auto ds = load_dataset(root);
    REQUIRE(ds.split(Split::kVal).size() == 1);
    CHECK(ds.split(Split::kVal)[0].annotations[0].box == BoundingBox{30, 20, 10, 10});
    CHECK(ds.warnings.size() == 1);
  }
  SUBCASE("sidecar parsing") {
    CHECK(parse_sidecar("x y width height\n1 2 3 4\n", "t") == std::vector<BoundingBox>{{1, 2, 3, 4}});
    CHECK_THROWS(parse_sidecar("x y width height\n1 2 three 4\n", "t"));
    const std::vector<BoundingBox> boxes{{1, 2, 3, 4}, {5, 6, 7, 8}};
    CHECK(parse_sidecar(format_sidecar(boxes), "t") == boxes);
  }
}
