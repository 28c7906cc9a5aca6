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
#include <cmath>

#include "dedup/dedup.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace logorec;

namespace {

GrayPlane constant_plane(std::size_t side, double v) { return {side, side, std::vector<double>(side * side, v)}; }

std::vector<std::vector<double>> random_features(std::size_t n, std::size_t dim, std::uint64_t seed, int levels) {
  auto rng = make_rng(seed, 3);
  std::vector<std::vector<double>> out(n, std::vector<double>(dim));
  // Few distinct levels so equal distances actually occur.
  for (auto& f : out)
    for (auto& v : f) v = double(uniform_int(rng, 0, levels - 1));
  return out;
}

}  // namespace

TEST_CASE("ssim") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = testing::random_image(50, 40, seed);
    const auto b = testing::random_image(50, 40, seed + 100);
    CHECK(ssim(a, a) == 1.0);
    CHECK(ssim(a, b) == ssim(b, a));
  }
  SUBCASE("constant planes reduce to the luminance term") {
    const SsimConfig cfg{8, 8, 1e-4, 9e-4};
    const double expected = (2 * 0.2 * 0.7 + 1e-4) / (0.2 * 0.2 + 0.7 * 0.7 + 1e-4);
    CHECK(std::abs(ssim(constant_plane(8, 0.2), constant_plane(8, 0.7), cfg) - expected) < 1e-12);
    CHECK(std::abs(expected - 0.5283908696) < 1e-9);
  }
  SUBCASE("single block by hand") {
    // a = 0,1 alternating: mean 0.5, var 0.25. b = a / 2 + 0.25: mean 0.5, var 0.0625, cov 0.125.
    GrayPlane a{8, 8, {}}, b{8, 8, {}};
    for (int i = 0; i < 64; ++i) {
      a.values.push_back(i % 2);
      b.values.push_back((i % 2) * 0.5 + 0.25);
    }
    const SsimConfig cfg{8, 8, 1e-4, 9e-4};
    const double l = (2 * 0.5 * 0.5 + 1e-4) / (0.25 + 0.25 + 1e-4);
    const double cs = (2 * 0.125 + 9e-4) / (0.25 + 0.0625 + 9e-4);
    CHECK(std::abs(ssim(a, b, cfg) - l * cs) < 1e-12);
  }
  SUBCASE("grayscale conversion") {
    Image im(4, 4);
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) im.set(x, y, 255, 0, 0);
    const auto g = to_gray(im, 8);
    CHECK(g.values.size() == 64);
    for (double v : g.values) CHECK(v == doctest::Approx(0.299));
  }
}

TEST_CASE("exact duplicates") {
  std::vector<GrayPlane> noise;
  for (std::uint64_t s = 0; s < 4; ++s) noise.push_back(to_gray(testing::random_image(64, 64, 40 + s)));
  SUBCASE("a copy is found") {
    auto with_copy = noise;
    with_copy.push_back(noise[2]);
    const auto pairs = find_exact_duplicates(with_copy);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].a == 2);
    CHECK(pairs[0].b == 4);
    CHECK(pairs[0].ssim == 1.0);
  }
  SUBCASE("independent noise does not match") {
    for (std::size_t i = 0; i < noise.size(); ++i)
      for (std::size_t j = i + 1; j < noise.size(); ++j) CHECK(ssim(noise[i], noise[j]) < 0.9);
    CHECK(find_exact_duplicates(noise).empty());
    CHECK(find_exact_duplicates(std::span(noise).first(2), std::span(noise).last(2)).empty());
  }
  SUBCASE("threshold 1 is strict") {
    const std::vector<GrayPlane> a{noise[0]}, b{noise[0]};
    CHECK(find_exact_duplicates(a, b, 1.0).empty());
    CHECK(find_exact_duplicates(a, b, 0.999).size() == 1);
  }
}

TEST_CASE("nearest neighbours") {
  const std::vector<std::vector<double>> items{{0, 0}, {3, 4}, {1, 1}};
  const std::vector<std::string> ids{"a", "b", "c"};
  const std::vector<std::vector<double>> q{{3, 4}};
  const auto r = find_near_duplicates(q, items, ids, false);
  REQUIRE(r.size() == 1);
  REQUIRE(r[0].neighbors.size() == 3);
  CHECK(r[0].neighbors[0].index == 1);
  CHECK(r[0].neighbors[0].distance == 0.0);
  CHECK(r[0].neighbors[2].distance == 5.0);

  SUBCASE("matches a naive scan, ties included") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto a = random_features(50, 3, seed, 3);
      const auto b = random_features(50, 3, seed + 50, 3);
      std::vector<std::string> bid;
      for (std::size_t i = 0; i < b.size(); ++i) bid.push_back("item" + std::to_string((i * 7) % 50));
      for (bool same : {false, true}) {
        const auto& items_used = same ? a : b;
        const auto got = find_near_duplicates(a, items_used, bid, same);
        const auto want = testing::naive_knn(a, items_used, bid, same, kNeighborCount);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
          CHECK(got[i].query == i);
          REQUIRE(got[i].neighbors.size() == want[i].size());
          for (std::size_t k = 0; k < want[i].size(); ++k) {
            CHECK(got[i].neighbors[k].index == want[i][k].index);
            CHECK(got[i].neighbors[k].distance == want[i][k].distance);
          }
        }
      }
    }
  }
}
