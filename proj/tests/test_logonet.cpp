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

#include "common/error.hpp"
#include "doctest.h"
#include "logonet/logonet.hpp"
#include "logonet/model.hpp"
#include "support.hpp"

using namespace logorec;
using logorec::testing::random_tensor;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "logorec_unit";
  fs::create_directories(dir);
  return dir / name;
}

Model small_model(std::size_t classes, std::uint64_t seed) {
  Model m{LogoNet::build(classes + 1, seed), {}, std::nullopt, 0.25};
  for (std::size_t c = 0; c < classes; ++c) m.class_names.push_back("brand" + std::to_string(c));
  return m;
}

}  // namespace

TEST_CASE("parameter counts") {
  // Per layer: 5*5*3*32+32, 5*5*32*32+32, 5*5*32*64+64, 1024*64+64, 64*33+33.
  CHECK(2432 + 25632 + 51264 + 65600 + 2145 == 147073);
  CHECK(LogoNet::build(33).parameter_count() == 147073);
  CHECK(LogoNet::build(9).parameter_count() == 147073 - 2145 + (64 * 9 + 9));
  std::size_t total = 0;
  for (const auto& spec : logo_architecture(33)) total += layer_parameter_count(spec);
  CHECK(total == 147073);
}

TEST_CASE("architecture order") {
  const auto layers = logo_architecture(33);
  const std::vector<LayerKind> kinds{LayerKind::kConv, LayerKind::kMaxPool, LayerKind::kRelu, LayerKind::kConv,
                                     LayerKind::kRelu, LayerKind::kAvgPool, LayerKind::kConv, LayerKind::kRelu,
                                     LayerKind::kAvgPool, LayerKind::kFullyConnected,
                                     LayerKind::kFullyConnected, LayerKind::kSoftmax};
  REQUIRE(layers.size() == kinds.size());
  for (std::size_t i = 0; i < kinds.size(); ++i) CHECK(layers[i].kind == kinds[i]);
  CHECK(layers[0].out_channels == 32);
  CHECK(layers[3].out_channels == 32);
  CHECK(layers[6].out_channels == 64);
  CHECK(layers[9].in_channels == 1024);
  CHECK(layers[9].out_channels == 64);
  CHECK(layers[10].out_channels == 33);
}

TEST_CASE("construction and forward are deterministic") {
  const auto a = LogoNet::build(9, 42);
  const auto b = LogoNet::build(9, 42);
  for (std::size_t i = 0; i < a.params().size(); ++i) {
    CHECK(a.params()[i].weights.value == b.params()[i].weights.value);
    CHECK(a.params()[i].bias.value == b.params()[i].bias.value);
  }
  const auto x = random_tensor({1, 32, 32, 3}, 7, 0.0, 1.0);
  CHECK(a.forward_batch(x) == a.forward_batch(x));
}

TEST_CASE("forward rows are probability vectors independent of the batch") {
  const auto net = LogoNet::build(9, 3);
  const auto one = random_tensor({1, 32, 32, 3}, 11, 0.0, 1.0);
  nn::Tensor batch({4, 32, 32, 3});
  for (std::size_t s = 0; s < 4; ++s) std::copy(one.values().begin(), one.values().end(), batch.data() + s * one.size());
  const auto probs = net.forward_batch(batch);
  REQUIRE(probs.shape() == nn::Shape{4, 9});
  const auto single = net.forward_batch(one);
  for (std::size_t s = 0; s < 4; ++s) {
    double total = 0.0;
    for (std::size_t j = 0; j < 9; ++j) {
      total += probs[s * 9 + j];
      CHECK(probs[s * 9 + j] == single[j]);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("features are the fc64 activation of the forward pass") {
  const auto net = LogoNet::build(9, 5);
  const auto x = random_tensor({1, 32, 32, 3}, 12, 0.0, 1.0);
  const auto crop = x.reshaped({32, 32, 3});
  const auto f = net.extract_features(crop);
  CHECK(f.size() == 64);
  CHECK(net.extract_features(crop) == f);
  ForwardTrace trace;
  net.forward_batch(x, &trace);
  // The last fully-connected layer consumes fc64's output.
  const auto& captured = trace.samples[0].inputs[10];
  REQUIRE(captured.size() == 64);
  for (std::size_t i = 0; i < 64; ++i) CHECK(f[i] == captured[i]);
  const auto probs = net.classify_features(f);
  const auto direct = net.forward_batch(x);
  for (std::size_t j = 0; j < 9; ++j) CHECK(probs[j] == direct[j]);
}

TEST_CASE("network gradients match finite differences") {
  auto net = LogoNet::build(5, 9);
  const auto batch = random_tensor({4, 32, 32, 3}, 13, 0.0, 1.0);
  const auto r = testing::check_network_gradients(net, batch, {0, 1, 4, 2}, {1.0, 0.5, 1.0, 0.8}, 6, 1);
  CHECK(r.checked > 40);
  CHECK(r.worst < 1e-4);
}

TEST_CASE("model files") {
  auto m = small_model(8, 21);
  m.norm = NormStats{{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}};
  round_to_stored_precision(m.net);
  const auto path = temp_file("model.bin");
  save_model(m, path);

  SUBCASE("round trip is lossless") {
    const auto back = load_model(path);
    CHECK(back.class_names == m.class_names);
    CHECK(back.threshold == m.threshold);
    CHECK(back.norm == m.norm);
    for (std::size_t i = 0; i < m.net.params().size(); ++i) {
      CHECK(back.net.params()[i].weights.value == m.net.params()[i].weights.value);
      CHECK(back.net.params()[i].bias.value == m.net.params()[i].bias.value);
    }
  }
  SUBCASE("bad magic") {
    std::string bytes;
    {
      std::ifstream in(path, std::ios::binary);
      bytes.assign(std::istreambuf_iterator<char>(in), {});
    }
    bytes[0] = 'X';
    const auto bad = temp_file("bad_magic.bin");
    std::ofstream(bad, std::ios::binary) << bytes;
    try {
      load_model(bad);
      FAIL("expected a format error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kFormat);
    }
  }
  SUBCASE("truncated payload") {
    const auto cut = temp_file("cut.bin");
    fs::copy_file(path, cut, fs::copy_options::overwrite_existing);
    fs::resize_file(cut, fs::file_size(path) - 100);
    try {
      load_model(cut);
      FAIL("expected a truncation error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kTruncated);
    }
  }
  SUBCASE("class count mismatch") {
    try {
      load_model(path, 33);
      FAIL("expected a shape error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kShape);
    }
  }
}
