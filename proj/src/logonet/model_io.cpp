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
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "common/error.hpp"
#include "logonet/model.hpp"

namespace fs = std::filesystem;

namespace logorec {
namespace {

constexpr const char* kMagic = "LOGOREC-MODEL";

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void put_f32(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
  const char bytes[4] = {static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
                         static_cast<char>((bits >> 16) & 0xff), static_cast<char>((bits >> 24) & 0xff)};
  out.write(bytes, 4);
}

double get_f32(const unsigned char* p) {
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                             (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
  return static_cast<double>(std::bit_cast<float>(bits));
}

// Reads header lines; running out of input means the file was cut short.
class HeaderReader {
 public:
  HeaderReader(std::istream& in, const fs::path& path) : in_(in), path_(path) {}

  std::istringstream line(const std::string& keyword) {
    std::string text;
    if (!std::getline(in_, text)) fail(ErrorCode::kTruncated, "model file ends inside the header: " + path_.string());
    std::istringstream fields(text);
    std::string key;
    fields >> key;
    if (key != keyword)
      fail(ErrorCode::kFormat, "model header: expected '" + keyword + "', found '" + key + "' in " + path_.string());
    return fields;
  }

  template <class T>
  T field(std::istringstream& fields, const char* what) {
    T v{};
    if (!(fields >> v)) fail(ErrorCode::kFormat, std::string("model header: malformed ") + what + " in " + path_.string());
    return v;
  }

  double real(std::istringstream& fields, const char* what) {
    const auto token = field<std::string>(fields, what);
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
      fail(ErrorCode::kFormat, std::string("model header: malformed ") + what + " in " + path_.string());
    return v;
  }

 private:
  std::istream& in_;
  const fs::path& path_;
};

}  // namespace

void round_to_stored_precision(LogoNet& net) {
  for (auto& l : net.params()) {
    for (auto& v : l.weights.value.values()) v = static_cast<float>(v);
    for (auto& v : l.bias.value.values()) v = static_cast<float>(v);
  }
}

void save_model(const Model& model, const fs::path& path) {
  require(model.net.num_classes() == model.class_names.size() + 1,
          "model class table does not match network outputs");
  for (const auto& name : model.class_names)
    require(!name.empty() && name.find_first_of(" \t\r\n") == std::string::npos, [&] { return
            "class names must be non-empty without whitespace: '" + name + "'"; });

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write model file: " + path.string());
  out << kMagic << "\n";
  out << "version " << kModelFormatVersion << "\n";
  out << "classes " << model.class_names.size() << "\n";
  for (const auto& name : model.class_names) out << "class " << name << "\n";
  out << "contrast_norm " << (model.norm ? 1 : 0) << "\n";
  const NormStats stats = model.norm.value_or(NormStats{});
  out << "norm_mean " << fmt_double(stats.mean[0]) << " " << fmt_double(stats.mean[1]) << " "
      << fmt_double(stats.mean[2]) << "\n";
  out << "norm_std " << fmt_double(stats.std[0]) << " " << fmt_double(stats.std[1]) << " "
      << fmt_double(stats.std[2]) << "\n";
  out << "threshold " << fmt_double(model.threshold) << "\n";
  const auto& layers = model.net.layers();
  out << "layers " << layers.size() << "\n";
  for (const auto& l : layers)
    out << "layer " << layer_kind_name(l.kind) << " " << l.kernel << " " << l.stride << " " << l.padding << " "
        << l.in_channels << " " << l.out_channels << "\n";
  const auto& params = model.net.params();
  out << "params " << params.size() * 2 << "\n";
  std::size_t total = 0;
  auto manifest = [&](const std::string& name, const nn::Tensor& t) {
    out << "param " << name << " " << t.rank();
    for (auto e : t.shape()) out << " " << e;
    out << "\n";
    total += t.size();
  };
  for (const auto& l : params) {
    manifest(l.name + ".weights", l.weights.value);
    manifest(l.name + ".bias", l.bias.value);
  }
  out << "payload float32le " << total << "\n";
  for (const auto& l : params) {
    for (double v : l.weights.value.values()) put_f32(out, v);
    for (double v : l.bias.value.values()) put_f32(out, v);
  }
  if (!out) fail(ErrorCode::kIo, "failed writing model file: " + path.string());
}

Model load_model(const fs::path& path, std::optional<std::size_t> expected_classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open model file: " + path.string());

  std::string magic;
  if (!std::getline(in, magic)) fail(ErrorCode::kTruncated, "empty model file: " + path.string());
  if (magic != kMagic) fail(ErrorCode::kFormat, "not a logorec model file (bad magic): " + path.string());

  HeaderReader r(in, path);
  auto f = r.line("version");
  const int version = r.field<int>(f, "version");
  if (version != kModelFormatVersion)
    fail(ErrorCode::kVersion, "model format version " + std::to_string(version) + " is not supported (expected " +
                                  std::to_string(kModelFormatVersion) + "): " + path.string());

  f = r.line("classes");
  const auto n_classes = r.field<std::size_t>(f, "class count");
  if (n_classes == 0 || n_classes > 100000) fail(ErrorCode::kFormat, "model header: implausible class count");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n_classes; ++i) {
    f = r.line("class");
    names.push_back(r.field<std::string>(f, "class name"));
  }
  f = r.line("contrast_norm");
  const int has_norm = r.field<int>(f, "contrast_norm flag");
  NormStats stats;
  f = r.line("norm_mean");
  for (auto& m : stats.mean) m = r.real(f, "norm_mean");
  f = r.line("norm_std");
  for (auto& s : stats.std) s = r.real(f, "norm_std");
  f = r.line("threshold");
  const double threshold = r.real(f, "threshold");

  const std::size_t outputs = n_classes + 1;
  if (expected_classes && *expected_classes != outputs)
    fail(ErrorCode::kShape, "model has " + std::to_string(outputs) + " outputs but " +
                                std::to_string(*expected_classes) + " were expected: " + path.string());
  const auto arch = logo_architecture(outputs);

  f = r.line("layers");
  const auto n_layers = r.field<std::size_t>(f, "layer count");
  if (n_layers != arch.size())
    fail(ErrorCode::kShape, "model manifest lists " + std::to_string(n_layers) + " layers, architecture has " +
                                std::to_string(arch.size()));
  for (std::size_t i = 0; i < n_layers; ++i) {
    f = r.line("layer");
    const auto kind = r.field<std::string>(f, "layer kind");
    LayerSpec s;
    s.kind = arch[i].kind;
    s.kernel = r.field<std::size_t>(f, "kernel");
    s.stride = r.field<std::size_t>(f, "stride");
    s.padding = r.field<std::size_t>(f, "padding");
    s.in_channels = r.field<std::size_t>(f, "in_channels");
    s.out_channels = r.field<std::size_t>(f, "out_channels");
    if (kind != layer_kind_name(arch[i].kind) || !(s == arch[i]))
      fail(ErrorCode::kShape, "model manifest layer " + std::to_string(i) + " does not match the architecture");
  }

  f = r.line("params");
  const auto n_params = r.field<std::size_t>(f, "param count");
  std::vector<nn::Shape> shapes;
  std::vector<std::string> pnames;
  std::size_t expected_total = 0;
  for (std::size_t i = 0; i < n_params; ++i) {
    f = r.line("param");
    pnames.push_back(r.field<std::string>(f, "param name"));
    const auto rank = r.field<std::size_t>(f, "param rank");
    if (rank == 0 || rank > 8) fail(ErrorCode::kFormat, "model header: implausible parameter rank");
    nn::Shape shape(rank);
    for (auto& e : shape) e = r.field<std::size_t>(f, "param extent");
    for (auto e : shape)
      if (e == 0) fail(ErrorCode::kShape, "model manifest has a zero extent");
    expected_total += nn::shape_volume(shape);
    shapes.push_back(std::move(shape));
  }
  f = r.line("payload");
  if (r.field<std::string>(f, "payload encoding") != "float32le")
    fail(ErrorCode::kFormat, "model payload encoding not supported: " + path.string());
  const auto total = r.field<std::size_t>(f, "payload count");
  if (total != expected_total) fail(ErrorCode::kShape, "model payload count disagrees with the manifest");

  std::vector<unsigned char> bytes(total * 4);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
    fail(ErrorCode::kTruncated, "model payload is truncated: " + path.string());
  if (in.peek() != std::char_traits<char>::eof())
    fail(ErrorCode::kFormat, "trailing bytes after model payload: " + path.string());

  if (n_params % 2 != 0) fail(ErrorCode::kShape, "model manifest must pair weights with biases");
  nn::ParamBundle bundle;
  std::size_t offset = 0;
  auto take = [&](const nn::Shape& shape) {
    nn::Tensor t(shape);
    for (auto& v : t.values()) {
      v = get_f32(bytes.data() + offset * 4);
      ++offset;
    }
    return t;
  };
  for (std::size_t i = 0; i < n_params; i += 2) {
    auto w = take(shapes[i]);
    auto b = take(shapes[i + 1]);
    auto name = pnames[i];
    if (const auto dot = name.rfind('.'); dot != std::string::npos) name.resize(dot);
    bundle.add(std::move(name), std::move(w), std::move(b));
  }

  Model model{LogoNet(outputs, std::move(bundle)), std::move(names), std::nullopt, threshold};
  if (has_norm) model.norm = stats;
  return model;
}

}  // namespace logorec
