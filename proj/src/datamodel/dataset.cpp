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
#include "datamodel/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "common/error.hpp"
#include "common/log.hpp"

namespace fs = std::filesystem;

namespace logorec {

const char* split_name(Split split) noexcept {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view name) {
  for (auto s : kAllSplits)
    if (name == split_name(s)) return s;
  return std::nullopt;
}

std::size_t DatasetIndex::image_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : splits) n += s.size();
  return n;
}

std::optional<std::size_t> DatasetIndex::class_index(std::string_view name) const {
  const auto it = std::find(class_names.begin(), class_names.end(), name);
  if (it == class_names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - class_names.begin());
}

std::vector<BoundingBox> parse_sidecar(std::string_view text, std::string_view origin) {
  std::vector<BoundingBox> boxes;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    BoundingBox b;
    std::string rest;
    if (!(fields >> b.x >> b.y >> b.w >> b.h)) {
      if (boxes.empty() && line_no == 1) continue;  // "x y width height" header
      fail(ErrorCode::kData, std::string(origin) + ":" + std::to_string(line_no) + ": expected 'x y width height'");
    }
    if (fields >> rest)
      fail(ErrorCode::kData, std::string(origin) + ":" + std::to_string(line_no) + ": trailing fields");
    if (!b.valid())
      fail(ErrorCode::kData, std::string(origin) + ":" + std::to_string(line_no) + ": box must have positive size");
    boxes.push_back(b);
  }
  return boxes;
}

std::string format_sidecar(const std::vector<BoundingBox>& boxes) {
  std::string out = "x y width height\n";
  for (const auto& b : boxes) out += to_string(b) + "\n";
  return out;
}

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kData, "cannot read annotation file: " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<fs::path> sorted_entries(const fs::path& dir, bool directories) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (directories ? e.is_directory() : e.is_regular_file()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

DatasetIndex load_dataset(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) fail(ErrorCode::kData, "dataset root is not a directory: " + root.string());

  DatasetIndex index;
  std::set<std::string> classes;
  for (auto s : kAllSplits) {
    const fs::path dir = root / split_name(s);
    if (!fs::is_directory(dir, ec)) continue;
    for (const auto& cdir : sorted_entries(dir, true)) {
      const auto name = cdir.filename().string();
      if (name != kNoLogoDir) classes.insert(name);
    }
  }
  index.class_names.assign(classes.begin(), classes.end());

  for (auto s : kAllSplits) {
    const fs::path dir = root / split_name(s);
    if (!fs::is_directory(dir, ec)) continue;
    auto& records = index.split(s);
    for (const auto& cdir : sorted_entries(dir, true)) {
      const auto name = cdir.filename().string();
      const bool no_logo = name == kNoLogoDir;
      const auto cls = no_logo ? std::nullopt : index.class_index(name);
      for (const auto& file : sorted_entries(cdir, false)) {
        if (!is_image_file(file)) continue;
        ImageRecord rec;
        rec.path = file;
        rec.size = read_image_size(file);
        rec.label = cls;
        if (!no_logo) {
          const fs::path sidecar = file.string() + std::string(kSidecarSuffix);
          if (!fs::exists(sidecar, ec))
            fail(ErrorCode::kData, "missing annotation file for logo image: " + file.string());
          for (const auto& box : parse_sidecar(read_text(sidecar), sidecar.string())) {
            auto clipped = clip_to_image(box, rec.size.width, rec.size.height);
            if (!clipped)
              fail(ErrorCode::kData, "annotation " + to_string(box) + " lies outside image " + file.string());
            if (*clipped != box) {
              const auto msg = "annotation " + to_string(box) + " clipped to " + to_string(*clipped) +
                               " in " + file.string();
              index.warnings.push_back(msg);
              log_warning(msg);
            }
            rec.annotations.push_back(Annotation{*clipped, *cls});
          }
        }
        records.push_back(std::move(rec));
      }
    }
  }
  return index;
}

}  // namespace logorec
