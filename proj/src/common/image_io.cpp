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
#include <cstddef>
#include <cstdio>

#include <jpeglib.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "common/error.hpp"
#include "common/image.hpp"

namespace logorec {
namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) fail(ErrorCode::kIo, "cannot open image file: " + path.string());
  return f;
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void jpeg_silent(j_common_ptr) {}

// libjpeg reports errors through longjmp; nothing with a destructor may live
// between setjmp and the jump inside these helpers.
bool decode_jpeg(std::FILE* file, bool header_only, Image* out, ImageSize* size,
                 std::string* error) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager jerr;
  cinfo.err = jpeg_std_error(&jerr.base);
  jerr.base.error_exit = jpeg_error_exit;
  jerr.base.output_message = jpeg_silent;
  if (setjmp(jerr.jump)) {
    *error = jerr.message;
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file);
  jpeg_read_header(&cinfo, TRUE);
  size->width = static_cast<int>(cinfo.image_width);
  size->height = static_cast<int>(cinfo.image_height);
  if (header_only) {
    jpeg_destroy_decompress(&cinfo);
    return true;
  }
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  out->width = static_cast<int>(cinfo.output_width);
  out->height = static_cast<int>(cinfo.output_height);
  out->rgb.resize(static_cast<std::size_t>(out->width) * out->height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out->rgb.data() + static_cast<std::size_t>(cinfo.output_scanline) * out->width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

bool encode_jpeg(std::FILE* file, const Image& image, int quality, std::string* error) {
  jpeg_compress_struct cinfo;
  JpegErrorManager jerr;
  cinfo.err = jpeg_std_error(&jerr.base);
  jerr.base.error_exit = jpeg_error_exit;
  jerr.base.output_message = jpeg_silent;
  if (setjmp(jerr.jump)) {
    *error = jerr.message;
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, file);
  cinfo.image_width = static_cast<JDIMENSION>(image.width);
  cinfo.image_height = static_cast<JDIMENSION>(image.height);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  // 4:4:4, no chroma subsampling: keeps glyph colour edges sharp.
  for (int c = 0; c < cinfo.num_components; ++c) {
    cinfo.comp_info[c].h_samp_factor = 1;
    cinfo.comp_info[c].v_samp_factor = 1;
  }
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    auto* row = const_cast<JSAMPROW>(image.rgb.data() +
                                     static_cast<std::size_t>(cinfo.next_scanline) * image.width * 3);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

// Binary PPM (P6, maxval 255). Comments are skipped.
bool parse_ppm_header(std::istream& in, ImageSize* size) {
  auto next_token = [&in](std::string* tok) {
    tok->clear();
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string ignored;
        std::getline(in, ignored);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok->empty()) return true;
        continue;
      }
      tok->push_back(c);
    }
    return !tok->empty();
  };
  std::string magic, w, h, maxval;
  if (!next_token(&magic) || magic != "P6") return false;
  if (!next_token(&w) || !next_token(&h) || !next_token(&maxval)) return false;
  try {
    size->width = std::stoi(w);
    size->height = std::stoi(h);
    if (std::stoi(maxval) != 255) return false;
  } catch (const std::exception&) {
    return false;
  }
  return size->width > 0 && size->height > 0;
}

}  // namespace

bool is_image_file(const std::filesystem::path& path) {
  const auto ext = lower_extension(path);
  return ext == ".jpg" || ext == ".jpeg" || ext == ".ppm";
}

Image read_image(const std::filesystem::path& path) {
  const auto ext = lower_extension(path);
  if (ext == ".ppm") {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::kIo, "cannot open image file: " + path.string());
    ImageSize size;
    if (!parse_ppm_header(in, &size)) fail(ErrorCode::kIo, "malformed PPM image: " + path.string());
    Image image(size.width, size.height);
    in.read(reinterpret_cast<char*>(image.rgb.data()), static_cast<std::streamsize>(image.rgb.size()));
    if (in.gcount() != static_cast<std::streamsize>(image.rgb.size()))
      fail(ErrorCode::kIo, "truncated PPM image: " + path.string());
    return image;
  }
  if (ext != ".jpg" && ext != ".jpeg") fail(ErrorCode::kIo, "unsupported image format: " + path.string());
  auto file = open_file(path, "rb");
  Image image;
  ImageSize size;
  std::string error;
  if (!decode_jpeg(file.get(), false, &image, &size, &error))
    fail(ErrorCode::kIo, "cannot decode image " + path.string() + ": " + error);
  return image;
}

ImageSize read_image_size(const std::filesystem::path& path) {
  const auto ext = lower_extension(path);
  if (ext == ".ppm") {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::kIo, "cannot open image file: " + path.string());
    ImageSize size;
    if (!parse_ppm_header(in, &size)) fail(ErrorCode::kIo, "malformed PPM image: " + path.string());
    return size;
  }
  if (ext != ".jpg" && ext != ".jpeg") fail(ErrorCode::kIo, "unsupported image format: " + path.string());
  auto file = open_file(path, "rb");
  ImageSize size;
  std::string error;
  if (!decode_jpeg(file.get(), true, nullptr, &size, &error))
    fail(ErrorCode::kIo, "cannot decode image " + path.string() + ": " + error);
  return size;
}

void write_jpeg(const std::filesystem::path& path, const Image& image, int quality) {
  require(!image.empty(), "cannot write an empty image");
  auto file = open_file(path, "wb");
  std::string error;
  if (!encode_jpeg(file.get(), image, quality, &error))
    fail(ErrorCode::kIo, "cannot encode image " + path.string() + ": " + error);
}

void write_ppm(const std::filesystem::path& path, const Image& image) {
  require(!image.empty(), "cannot write an empty image");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot open image file for writing: " + path.string());
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.rgb.data()), static_cast<std::streamsize>(image.rgb.size()));
  if (!out) fail(ErrorCode::kIo, "failed writing image: " + path.string());
}

void write_image(const std::filesystem::path& path, const Image& image) {
  const auto ext = lower_extension(path);
  if (ext == ".ppm") {
    write_ppm(path, image);
  } else if (ext == ".jpg" || ext == ".jpeg") {
    write_jpeg(path, image);
  } else {
    fail(ErrorCode::kIo, "unsupported image format: " + path.string());
  }
}

}  // namespace logorec
