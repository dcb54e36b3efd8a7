// Copyright 2026 The Occlusynth Authors
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

#include "occlusynth/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "occlusynth/error.hpp"

namespace occlusynth {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

Image::Image(int w, int h, std::array<std::uint8_t, 3> fill)
    : width(w), height(h) {
  if (w < 0 || h < 0) throw ValidationError("negative image dimensions");
  data.resize(3 * static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < data.size(); i += 3) {
    data[i] = fill[0];
    data[i + 1] = fill[1];
    data[i + 2] = fill[2];
  }
}

DecodedPng load_png(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path);

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng read init failed for " + path);
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng info init failed for " + path);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("failed to decode " + path);
  }

  png_init_io(png, file.get());
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);

  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY ||
      color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_read_update_info(png, info);

  const int channels = png_get_channels(png, info);
  if (channels != 3 && channels != 4) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("unsupported channel layout in " + path);
  }

  std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height *
                                channels);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = raw.data() + static_cast<std::size_t>(y) * width * channels;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  DecodedPng out;
  out.rgb.width = static_cast<int>(width);
  out.rgb.height = static_cast<int>(height);
  out.rgb.data.resize(3 * static_cast<std::size_t>(width) * height);
  if (channels == 3) {
    out.rgb.data = std::move(raw);
  } else {
    out.alpha.resize(static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < out.alpha.size(); ++i) {
      out.rgb.data[3 * i] = raw[4 * i];
      out.rgb.data[3 * i + 1] = raw[4 * i + 1];
      out.rgb.data[3 * i + 2] = raw[4 * i + 2];
      out.alpha[i] = raw[4 * i + 3];
    }
  }
  return out;
}

namespace {

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;

  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

void write_png_impl(const std::string& path, int width, int height,
                    int bit_depth, const std::vector<png_bytep>& rows) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot write " + path);

  PngWriter w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                  nullptr);
  if (!w.png) throw IoError("libpng write init failed for " + path);
  w.info = png_create_info_struct(w.png);
  if (!w.info) throw IoError("libpng info init failed for " + path);
  if (setjmp(png_jmpbuf(w.png))) {
    throw IoError("failed to encode " + path);
  }

  png_init_io(w.png, file.get());
  // Fixed compression settings keep the encoded bytes reproducible and
  // encoding cheap enough for bulk dataset writes.
  png_set_compression_level(w.png, 3);
  png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  png_write_image(w.png, const_cast<png_bytep*>(rows.data()));
  png_write_end(w.png, nullptr);
  if (std::fflush(file.get()) != 0) throw IoError("failed to flush " + path);
}

}  // namespace

void save_png(const std::string& path, const Image& img) {
  if (img.width <= 0 || img.height <= 0) {
    throw ValidationError("cannot encode empty image");
  }
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) {
    rows[y] = const_cast<png_bytep>(img.data.data()) +
              3 * static_cast<std::size_t>(y) * img.width;
  }
  write_png_impl(path, img.width, img.height, 8, rows);
}

void save_png16(const std::string& path, int width, int height,
                const std::vector<std::uint16_t>& r,
                const std::vector<std::uint16_t>& g,
                const std::vector<std::uint16_t>& b) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (width <= 0 || height <= 0 || r.size() != n || g.size() != n ||
      b.size() != n) {
    throw ValidationError("save_png16: plane size mismatch");
  }
  // PNG stores 16-bit samples big-endian.
  std::vector<std::uint8_t> raw(n * 6);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint16_t v[3] = {r[i], g[i], b[i]};
    for (int c = 0; c < 3; ++c) {
      raw[6 * i + 2 * c] = static_cast<std::uint8_t>(v[c] >> 8);
      raw[6 * i + 2 * c + 1] = static_cast<std::uint8_t>(v[c] & 0xFF);
    }
  }
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = raw.data() + static_cast<std::size_t>(y) * width * 6;
  }
  write_png_impl(path, width, height, 16, rows);
}

Image resize_bilinear(const Image& src, int out_width, int out_height) {
  if (src.width <= 0 || src.height <= 0 || out_width <= 0 || out_height <= 0) {
    throw ValidationError("resize_bilinear: empty source or target");
  }
  Image out(out_width, out_height);
  const double sx = static_cast<double>(src.width) / out_width;
  const double sy = static_cast<double>(src.height) / out_height;
  for (int y = 0; y < out_height; ++y) {
    const double v = (y + 0.5) * sy - 0.5;
    const int y0 = std::clamp(static_cast<int>(std::floor(v)), 0,
                              src.height - 1);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double fy = std::clamp(v - y0, 0.0, 1.0);
    for (int x = 0; x < out_width; ++x) {
      const double u = (x + 0.5) * sx - 0.5;
      const int x0 = std::clamp(static_cast<int>(std::floor(u)), 0,
                                src.width - 1);
      const int x1 = std::min(x0 + 1, src.width - 1);
      const double fx = std::clamp(u - x0, 0.0, 1.0);
      const std::uint8_t* p00 = src.pixel(x0, y0);
      const std::uint8_t* p10 = src.pixel(x1, y0);
      const std::uint8_t* p01 = src.pixel(x0, y1);
      const std::uint8_t* p11 = src.pixel(x1, y1);
      std::uint8_t* dst = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        const double top = p00[c] + (p10[c] - p00[c]) * fx;
        const double bot = p01[c] + (p11[c] - p01[c]) * fx;
        dst[c] = static_cast<std::uint8_t>(
            std::lround(std::clamp(top + (bot - top) * fy, 0.0, 255.0)));
      }
    }
  }
  return out;
}

}  // namespace occlusynth
