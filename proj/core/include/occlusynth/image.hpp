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

#ifndef OCCLUSYNTH_IMAGE_HPP_
#define OCCLUSYNTH_IMAGE_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace occlusynth {

/// 8-bit RGB raster, interleaved row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 3 * width * height bytes

  Image() = default;
  Image(int w, int h, std::array<std::uint8_t, 3> fill = {0, 0, 0});

  std::uint8_t* pixel(int x, int y) {
    return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
  const std::uint8_t* pixel(int x, int y) const {
    return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }

  friend bool operator==(const Image&, const Image&) = default;
};

/// Decoded PNG: RGB pixels plus the alpha plane when the file had one
/// (empty otherwise). Gray and palette images are expanded to RGB.
struct DecodedPng {
  Image rgb;
  std::vector<std::uint8_t> alpha;  // width*height bytes, or empty
};

/// Reads an 8-bit PNG. 16-bit files are reduced to 8 bits. Throws IoError
/// on unreadable or undecodable files, naming the path.
DecodedPng load_png(const std::string& path);

/// Writes an 8-bit RGB PNG. Output bytes depend only on the pixel data, so
/// repeated runs produce identical files. Throws IoError on failure.
void save_png(const std::string& path, const Image& img);

/// Writes a 16-bit RGB PNG from three single-channel planes of
/// width*height values each.
void save_png16(const std::string& path, int width, int height,
                const std::vector<std::uint16_t>& r,
                const std::vector<std::uint16_t>& g,
                const std::vector<std::uint16_t>& b);

/// Bilinear resize. Degenerate target dimensions throw ValidationError.
Image resize_bilinear(const Image& src, int out_width, int out_height);

/// Rec. 601 luminance, rounded to the nearest integer in [0, 255].
inline int luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<int>(0.299 * r + 0.587 * g + 0.114 * b + 0.5);
}

}  // namespace occlusynth

#endif  // OCCLUSYNTH_IMAGE_HPP_
