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

#include "occlusynth/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>

#include "occlusynth/error.hpp"

namespace fs = std::filesystem;

namespace occlusynth {

std::vector<std::string> ObjectCatalog::class_names() const {
  std::vector<std::string> names(entries.size());
  for (const auto& [name, id] : class_ids) {
    names[static_cast<std::size_t>(id)] = name;
  }
  return names;
}

BitMask dilate3x3(const BitMask& m) {
  const int w = m.width();
  const int h = m.height();
  BitMask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool hit = false;
      for (int dy = -1; dy <= 1 && !hit; ++dy) {
        for (int dx = -1; dx <= 1 && !hit; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          hit = m.test(nx, ny);
        }
      }
      if (hit) out.set(x, y);
    }
  }
  return out;
}

BitMask erode3x3(const BitMask& m) {
  const int w = m.width();
  const int h = m.height();
  BitMask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool keep = m.test(x, y);
      for (int dy = -1; dy <= 1 && keep; ++dy) {
        for (int dx = -1; dx <= 1 && keep; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          keep = m.test(nx, ny);
        }
      }
      if (keep) out.set(x, y);
    }
  }
  return out;
}

namespace {

BitMask drop_small_components(const BitMask& m, int min_area) {
  if (min_area <= 1 || !m.any()) return m;
  BitMask out(m.width(), m.height());
  for (const BitMask& component :
       connected_components(m, Connectivity::eight)) {
    if (component.area() >= min_area) out = mask_or(out, component);
  }
  return out;
}

}  // namespace

BitMask extract_foreground(const Image& pixels, int threshold, int min_area) {
  if (pixels.width <= 0 || pixels.height <= 0) {
    throw ValidationError("extract_foreground: empty raster");
  }
  if (threshold < 0 || threshold > 255) {
    throw ValidationError("extract_foreground: threshold outside [0, 255]");
  }
  BitMask mask(pixels.width, pixels.height);
  for (int y = 0; y < pixels.height; ++y) {
    for (int x = 0; x < pixels.width; ++x) {
      const std::uint8_t* p = pixels.pixel(x, y);
      if (luminance(p[0], p[1], p[2]) > threshold) mask.set(x, y);
    }
  }
  mask = erode3x3(dilate3x3(mask));
  return drop_small_components(mask, min_area);
}

namespace {

bool parse_view_id(const std::string& stem, int& out) {
  const char* begin = stem.data();
  const char* end = begin + stem.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

ObjectCatalog load_catalog(const std::string& root_directory,
                           const IngestConfig& config) {
  const fs::path root(root_directory);
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw IoError("catalog root is not a directory: " + root_directory);
  }

  ObjectCatalog catalog;
  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end());
  if (class_dirs.empty()) {
    throw ValidationError("catalog root has no class directories: " +
                          root_directory);
  }

  for (const fs::path& dir : class_dirs) {
    const std::string class_name = dir.filename().string();
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".png") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw ValidationError("catalog class '" + class_name + "' has no views");
    }

    std::vector<InstanceImage> views;
    for (const fs::path& file : files) {
      int view_id = 0;
      if (!parse_view_id(file.stem().string(), view_id)) {
        throw ValidationError("catalog view name is not an integer id: " +
                              file.string());
      }
      DecodedPng decoded = load_png(file.string());
      InstanceImage view;
      view.object_class = class_name;
      view.view_id = view_id;
      if (!decoded.alpha.empty()) {
        BitMask mask(decoded.rgb.width, decoded.rgb.height);
        for (int y = 0; y < decoded.rgb.height; ++y) {
          for (int x = 0; x < decoded.rgb.width; ++x) {
            const std::size_t i =
                static_cast<std::size_t>(y) * decoded.rgb.width + x;
            if (decoded.alpha[i] > 127) mask.set(x, y);
          }
        }
        view.foreground = drop_small_components(mask, config.min_area);
      } else {
        view.foreground = extract_foreground(
            decoded.rgb, config.fg_threshold, config.min_area);
      }
      view.pixels = std::move(decoded.rgb);
      views.push_back(std::move(view));
    }
    catalog.entries.emplace(class_name, std::move(views));
  }

  int next_id = 0;
  for (const auto& [name, views] : catalog.entries) {
    catalog.class_ids.emplace(name, next_id++);
  }
  return catalog;
}

}  // namespace occlusynth
