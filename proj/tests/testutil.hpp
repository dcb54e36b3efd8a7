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

#ifndef OCCLUSYNTH_TESTS_TESTUTIL_HPP_
#define OCCLUSYNTH_TESTS_TESTUTIL_HPP_

#include <unistd.h>

#include <array>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "occlusynth/compositor.hpp"
#include "occlusynth/image.hpp"
#include "occlusynth/ingest.hpp"
#include "occlusynth/mask.hpp"

namespace occlusynth::testing {

/// Self-cleaning temporary directory.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("occlusynth_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }
  std::string sub(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline BitMask rect_mask(int w, int h, int x0, int y0, int x1, int y1) {
  BitMask m(w, h);
  for (int y = std::max(0, y0); y < std::min(h, y1); ++y) {
    for (int x = std::max(0, x0); x < std::min(w, x1); ++x) {
      m.set(x, y);
    }
  }
  return m;
}

inline BitMask ellipse_mask(int w, int h, double cx, double cy, double rx,
                            double ry) {
  BitMask m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = (x + 0.5 - cx) / rx;
      const double dy = (y + 0.5 - cy) / ry;
      if (dx * dx + dy * dy <= 1.0) m.set(x, y);
    }
  }
  return m;
}

inline BitMask random_mask(std::mt19937_64& rng, int w, int h,
                           double density = 0.4) {
  BitMask m(w, h);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (coin(rng) < density) m.set(x, y);
    }
  }
  return m;
}

inline BitMask shift_mask(const BitMask& m, int dx, int dy) {
  BitMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      const int sx = x - dx;
      const int sy = y - dy;
      if (sx >= 0 && sy >= 0 && sx < m.width() && sy < m.height() &&
          m.test(sx, sy)) {
        out.set(x, y);
      }
    }
  }
  return out;
}

/// A random blob (rectangle or ellipse) for stacking tests.
inline BitMask random_blob(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> x_dist(0, w - 1);
  std::uniform_int_distribution<int> y_dist(0, h - 1);
  std::uniform_int_distribution<int> size_dist(std::max(2, w / 8),
                                               std::max(3, w / 2));
  std::uniform_int_distribution<int> kind(0, 1);
  const int x0 = x_dist(rng);
  const int y0 = y_dist(rng);
  const int sw = size_dist(rng);
  const int sh = size_dist(rng);
  if (kind(rng) == 0) return rect_mask(w, h, x0, y0, x0 + sw, y0 + sh);
  return ellipse_mask(w, h, x0 + sw / 2.0, y0 + sh / 2.0,
                      std::max(1.0, sw / 2.0), std::max(1.0, sh / 2.0));
}

/// Stacks `n` random blobs into a valid scene annotation, cycling through
/// `classes`.
inline SceneAnnotation random_stacked_scene(
    std::mt19937_64& rng, int w, int h, int n,
    const std::vector<std::string>& classes, int scene_id = 0) {
  SceneAnnotation scene;
  scene.scene_id = scene_id;
  scene.width = w;
  scene.height = h;
  for (int i = 0; i < n; ++i) {
    const std::size_t cls = static_cast<std::size_t>(i) % classes.size();
    place_instance(scene, classes[cls], static_cast<int>(cls),
                   random_blob(rng, w, h));
  }
  return scene;
}

/// Paints a filled shape onto a black square and returns the image; used
/// to build synthetic instance-image catalogs.
inline Image shape_image(int size, int kind, std::array<std::uint8_t, 3> color,
                         int margin) {
  Image img(size, size, {0, 0, 0});
  const int lo = margin;
  const int hi = size - margin;
  for (int y = lo; y < hi; ++y) {
    for (int x = lo; x < hi; ++x) {
      bool inside = false;
      switch (kind % 3) {
        case 0:
          inside = true;  // square
          break;
        case 1: {
          const double cx = size / 2.0, cy = size / 2.0;
          const double r = (hi - lo) / 2.0;
          const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
          inside = dx * dx + dy * dy <= r * r;
          break;
        }
        case 2:
          inside = (y - lo) >= std::abs(2 * (x - size / 2));  // triangle
          break;
      }
      if (inside) {
        std::uint8_t* p = img.pixel(x, y);
        p[0] = color[0];
        p[1] = color[1];
        p[2] = color[2];
      }
    }
  }
  return img;
}

/// Writes a synthetic catalog of `n_classes` classes with
/// `views_per_class` views each and returns its root directory path.
inline std::string make_test_catalog(const TempDir& dir, int n_classes,
                                     int views_per_class, int image_size = 96,
                                     const std::string& subdir = "catalog") {
  const std::filesystem::path root = dir.path() / subdir;
  for (int c = 0; c < n_classes; ++c) {
    const std::filesystem::path cls_dir =
        root / ("object_" + std::to_string(c));
    std::filesystem::create_directories(cls_dir);
    for (int v = 0; v < views_per_class; ++v) {
      const std::array<std::uint8_t, 3> color = {
          static_cast<std::uint8_t>(90 + (c * 37 + v * 11) % 160),
          static_cast<std::uint8_t>(90 + (c * 53 + v * 29) % 160),
          static_cast<std::uint8_t>(90 + (c * 71 + v * 43) % 160)};
      save_png((cls_dir / (std::to_string(v) + ".png")).string(),
               shape_image(image_size, c + v, color, image_size / 5));
    }
  }
  return root.string();
}

}  // namespace occlusynth::testing

#endif  // OCCLUSYNTH_TESTS_TESTUTIL_HPP_
