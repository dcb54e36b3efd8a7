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

// Brute-force reference implementations used only by tests. Everything
// here works on plain byte rasters with naive per-pixel loops and
// exhaustive enumeration, by design sharing no code path with the library
// implementations it cross-checks.

#ifndef OCCLUSYNTH_TESTS_ORACLES_HPP_
#define OCCLUSYNTH_TESTS_ORACLES_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "occlusynth/compositor.hpp"
#include "occlusynth/mask.hpp"

namespace occlusynth::oracle {

/// Unpacked byte raster; px[y*w + x] is 0 or 1.
struct NaiveMask {
  int w = 0;
  int h = 0;
  std::vector<std::uint8_t> px;

  NaiveMask() = default;
  NaiveMask(int width, int height)
      : w(width), h(height), px(static_cast<std::size_t>(width) * height, 0) {}
  std::uint8_t at(int x, int y) const {
    return px[static_cast<std::size_t>(y) * w + x];
  }
};

NaiveMask unpack(const BitMask& m);

std::int64_t naive_area(const NaiveMask& m);
double naive_iou(const NaiveMask& a, const NaiveMask& b);

/// A pred/gt instance as the oracle sees it: plain rasters plus class.
struct NaiveInstance {
  int instance_id = 0;
  std::string object_class;
  NaiveMask visible;
  NaiveMask occluded;
};

NaiveInstance unpack_instance(const InstanceAnnotation& inst);

/// Best matching by exhaustive enumeration of all injective pred->gt
/// assignments whose pairs all exceed IoU 0.5 on visible masks. Ranked by
/// (most pairs, largest IoU sum, lexicographically smallest pred
/// assignment). Returns pairs of (pred index, gt index).
std::vector<std::pair<int, int>> exhaustive_match(
    const std::vector<NaiveInstance>& pred,
    const std::vector<NaiveInstance>& gt);

struct OracleRegion {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open, full image when policy
  bool full_image = false;
};

/// Three-class mean IoU by direct pixel counting inside the region box
/// (the full canvas in full_image mode). Background is "inside the region
/// and in neither mask".
double naive_miou(const NaiveInstance& pred, const NaiveInstance& gt,
                  int canvas_w, int canvas_h, bool full_image_region,
                  int dilation_px);

struct OracleClassMetrics {
  double dq = 0, sq = 0, sq_multi = 0, pq = 0, pq_multi = 0;
  std::int64_t tp = 0, fp = 0, fn = 0;
};

struct OracleReport {
  std::map<std::string, OracleClassMetrics> per_class;
  double m_dq = 0, m_sq = 0, m_sq_multi = 0, m_pq = 0, m_pq_multi = 0;
};

/// Full evaluation pipeline by brute force: per scene and class,
/// exhaustive matching; per class, pooled tallies over all scenes; means
/// over the classes that occur. Scenes pair by index (callers align them).
OracleReport evaluate_oracle(const std::vector<SceneAnnotation>& pred,
                             const std::vector<SceneAnnotation>& gt,
                             bool full_image_region, int dilation_px = 8);

struct OracleEdge {
  int occludee = 0;
  int occluder = 0;
  double weight = 0.0;
};

/// Occlusion graph by per-pixel attribution: scan every pixel, find the
/// instance that owns it visibly, and charge every other instance whose
/// full region covers that pixel. Edges above the threshold, ordered by
/// (occludee, occluder).
std::vector<OracleEdge> graph_oracle(const SceneAnnotation& scene,
                                     double edge_threshold);

/// Index of the topmost covering instance per pixel (-1 when none),
/// derived only from the placement order and the full regions.
std::vector<int> top_of_stack(const std::vector<NaiveMask>& full_masks, int w,
                              int h);

}  // namespace occlusynth::oracle

#endif  // OCCLUSYNTH_TESTS_ORACLES_HPP_
