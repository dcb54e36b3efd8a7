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

#ifndef OCCLUSYNTH_COMPOSITOR_HPP_
#define OCCLUSYNTH_COMPOSITOR_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "occlusynth/augment.hpp"
#include "occlusynth/image.hpp"
#include "occlusynth/ingest.hpp"
#include "occlusynth/mask.hpp"

namespace occlusynth {

/// One object instance in a scene: its class, the pixels where it is the
/// topmost object (visible) and the pixels covered by later instances
/// (occluded). The two masks are disjoint and their union is the
/// instance's full in-canvas region; bbox bounds that union.
struct InstanceAnnotation {
  int instance_id = 0;
  std::string object_class;
  int class_id = 0;
  BitMask visible;
  BitMask occluded;
  BoundingBox bbox;
  std::optional<double> score;  // present on detector predictions only

  BitMask full_region() const { return mask_or(visible, occluded); }
};

/// A composed scene: instances in placement (bottom-to-top) order.
/// Visible masks of distinct instances are pairwise disjoint, and every
/// occluded pixel of an instance is visible in exactly one instance
/// placed after it.
struct SceneAnnotation {
  int scene_id = 0;
  int width = 0;
  int height = 0;
  std::uint64_t seed = 0;
  std::vector<InstanceAnnotation> instances;
};

/// Per-pixel instance counts for the three mask classes. The visible
/// plane never exceeds 1 (visible masks are disjoint); the background
/// plane counts instances whose full region excludes the pixel.
struct DensityMap {
  int width = 0;
  int height = 0;
  std::vector<float> background;
  std::vector<float> visible;
  std::vector<float> occluded;
};

/// Scene synthesis parameters. Augmentation defaults are the standard
/// ranges in AugmentRanges.
struct SceneConfig {
  int width = 640;
  int height = 480;
  int n_instances_min = 1;
  int n_instances_max = 8;
  std::array<std::uint8_t, 3> background_color{0, 0, 0};
  std::string background_dir;  // empty: flat background_color
  AugmentRanges augment;
  int min_visible_px = 16;
  bool allow_duplicates = true;
  std::uint64_t master_seed = 0;
  IngestConfig ingest;  // used when the CLI loads the catalog
};

/// Stacks a new topmost instance onto the scene. The new instance starts
/// fully visible; pixels it covers move from visible to occluded on every
/// earlier instance. Throws ValidationError if full_mask does not match
/// the scene dimensions. Instances with an empty full_mask are ignored.
void place_instance(SceneAnnotation& scene, const std::string& object_class,
                    int class_id, const BitMask& full_mask);

struct SceneResult {
  Image image;
  SceneAnnotation annotation;
};

/// Synthesizes one cluttered scene: draws an instance count, augments and
/// places random catalog views bottom-to-top, and tracks exact visible
/// and occluded masks. Instances whose final visible area falls below
/// min_visible_px are removed and the scene is re-composed without them,
/// so image and annotation always agree. Byte-deterministic in (catalog,
/// config, seed). Throws ValidationError on an empty catalog.
SceneResult synthesize_scene(const ObjectCatalog& catalog,
                             const SceneConfig& config, std::uint64_t seed,
                             int scene_id = 0);

/// Rasterizes per-pixel instance counts per mask class. All masks must
/// match the given dimensions.
DensityMap rasterize_density(const std::vector<InstanceAnnotation>& instances,
                             int width, int height);

/// Recomputes visible/occluded masks for the retained instances of a
/// scene as if the others had never been placed. Used by pick-plan
/// verification and by the drop pass in synthesize_scene.
SceneAnnotation restack_without(const SceneAnnotation& scene,
                                const std::vector<int>& removed_instance_ids);

}  // namespace occlusynth

#endif  // OCCLUSYNTH_COMPOSITOR_HPP_
