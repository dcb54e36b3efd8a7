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

#include "occlusynth/compositor.hpp"

#include <algorithm>
#include <filesystem>
#include <utility>

#include "occlusynth/error.hpp"
#include "occlusynth/rng.hpp"

namespace fs = std::filesystem;

namespace occlusynth {

namespace {

// Shared by place_instance and restack_without: push a new topmost
// instance, demoting the pixels it covers on every earlier one.
void stack_push(SceneAnnotation& scene, InstanceAnnotation inst,
                const BitMask& full_mask) {
  for (InstanceAnnotation& earlier : scene.instances) {
    const BitMask newly_covered = mask_and(earlier.visible, full_mask);
    if (newly_covered.any()) {
      earlier.occluded = mask_or(earlier.occluded, newly_covered);
      earlier.visible = mask_diff(earlier.visible, full_mask);
    }
  }
  inst.visible = full_mask;
  inst.occluded = BitMask(scene.width, scene.height);
  inst.bbox = tight_bbox(full_mask);
  scene.instances.push_back(std::move(inst));
}

}  // namespace

void place_instance(SceneAnnotation& scene, const std::string& object_class,
                    int class_id, const BitMask& full_mask) {
  if (full_mask.width() != scene.width || full_mask.height() != scene.height) {
    throw ValidationError("place_instance: mask does not match scene size");
  }
  if (!full_mask.any()) return;
  InstanceAnnotation inst;
  inst.instance_id = static_cast<int>(scene.instances.size());
  inst.object_class = object_class;
  inst.class_id = class_id;
  stack_push(scene, std::move(inst), full_mask);
}

SceneAnnotation restack_without(const SceneAnnotation& scene,
                                const std::vector<int>& removed_instance_ids) {
  SceneAnnotation out;
  out.scene_id = scene.scene_id;
  out.width = scene.width;
  out.height = scene.height;
  out.seed = scene.seed;
  for (const InstanceAnnotation& inst : scene.instances) {
    if (std::find(removed_instance_ids.begin(), removed_instance_ids.end(),
                  inst.instance_id) != removed_instance_ids.end()) {
      continue;
    }
    InstanceAnnotation copy;
    copy.instance_id = inst.instance_id;
    copy.object_class = inst.object_class;
    copy.class_id = inst.class_id;
    copy.score = inst.score;
    stack_push(out, std::move(copy), inst.full_region());
  }
  return out;
}

namespace {

struct PasteOp {
  InstanceImage warped;
  int offset_x = 0;
  int offset_y = 0;
  double sigma = 0.0;
  int class_id = 0;
  BitMask full_mask;  // canvas-size, clipped
};

Image make_background(const SceneConfig& cfg, Rng& rng) {
  if (cfg.background_dir.empty()) {
    return Image(cfg.width, cfg.height, cfg.background_color);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(cfg.background_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw ValidationError("background directory has no .png files: " +
                          cfg.background_dir);
  }
  const std::size_t pick = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(files.size()) - 1));
  Image img = load_png(files[pick].string()).rgb;
  if (img.width != cfg.width || img.height != cfg.height) {
    img = resize_bilinear(img, cfg.width, cfg.height);
  }
  return img;
}

// Uniform placement with rejection: propose bbox positions that overlap
// the canvas, accept when at least half of the instance area lands
// inside. Falls back to centering if nothing is accepted.
std::pair<int, int> sample_offset(Rng& rng, const BitMask& fg,
                                  const BoundingBox& box, int canvas_w,
                                  int canvas_h) {
  const std::int64_t full_area = fg.area();
  const int bw = box.width();
  const int bh = box.height();
  for (int attempt = 0; attempt < 64; ++attempt) {
    const int px = static_cast<int>(rng.uniform_int(-bw + 1, canvas_w - 1));
    const int py = static_cast<int>(rng.uniform_int(-bh + 1, canvas_h - 1));
    const int ox = px - box.x_min;
    const int oy = py - box.y_min;
    const std::int64_t in_area =
        fg.area_in_rect(-ox, -oy, canvas_w - ox, canvas_h - oy);
    if (in_area > 0 && 2 * in_area >= full_area) return {ox, oy};
  }
  return {(canvas_w - bw) / 2 - box.x_min, (canvas_h - bh) / 2 - box.y_min};
}

}  // namespace

SceneResult synthesize_scene(const ObjectCatalog& catalog,
                             const SceneConfig& cfg, std::uint64_t seed,
                             int scene_id) {
  if (catalog.entries.empty()) {
    throw ValidationError("synthesize_scene: empty catalog");
  }
  const std::vector<std::string> classes = catalog.class_names();

  // Draw order (background, count, then per instance: class, view,
  // params, placement) is fixed; changing it changes every dataset.
  Rng rng(seed);
  const Image background = make_background(cfg, rng);

  std::int64_t n = rng.uniform_int(cfg.n_instances_min, cfg.n_instances_max);
  std::vector<int> available(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    available[i] = static_cast<int>(i);
  }
  if (!cfg.allow_duplicates) {
    n = std::min<std::int64_t>(n, static_cast<std::int64_t>(classes.size()));
  }

  std::vector<PasteOp> pastes;
  for (std::int64_t i = 0; i < n; ++i) {
    int class_id;
    if (cfg.allow_duplicates) {
      class_id = static_cast<int>(
          rng.uniform_int(0, static_cast<std::int64_t>(classes.size()) - 1));
    } else {
      const std::size_t pick = static_cast<std::size_t>(rng.uniform_int(
          0, static_cast<std::int64_t>(available.size()) - 1));
      class_id = available[pick];
      available.erase(available.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    const std::vector<InstanceImage>& views =
        catalog.entries.at(classes[static_cast<std::size_t>(class_id)]);
    const std::size_t view_pick = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(views.size()) - 1));
    const InstanceImage& view = views[view_pick];

    const AugmentParams params = sample_params(rng, cfg.augment);
    InstanceImage colored = view;
    colored.pixels =
        apply_hsv(view.pixels, params.hsv_s_scale, params.hsv_v_scale);
    InstanceImage warped = apply_affine(colored, params, view.pixels.width,
                                        view.pixels.height);

    const BoundingBox box = tight_bbox(warped.foreground);
    if (box.empty()) continue;  // augmentation degenerated the view

    const auto [ox, oy] =
        sample_offset(rng, warped.foreground, box, cfg.width, cfg.height);
    BitMask full(cfg.width, cfg.height);
    blit(full, warped.foreground, ox, oy);
    if (!full.any()) continue;

    PasteOp op;
    op.warped = std::move(warped);
    op.offset_x = ox;
    op.offset_y = oy;
    op.sigma = params.blend_sigma;
    op.class_id = class_id;
    op.full_mask = std::move(full);
    pastes.push_back(std::move(op));
  }

  // Drop buried instances one at a time, smallest visible area first;
  // removing one can only expose the others, so this terminates with all
  // retained instances above the visibility floor.
  std::vector<bool> retained(pastes.size(), true);
  SceneAnnotation annotation;
  while (true) {
    annotation = SceneAnnotation{};
    annotation.scene_id = scene_id;
    annotation.width = cfg.width;
    annotation.height = cfg.height;
    annotation.seed = seed;
    std::vector<std::size_t> paste_of_instance;
    for (std::size_t p = 0; p < pastes.size(); ++p) {
      if (!retained[p]) continue;
      const std::size_t before = annotation.instances.size();
      place_instance(annotation,
                     pastes[p].warped.object_class, pastes[p].class_id,
                     pastes[p].full_mask);
      if (annotation.instances.size() > before) paste_of_instance.push_back(p);
    }
    std::int64_t worst_area = cfg.min_visible_px;
    std::ptrdiff_t worst = -1;
    for (std::size_t k = 0; k < annotation.instances.size(); ++k) {
      const std::int64_t area = annotation.instances[k].visible.area();
      if (area < worst_area) {
        worst_area = area;
        worst = static_cast<std::ptrdiff_t>(k);
      }
    }
    if (worst < 0) break;
    retained[paste_of_instance[static_cast<std::size_t>(worst)]] = false;
  }

  SceneResult result;
  result.image = background;
  for (std::size_t p = 0; p < pastes.size(); ++p) {
    if (!retained[p]) continue;
    blend_paste(result.image, pastes[p].warped, pastes[p].offset_x,
                pastes[p].offset_y, pastes[p].sigma);
  }
  result.annotation = std::move(annotation);
  return result;
}

DensityMap rasterize_density(const std::vector<InstanceAnnotation>& instances,
                             int width, int height) {
  for (const InstanceAnnotation& inst : instances) {
    if (inst.visible.width() != width || inst.visible.height() != height ||
        inst.occluded.width() != width || inst.occluded.height() != height) {
      throw ValidationError("rasterize_density: mask dimension mismatch");
    }
  }
  DensityMap d;
  d.width = width;
  d.height = height;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  d.background.assign(n, static_cast<float>(instances.size()));
  d.visible.assign(n, 0.0f);
  d.occluded.assign(n, 0.0f);
  for (const InstanceAnnotation& inst : instances) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * width + x;
        if (inst.visible.test(x, y)) {
          d.visible[i] += 1.0f;
          d.background[i] -= 1.0f;
        } else if (inst.occluded.test(x, y)) {
          d.occluded[i] += 1.0f;
          d.background[i] -= 1.0f;
        }
      }
    }
  }
  return d;
}

}  // namespace occlusynth
