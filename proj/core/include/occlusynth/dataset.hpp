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

#ifndef OCCLUSYNTH_DATASET_HPP_
#define OCCLUSYNTH_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "occlusynth/compositor.hpp"
#include "occlusynth/ingest.hpp"
#include "occlusynth/metrics.hpp"

namespace occlusynth {

/// On-disk dataset layout:
///
///   <dir>/images/<scene_id:06d>.png        8-bit RGB composite
///   <dir>/annotations/<scene_id:06d>.json  scene annotation
///   <dir>/class_names.json                 ["<class0>", ...]
///   <dir>/manifest.json                    config echo + per-scene seeds
///
/// Annotation masks are stored as row-major RLE objects
/// {"size":[height,width],"counts":[...]} with runs alternating 0,1,0,...
/// and only a leading zero-length run permitted.
std::string scene_image_path(const std::string& dataset_dir, int scene_id);
std::string scene_annotation_path(const std::string& dataset_dir,
                                  int scene_id);

/// Scene ids present under <dir>/annotations, ascending.
std::vector<int> list_scene_ids(const std::string& dataset_dir);

void save_annotation(const std::string& path, const SceneAnnotation& scene);

/// Parses and validates an annotation file. Structural problems raise
/// ValidationError naming the path; a missing file raises IoError.
/// Prediction files may add a per-instance "score".
SceneAnnotation load_annotation(const std::string& path);

void save_class_names(const std::string& path,
                      const std::vector<std::string>& names);
std::vector<std::string> load_class_names(const std::string& path);

/// Reads a JSON scene configuration; absent fields keep their defaults.
/// Unknown or ill-typed fields raise ValidationError naming the field.
SceneConfig load_scene_config(const std::string& path);

/// Synthesizes n_scenes scenes (ids 0..n_scenes-1, per-scene seeds
/// derived from config.master_seed) and writes the full dataset layout.
/// The output tree is byte-identical for any jobs count.
void generate_dataset(const ObjectCatalog& catalog, const SceneConfig& config,
                      int n_scenes, const std::string& out_dir, int jobs = 1);

/// Loads every annotation of a dataset, ascending by scene id.
std::vector<SceneAnnotation> load_dataset_annotations(
    const std::string& dataset_dir, int jobs = 1);

/// Invariant violations of a single scene annotation, empty when clean:
/// per-instance visible/occluded disjointness and bbox correctness,
/// pairwise visible disjointness, and attribution of every occluded pixel
/// to a later instance's visible mask.
std::vector<std::string> validate_scene(const SceneAnnotation& scene);

/// Runs validate_scene over a dataset directory. Unreadable annotations
/// are reported as violations rather than thrown.
std::vector<std::string> check_dataset(const std::string& dataset_dir,
                                       int jobs = 1);

void save_metric_report(const std::string& path, const MetricReport& report,
                        const std::string& region_mode);

}  // namespace occlusynth

#endif  // OCCLUSYNTH_DATASET_HPP_
