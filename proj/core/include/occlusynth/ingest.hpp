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

#ifndef OCCLUSYNTH_INGEST_HPP_
#define OCCLUSYNTH_INGEST_HPP_

#include <map>
#include <string>
#include <vector>

#include "occlusynth/image.hpp"
#include "occlusynth/mask.hpp"

namespace occlusynth {

/// A single view of an object photographed on a dark background, together
/// with its extracted foreground mask.
struct InstanceImage {
  std::string object_class;
  int view_id = 0;
  Image pixels;
  BitMask foreground;  // same dimensions as pixels
};

/// All views of all objects, keyed by class name. Class ids are assigned
/// by lexicographic class-name order and form a bijection onto
/// 0..n_classes-1.
struct ObjectCatalog {
  std::map<std::string, std::vector<InstanceImage>> entries;
  std::map<std::string, int> class_ids;

  std::vector<std::string> class_names() const;
  int n_classes() const { return static_cast<int>(entries.size()); }
};

struct IngestConfig {
  int fg_threshold = 25;  // luminance in [0, 255]
  int min_area = 64;      // smallest surviving component, in pixels
};

/// Foreground by luminance thresholding: keep pixels whose Rec. 601
/// luminance strictly exceeds `threshold`, close with a 3x3 kernel
/// (one iteration) to bridge single-pixel holes, then drop 8-connected
/// components smaller than `min_area`. Throws ValidationError for an
/// empty raster or a threshold outside [0, 255].
BitMask extract_foreground(const Image& pixels, int threshold, int min_area);

/// 3x3 square-kernel morphology. Out-of-image neighbors do not constrain
/// erosion, so a mask touching the border keeps its border pixels.
BitMask dilate3x3(const BitMask& m);
BitMask erode3x3(const BitMask& m);

/// Loads `root/<class_name>/<view_id>.png` into a catalog, extracting the
/// foreground of every view. A PNG alpha channel overrides thresholding
/// (foreground := alpha > 127, still filtered by min_area). Throws
/// IoError naming the file for anything undecodable, and ValidationError
/// for an empty root or a class directory with no views.
ObjectCatalog load_catalog(const std::string& root_directory,
                           const IngestConfig& config = {});

}  // namespace occlusynth

#endif  // OCCLUSYNTH_INGEST_HPP_
