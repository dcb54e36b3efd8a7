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

#ifndef OCCLUSYNTH_METRICS_HPP_
#define OCCLUSYNTH_METRICS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "occlusynth/compositor.hpp"
#include "occlusynth/mask.hpp"

namespace occlusynth {

/// The three per-instance mask classes scored by the multi-mask metrics.
enum class MaskClass { background = 0, visible = 1, occluded = 2 };
inline constexpr int kNumMaskClasses = 3;

/// Matching threshold on visible-mask IoU. The comparison is strict
/// (IoU > 0.5), which makes the matching unique for disjoint ground-truth
/// masks up to exact ties.
inline constexpr double kMatchIouThreshold = 0.5;

struct MatchedPair {
  int pred_index = 0;
  int gt_index = 0;
  double visible_iou = 0.0;
};

/// TP/FP/FN partition of one class's predicted and ground-truth
/// instances. Indices refer to the argument spans of match_instances.
struct MatchResult {
  std::vector<MatchedPair> tp;
  std::vector<int> fp;  // unmatched prediction indices
  std::vector<int> fn;  // unmatched ground-truth indices
};

/// Greedy matching on visible-mask IoU > 0.5, both sides restricted to a
/// single object class. Pairs are taken in descending IoU order (ties:
/// lower prediction index, then lower ground-truth index). When any
/// prediction carries a score, predictions are instead consumed in
/// descending score order, each taking its best still-free ground truth,
/// which mirrors detector-style evaluation. Throws ValidationError on
/// mask dimension mismatches.
MatchResult match_instances(std::span<const InstanceAnnotation> pred,
                            std::span<const InstanceAnnotation> gt);

/// |TP| / (|TP| + |FP|/2 + |FN|/2); 1.0 when all three sets are empty.
double detection_quality(std::int64_t tp, std::int64_t fp, std::int64_t fn);
double detection_quality(const MatchResult& m);

/// How the evaluation region for the three-class mIoU is chosen.
enum class RegionPolicy {
  bbox_dilated,  // bbox of (pred union gt) full regions, dilated, clipped
  full_image,
};

struct EvalConfig {
  RegionPolicy region = RegionPolicy::bbox_dilated;
  int region_dilation_px = 8;
  int jobs = 1;
};

/// Evaluation-region mask for one matched pair under the given policy.
BitMask make_eval_region(const InstanceAnnotation& pred,
                         const InstanceAnnotation& gt, RegionPolicy policy,
                         int dilation_px);

/// Mean IoU over the three mask classes inside `region`: visible and
/// occluded masks are intersected with the region, background is the
/// region minus the instance's full region. Throws ValidationError when
/// the region is empty or dimensions disagree.
double instance_miou(const InstanceAnnotation& pred,
                     const InstanceAnnotation& gt, const BitMask& region);

enum class SqMode { single, multi };

/// Mean (m)IoU over matched pairs; 0 when there are none. `single`
/// averages plain visible-mask IoU, `multi` averages instance_miou under
/// the region policy.
double segmentation_quality(const MatchResult& m,
                            std::span<const InstanceAnnotation> pred,
                            std::span<const InstanceAnnotation> gt,
                            SqMode mode,
                            RegionPolicy policy = RegionPolicy::bbox_dilated,
                            int dilation_px = 8);

struct ClassMetrics {
  double dq = 0.0;
  double sq = 0.0;
  double sq_multi = 0.0;
  double pq = 0.0;        // dq * sq
  double pq_multi = 0.0;  // dq * sq_multi
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

/// Dataset-level report: per-class metrics pooled over all scenes, plus
/// means over the reported classes (every class present in ground truth,
/// and any predicted-only class, which enters with dq = 0).
struct MetricReport {
  std::map<std::string, ClassMetrics> per_class;
  double m_dq = 0.0;
  double m_sq = 0.0;
  double m_sq_multi = 0.0;
  double m_pq = 0.0;
  double m_pq_multi = 0.0;
};

/// Evaluates predictions against ground truth. Scenes pair by scene_id
/// and must agree in dimensions; a mismatch in either direction throws
/// ValidationError listing the offending ids. TP/FP/FN are pooled per
/// class across the whole dataset before DQ/SQ are formed. Deterministic
/// for any jobs count: per-scene results are reduced in scene order.
MetricReport evaluate(const std::vector<SceneAnnotation>& pred,
                      const std::vector<SceneAnnotation>& gt,
                      const EvalConfig& config = {});

}  // namespace occlusynth

#endif  // OCCLUSYNTH_METRICS_HPP_
