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

#ifndef OCCLUSYNTH_PLANNER_HPP_
#define OCCLUSYNTH_PLANNER_HPP_

#include <map>
#include <string>
#include <vector>

#include "occlusynth/compositor.hpp"

namespace occlusynth {

/// Default decision thresholds: an instance counts as occluded when more
/// than 30% of its pixels are covered, and instance j counts as occluding
/// instance i when j's visible mask covers more than 10% of i's full
/// region.
inline constexpr double kDefaultOccludedThreshold = 0.3;
inline constexpr double kDefaultEdgeThreshold = 0.1;

/// Directed edge "occludee is occluded by occluder", weighted by the
/// fraction of the occludee's full region covered by the occluder's
/// visible mask. Weights are strictly positive and self-edges never
/// occur.
struct OcclusionEdge {
  int occludee = 0;
  int occluder = 0;
  double weight = 0.0;
};

struct OcclusionGraph {
  std::vector<int> nodes;  // instance ids, in annotation order
  std::vector<OcclusionEdge> edges;

  std::vector<const OcclusionEdge*> edges_from(int occludee) const;
};

/// Fraction of an instance's pixels that are covered:
/// |occluded| / (|visible| + |occluded|). Throws ValidationError for a
/// zero-area instance.
double occlusion_ratio(const InstanceAnnotation& inst);

/// Builds the occlusion graph of a scene. Edge i->j exists iff
/// |full(i) and visible(j)| / |full(i)| exceeds edge_threshold.
OcclusionGraph build_graph(const SceneAnnotation& scene,
                           double edge_threshold = kDefaultEdgeThreshold);

/// One "<occluder class> is on <occludee class>" line per edge, ordered
/// by descending weight (ties keep edge order).
std::vector<std::string> interpret_stacking(
    const OcclusionGraph& graph, const std::map<int, std::string>& class_names);

struct PickStep {
  int instance_id = 0;
  double occlusion_ratio = 0.0;
};

/// Removal sequence that frees the target: every non-target element is a
/// (transitive) occluder of the target, ordered topmost first.
struct PickPlan {
  int target = 0;
  std::vector<int> order;  // ends with target
  std::vector<PickStep> rationale;
};

/// Plans the picking order for `target_id`. A target at or below
/// occ_threshold is picked directly. Otherwise the transitive occluders
/// reachable through graph edges are removed topmost-first before the
/// target; with direct_only, only immediate occluders are scheduled.
/// Cycles (possible only in hand-made or predicted annotations) are
/// broken by picking the in-cycle instance with the largest visible area
/// first. Throws ValidationError for an unknown target id.
PickPlan plan_pick(const OcclusionGraph& graph, const SceneAnnotation& scene,
                   int target_id,
                   double occ_threshold = kDefaultOccludedThreshold,
                   bool direct_only = false);

}  // namespace occlusynth

#endif  // OCCLUSYNTH_PLANNER_HPP_
