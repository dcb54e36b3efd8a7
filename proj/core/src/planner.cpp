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

#include "occlusynth/planner.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "occlusynth/error.hpp"

namespace occlusynth {

std::vector<const OcclusionEdge*> OcclusionGraph::edges_from(
    int occludee) const {
  std::vector<const OcclusionEdge*> out;
  for (const OcclusionEdge& e : edges) {
    if (e.occludee == occludee) out.push_back(&e);
  }
  return out;
}

double occlusion_ratio(const InstanceAnnotation& inst) {
  const std::int64_t visible = inst.visible.area();
  const std::int64_t occluded = inst.occluded.area();
  if (visible + occluded == 0) {
    throw ValidationError("occlusion_ratio: zero-area instance " +
                          std::to_string(inst.instance_id));
  }
  return static_cast<double>(occluded) /
         static_cast<double>(visible + occluded);
}

OcclusionGraph build_graph(const SceneAnnotation& scene,
                           double edge_threshold) {
  OcclusionGraph graph;
  graph.nodes.reserve(scene.instances.size());
  for (const InstanceAnnotation& inst : scene.instances) {
    graph.nodes.push_back(inst.instance_id);
  }
  for (const InstanceAnnotation& occludee : scene.instances) {
    const BitMask full = occludee.full_region();
    const std::int64_t full_area = full.area();
    if (full_area == 0) continue;
    for (const InstanceAnnotation& occluder : scene.instances) {
      if (occluder.instance_id == occludee.instance_id) continue;
      const std::int64_t covered =
          intersection_area(full, occluder.visible);
      if (covered == 0) continue;
      const double weight =
          static_cast<double>(covered) / static_cast<double>(full_area);
      if (weight > edge_threshold) {
        graph.edges.push_back(
            {occludee.instance_id, occluder.instance_id, weight});
      }
    }
  }
  return graph;
}

std::vector<std::string> interpret_stacking(
    const OcclusionGraph& graph,
    const std::map<int, std::string>& class_names) {
  std::vector<const OcclusionEdge*> edges;
  edges.reserve(graph.edges.size());
  for (const OcclusionEdge& e : graph.edges) edges.push_back(&e);
  std::stable_sort(edges.begin(), edges.end(),
                   [](const OcclusionEdge* a, const OcclusionEdge* b) {
                     return a->weight > b->weight;
                   });
  std::vector<std::string> statements;
  statements.reserve(edges.size());
  for (const OcclusionEdge* e : edges) {
    statements.push_back(class_names.at(e->occluder) + " is on " +
                         class_names.at(e->occludee));
  }
  return statements;
}

namespace {

const InstanceAnnotation& find_instance(const SceneAnnotation& scene,
                                        int instance_id) {
  for (const InstanceAnnotation& inst : scene.instances) {
    if (inst.instance_id == instance_id) return inst;
  }
  throw ValidationError("unknown instance id " + std::to_string(instance_id));
}

}  // namespace

PickPlan plan_pick(const OcclusionGraph& graph, const SceneAnnotation& scene,
                   int target_id, double occ_threshold, bool direct_only) {
  const InstanceAnnotation& target = find_instance(scene, target_id);

  PickPlan plan;
  plan.target = target_id;
  const double target_ratio = occlusion_ratio(target);
  if (target_ratio <= occ_threshold) {
    plan.order.push_back(target_id);
    plan.rationale.push_back({target_id, target_ratio});
    return plan;
  }

  // Occluders that must go first: everything reachable from the target
  // along occluded-by edges (or just direct occluders).
  std::set<int> blockers;
  std::vector<int> frontier{target_id};
  while (!frontier.empty()) {
    const int node = frontier.back();
    frontier.pop_back();
    for (const OcclusionEdge* e : graph.edges_from(node)) {
      if (e->occluder == target_id) continue;
      if (blockers.insert(e->occluder).second && !direct_only) {
        frontier.push_back(e->occluder);
      }
    }
    if (direct_only) break;
  }

  // Emit topmost-first: repeatedly take a blocker not occluded by any
  // remaining blocker. If a cycle stalls the pass, evict the in-cycle
  // instance with the largest visible area.
  std::set<int> remaining = blockers;
  while (!remaining.empty()) {
    int chosen = -1;
    for (int id : remaining) {
      bool covered = false;
      for (const OcclusionEdge* e : graph.edges_from(id)) {
        if (remaining.count(e->occluder)) {
          covered = true;
          break;
        }
      }
      if (!covered) {
        chosen = id;
        break;
      }
    }
    if (chosen < 0) {
      std::int64_t best_area = -1;
      for (int id : remaining) {
        const std::int64_t area = find_instance(scene, id).visible.area();
        if (area > best_area) {
          best_area = area;
          chosen = id;
        }
      }
    }
    remaining.erase(chosen);
    plan.order.push_back(chosen);
    plan.rationale.push_back(
        {chosen, occlusion_ratio(find_instance(scene, chosen))});
  }

  plan.order.push_back(target_id);
  plan.rationale.push_back({target_id, target_ratio});
  return plan;
}

}  // namespace occlusynth
