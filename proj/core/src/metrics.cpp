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

#include "occlusynth/metrics.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "occlusynth/error.hpp"
#include "occlusynth/parallel.hpp"

namespace occlusynth {

namespace {

bool any_scored(std::span<const InstanceAnnotation> pred) {
  return std::any_of(pred.begin(), pred.end(),
                     [](const InstanceAnnotation& p) {
                       return p.score.has_value();
                     });
}

MatchResult finish(std::span<const InstanceAnnotation> pred,
                   std::span<const InstanceAnnotation> gt,
                   MatchResult result, const std::vector<bool>& pred_used,
                   const std::vector<bool>& gt_used) {
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!pred_used[i]) result.fp.push_back(static_cast<int>(i));
  }
  for (std::size_t j = 0; j < gt.size(); ++j) {
    if (!gt_used[j]) result.fn.push_back(static_cast<int>(j));
  }
  return result;
}

}  // namespace

MatchResult match_instances(std::span<const InstanceAnnotation> pred,
                            std::span<const InstanceAnnotation> gt) {
  std::vector<std::vector<double>> ious(pred.size(),
                                        std::vector<double>(gt.size(), 0.0));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < gt.size(); ++j) {
      ious[i][j] = iou(pred[i].visible, gt[j].visible);
    }
  }

  MatchResult result;
  std::vector<bool> pred_used(pred.size(), false);
  std::vector<bool> gt_used(gt.size(), false);

  if (any_scored(pred)) {
    // Detector-style: consume predictions by descending score, each
    // taking its best still-free ground truth above the threshold.
    std::vector<int> order(pred.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      order[i] = static_cast<int>(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      const double sa = pred[static_cast<std::size_t>(a)].score.value_or(0.0);
      const double sb = pred[static_cast<std::size_t>(b)].score.value_or(0.0);
      if (sa != sb) return sa > sb;
      return pred[static_cast<std::size_t>(a)].instance_id <
             pred[static_cast<std::size_t>(b)].instance_id;
    });
    for (int i : order) {
      int best_gt = -1;
      double best_iou = kMatchIouThreshold;
      for (std::size_t j = 0; j < gt.size(); ++j) {
        if (gt_used[j]) continue;
        const double v = ious[static_cast<std::size_t>(i)][j];
        if (v > best_iou) {
          best_iou = v;
          best_gt = static_cast<int>(j);
        }
      }
      if (best_gt >= 0) {
        pred_used[static_cast<std::size_t>(i)] = true;
        gt_used[static_cast<std::size_t>(best_gt)] = true;
        result.tp.push_back({i, best_gt, best_iou});
      }
    }
    return finish(pred, gt, std::move(result), pred_used, gt_used);
  }

  struct Candidate {
    double iou;
    int pred_index;
    int gt_index;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < gt.size(); ++j) {
      if (ious[i][j] > kMatchIouThreshold) {
        candidates.push_back(
            {ious[i][j], static_cast<int>(i), static_cast<int>(j)});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.iou != b.iou) return a.iou > b.iou;
              if (a.pred_index != b.pred_index) {
                return a.pred_index < b.pred_index;
              }
              return a.gt_index < b.gt_index;
            });
  for (const Candidate& c : candidates) {
    if (pred_used[static_cast<std::size_t>(c.pred_index)] ||
        gt_used[static_cast<std::size_t>(c.gt_index)]) {
      continue;
    }
    pred_used[static_cast<std::size_t>(c.pred_index)] = true;
    gt_used[static_cast<std::size_t>(c.gt_index)] = true;
    result.tp.push_back({c.pred_index, c.gt_index, c.iou});
  }
  return finish(pred, gt, std::move(result), pred_used, gt_used);
}

double detection_quality(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  if (tp == 0 && fp == 0 && fn == 0) return 1.0;
  return static_cast<double>(tp) /
         (static_cast<double>(tp) + 0.5 * static_cast<double>(fp) +
          0.5 * static_cast<double>(fn));
}

double detection_quality(const MatchResult& m) {
  return detection_quality(static_cast<std::int64_t>(m.tp.size()),
                           static_cast<std::int64_t>(m.fp.size()),
                           static_cast<std::int64_t>(m.fn.size()));
}

BitMask make_eval_region(const InstanceAnnotation& pred,
                         const InstanceAnnotation& gt, RegionPolicy policy,
                         int dilation_px) {
  const int w = gt.visible.width();
  const int h = gt.visible.height();
  if (policy == RegionPolicy::full_image) return BitMask::filled(w, h);

  const BitMask joint = mask_or(pred.full_region(), gt.full_region());
  const BoundingBox box = tight_bbox(joint).dilated(dilation_px, w, h);
  BitMask region(w, h);
  for (int y = box.y_min; y < box.y_max; ++y) {
    for (int x = box.x_min; x < box.x_max; ++x) {
      region.set(x, y);
    }
  }
  return region;
}

double instance_miou(const InstanceAnnotation& pred,
                     const InstanceAnnotation& gt, const BitMask& region) {
  if (!region.any()) {
    throw ValidationError("instance_miou: empty evaluation region");
  }
  const BitMask pred_vis = mask_and(pred.visible, region);
  const BitMask gt_vis = mask_and(gt.visible, region);
  const BitMask pred_occ = mask_and(pred.occluded, region);
  const BitMask gt_occ = mask_and(gt.occluded, region);
  const BitMask pred_bg = mask_diff(region, pred.full_region());
  const BitMask gt_bg = mask_diff(region, gt.full_region());
  return (iou(pred_bg, gt_bg) + iou(pred_vis, gt_vis) +
          iou(pred_occ, gt_occ)) /
         kNumMaskClasses;
}

double segmentation_quality(const MatchResult& m,
                            std::span<const InstanceAnnotation> pred,
                            std::span<const InstanceAnnotation> gt,
                            SqMode mode, RegionPolicy policy,
                            int dilation_px) {
  if (m.tp.empty()) return 0.0;
  double sum = 0.0;
  for (const MatchedPair& pair : m.tp) {
    if (mode == SqMode::single) {
      sum += pair.visible_iou;
    } else {
      const InstanceAnnotation& p =
          pred[static_cast<std::size_t>(pair.pred_index)];
      const InstanceAnnotation& g =
          gt[static_cast<std::size_t>(pair.gt_index)];
      sum += instance_miou(p, g, make_eval_region(p, g, policy, dilation_px));
    }
  }
  return sum / static_cast<double>(m.tp.size());
}

namespace {

struct ClassTally {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double iou_sum = 0.0;
  double miou_sum = 0.0;
  bool in_gt = false;
};

using SceneTally = std::map<std::string, ClassTally>;

SceneTally tally_scene(const SceneAnnotation& pred_scene,
                       const SceneAnnotation& gt_scene,
                       const EvalConfig& cfg) {
  if (pred_scene.width != gt_scene.width ||
      pred_scene.height != gt_scene.height) {
    throw ValidationError("evaluate: scene " +
                          std::to_string(gt_scene.scene_id) +
                          " has mismatched dimensions");
  }
  std::set<std::string> classes;
  for (const InstanceAnnotation& inst : pred_scene.instances) {
    classes.insert(inst.object_class);
  }
  for (const InstanceAnnotation& inst : gt_scene.instances) {
    classes.insert(inst.object_class);
  }

  SceneTally tally;
  for (const std::string& cls : classes) {
    std::vector<InstanceAnnotation> pred, gt;
    for (const InstanceAnnotation& inst : pred_scene.instances) {
      if (inst.object_class == cls) pred.push_back(inst);
    }
    for (const InstanceAnnotation& inst : gt_scene.instances) {
      if (inst.object_class == cls) gt.push_back(inst);
    }
    const MatchResult m = match_instances(pred, gt);
    ClassTally& t = tally[cls];
    t.tp += static_cast<std::int64_t>(m.tp.size());
    t.fp += static_cast<std::int64_t>(m.fp.size());
    t.fn += static_cast<std::int64_t>(m.fn.size());
    t.in_gt = !gt.empty();
    for (const MatchedPair& pair : m.tp) {
      const InstanceAnnotation& p =
          pred[static_cast<std::size_t>(pair.pred_index)];
      const InstanceAnnotation& g =
          gt[static_cast<std::size_t>(pair.gt_index)];
      t.iou_sum += pair.visible_iou;
      t.miou_sum += instance_miou(
          p, g, make_eval_region(p, g, cfg.region, cfg.region_dilation_px));
    }
  }
  return tally;
}

}  // namespace

MetricReport evaluate(const std::vector<SceneAnnotation>& pred,
                      const std::vector<SceneAnnotation>& gt,
                      const EvalConfig& cfg) {
  std::map<int, const SceneAnnotation*> pred_by_id;
  for (const SceneAnnotation& scene : pred) {
    pred_by_id.emplace(scene.scene_id, &scene);
  }
  std::vector<int> missing;
  for (const SceneAnnotation& scene : gt) {
    if (!pred_by_id.count(scene.scene_id)) missing.push_back(scene.scene_id);
  }
  std::set<int> gt_ids;
  for (const SceneAnnotation& scene : gt) gt_ids.insert(scene.scene_id);
  std::vector<int> extra;
  for (const SceneAnnotation& scene : pred) {
    if (!gt_ids.count(scene.scene_id)) extra.push_back(scene.scene_id);
  }
  if (!missing.empty() || !extra.empty()) {
    std::ostringstream msg;
    msg << "evaluate: scene id mismatch;";
    if (!missing.empty()) {
      msg << " missing predictions for:";
      for (int id : missing) msg << ' ' << id;
      msg << ';';
    }
    if (!extra.empty()) {
      msg << " predictions without ground truth:";
      for (int id : extra) msg << ' ' << id;
    }
    throw ValidationError(msg.str());
  }

  // Per-scene tallies computed in parallel, reduced in scene order so the
  // report does not depend on the jobs count.
  std::vector<SceneTally> tallies(gt.size());
  parallel_for(static_cast<std::int64_t>(gt.size()), cfg.jobs,
               [&](std::int64_t i) {
                 const SceneAnnotation& g = gt[static_cast<std::size_t>(i)];
                 tallies[static_cast<std::size_t>(i)] =
                     tally_scene(*pred_by_id.at(g.scene_id), g, cfg);
               });

  std::map<std::string, ClassTally> pooled;
  for (const SceneTally& tally : tallies) {
    for (const auto& [cls, t] : tally) {
      ClassTally& dst = pooled[cls];
      dst.tp += t.tp;
      dst.fp += t.fp;
      dst.fn += t.fn;
      dst.iou_sum += t.iou_sum;
      dst.miou_sum += t.miou_sum;
      dst.in_gt = dst.in_gt || t.in_gt;
    }
  }

  MetricReport report;
  double sum_dq = 0.0, sum_sq = 0.0, sum_sq_multi = 0.0;
  double sum_pq = 0.0, sum_pq_multi = 0.0;
  for (const auto& [cls, t] : pooled) {
    ClassMetrics m;
    m.tp = t.tp;
    m.fp = t.fp;
    m.fn = t.fn;
    m.dq = detection_quality(t.tp, t.fp, t.fn);
    m.sq = t.tp > 0 ? t.iou_sum / static_cast<double>(t.tp) : 0.0;
    m.sq_multi = t.tp > 0 ? t.miou_sum / static_cast<double>(t.tp) : 0.0;
    m.pq = m.dq * m.sq;
    m.pq_multi = m.dq * m.sq_multi;
    report.per_class.emplace(cls, m);
    sum_dq += m.dq;
    sum_sq += m.sq;
    sum_sq_multi += m.sq_multi;
    sum_pq += m.pq;
    sum_pq_multi += m.pq_multi;
  }
  const double n = static_cast<double>(report.per_class.size());
  if (n > 0) {
    report.m_dq = sum_dq / n;
    report.m_sq = sum_sq / n;
    report.m_sq_multi = sum_sq_multi / n;
    report.m_pq = sum_pq / n;
    report.m_pq_multi = sum_pq_multi / n;
  }
  return report;
}

}  // namespace occlusynth
