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

// Command-line frontend: dataset synthesis, validation, evaluation,
// density export, pick planning and ground-truth visualization.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "occlusynth/dataset.hpp"
#include "occlusynth/error.hpp"
#include "occlusynth/metrics.hpp"
#include "occlusynth/planner.hpp"
#include "occlusynth/rng.hpp"

namespace fs = std::filesystem;
using occlusynth::BitMask;
using occlusynth::Image;
using occlusynth::SceneAnnotation;
using ordered_json = nlohmann::ordered_json;

namespace {

int default_jobs() {
  if (const char* env = std::getenv("OCCLUSYNTH_JOBS")) {
    const int jobs = std::atoi(env);
    if (jobs >= 1) return jobs;
  }
  return 1;
}

std::array<std::uint8_t, 3> color_for_instance(int instance_id) {
  const std::uint64_t h =
      occlusynth::splitmix64(static_cast<std::uint64_t>(instance_id) + 1);
  return {static_cast<std::uint8_t>(64 + ((h >> 0) & 0xFF) % 192),
          static_cast<std::uint8_t>(64 + ((h >> 16) & 0xFF) % 192),
          static_cast<std::uint8_t>(64 + ((h >> 32) & 0xFF) % 192)};
}

void tint_mask(Image& img, const BitMask& mask,
               const std::array<std::uint8_t, 3>& color) {
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (!mask.test(x, y)) continue;
      std::uint8_t* p = img.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        p[c] = static_cast<std::uint8_t>((p[c] + color[c]) / 2);
      }
    }
  }
}

void print_report(const occlusynth::MetricReport& report) {
  const auto pct = [](double v) { return 100.0 * v; };
  std::cout << std::left << std::setw(24) << "class" << std::right
            << std::setw(9) << "PQ" << std::setw(10) << "PQ_multi"
            << std::setw(9) << "SQ" << std::setw(10) << "SQ_multi"
            << std::setw(9) << "DQ" << std::setw(7) << "TP" << std::setw(7)
            << "FP" << std::setw(7) << "FN" << "\n";
  std::cout << std::fixed << std::setprecision(2);
  for (const auto& [cls, m] : report.per_class) {
    std::cout << std::left << std::setw(24) << cls << std::right
              << std::setw(9) << pct(m.pq) << std::setw(10) << pct(m.pq_multi)
              << std::setw(9) << pct(m.sq) << std::setw(10)
              << pct(m.sq_multi) << std::setw(9) << pct(m.dq) << std::setw(7)
              << m.tp << std::setw(7) << m.fp << std::setw(7) << m.fn << "\n";
  }
  std::cout << std::left << std::setw(24) << "mean (mPQ/mSQ/mDQ)"
            << std::right << std::setw(9) << pct(report.m_pq) << std::setw(10)
            << pct(report.m_pq_multi) << std::setw(9) << pct(report.m_sq)
            << std::setw(10) << pct(report.m_sq_multi) << std::setw(9)
            << pct(report.m_dq) << "\n";
  std::cout.unsetf(std::ios::fixed);
}

struct SynthArgs {
  std::string catalog;
  std::string out;
  int n_scenes = 0;
  std::string config_path;
  std::int64_t seed = -1;
  int jobs = default_jobs();
};

int run_synth(const SynthArgs& args) {
  occlusynth::SceneConfig cfg;
  if (!args.config_path.empty()) {
    cfg = occlusynth::load_scene_config(args.config_path);
  }
  if (args.seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(args.seed);
  const occlusynth::ObjectCatalog catalog =
      occlusynth::load_catalog(args.catalog, cfg.ingest);
  occlusynth::generate_dataset(catalog, cfg, args.n_scenes, args.out,
                               args.jobs);
  std::cout << "wrote " << args.n_scenes << " scenes to " << args.out << "\n";
  return 0;
}

int run_extract(const std::string& catalog_dir, const std::string& out_dir,
                const occlusynth::IngestConfig& ingest) {
  const occlusynth::ObjectCatalog catalog =
      occlusynth::load_catalog(catalog_dir, ingest);
  int written = 0;
  for (const auto& [cls, views] : catalog.entries) {
    const fs::path dir = fs::path(out_dir) / cls;
    std::error_code ec;
    fs::create_directories(dir, ec);
    for (const occlusynth::InstanceImage& view : views) {
      Image mask_img(view.foreground.width(), view.foreground.height());
      for (int y = 0; y < mask_img.height; ++y) {
        for (int x = 0; x < mask_img.width; ++x) {
          if (view.foreground.test(x, y)) {
            std::uint8_t* p = mask_img.pixel(x, y);
            p[0] = p[1] = p[2] = 255;
          }
        }
      }
      occlusynth::save_png(
          (dir / (std::to_string(view.view_id) + ".png")).string(), mask_img);
      ++written;
    }
  }
  occlusynth::save_class_names(
      (fs::path(out_dir) / "classes.json").string(), catalog.class_names());
  std::cout << "extracted " << written << " foreground masks for "
            << catalog.n_classes() << " classes\n";
  return 0;
}

int run_check(const std::string& dataset_dir, int jobs) {
  const std::vector<std::string> violations =
      occlusynth::check_dataset(dataset_dir, jobs);
  for (const std::string& v : violations) std::cout << v << "\n";
  if (violations.empty()) {
    std::cout << "ok: " << occlusynth::list_scene_ids(dataset_dir).size()
              << " scenes, no violations\n";
    return 0;
  }
  std::cout << violations.size() << " violation(s)\n";
  return 1;
}

int run_eval(const std::string& gt_dir, const std::string& pred_dir,
             const std::string& region, const std::string& out_path,
             int jobs) {
  occlusynth::EvalConfig cfg;
  cfg.jobs = jobs;
  cfg.region = region == "image" ? occlusynth::RegionPolicy::full_image
                                 : occlusynth::RegionPolicy::bbox_dilated;
  const auto gt = occlusynth::load_dataset_annotations(gt_dir, jobs);
  const auto pred = occlusynth::load_dataset_annotations(pred_dir, jobs);
  const occlusynth::MetricReport report = occlusynth::evaluate(pred, gt, cfg);
  print_report(report);
  if (!out_path.empty()) {
    occlusynth::save_metric_report(out_path, report, region);
  }
  return 0;
}

int run_density(const std::string& annotation_path,
                const std::string& out_png) {
  const SceneAnnotation scene = occlusynth::load_annotation(annotation_path);
  const occlusynth::DensityMap density = occlusynth::rasterize_density(
      scene.instances, scene.width, scene.height);

  const auto to_u16 = [](const std::vector<float>& plane) {
    std::vector<std::uint16_t> out(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) {
      out[i] = static_cast<std::uint16_t>(
          std::clamp(plane[i], 0.0f, 65535.0f));
    }
    return out;
  };
  occlusynth::save_png16(out_png, density.width, density.height,
                         to_u16(density.background), to_u16(density.visible),
                         to_u16(density.occluded));

  const auto plane_stats = [](const std::vector<float>& plane) {
    double sum = 0.0;
    float max = 0.0f;
    for (float v : plane) {
      sum += v;
      max = std::max(max, v);
    }
    return ordered_json{{"max", max}, {"sum", sum}};
  };
  ordered_json summary;
  summary["width"] = density.width;
  summary["height"] = density.height;
  summary["n_instances"] = scene.instances.size();
  summary["background"] = plane_stats(density.background);
  summary["visible"] = plane_stats(density.visible);
  summary["occluded"] = plane_stats(density.occluded);
  const std::string json_path =
      (fs::path(out_png).replace_extension(".json")).string();
  std::ofstream out(json_path);
  if (!out) throw occlusynth::IoError("cannot write " + json_path);
  out << summary.dump(2) << "\n";
  std::cout << "wrote " << out_png << " and " << json_path << "\n";
  return 0;
}

int run_plan(const std::string& annotation_path,
             const std::string& target_class, double occ_threshold,
             double edge_threshold, bool direct_only,
             const std::string& out_path) {
  const SceneAnnotation scene = occlusynth::load_annotation(annotation_path);

  // With several instances of the target class, pick the least occluded
  // one and report the others as alternatives.
  std::vector<const occlusynth::InstanceAnnotation*> candidates;
  for (const auto& inst : scene.instances) {
    if (inst.object_class == target_class) candidates.push_back(&inst);
  }
  if (candidates.empty()) {
    throw occlusynth::ValidationError("no instance of class '" +
                                      target_class + "' in " +
                                      annotation_path);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto* a, const auto* b) {
                     return occlusynth::occlusion_ratio(*a) <
                            occlusynth::occlusion_ratio(*b);
                   });

  const occlusynth::OcclusionGraph graph =
      occlusynth::build_graph(scene, edge_threshold);
  const occlusynth::PickPlan plan = occlusynth::plan_pick(
      graph, scene, candidates[0]->instance_id, occ_threshold, direct_only);

  std::map<int, std::string> names;
  for (const auto& inst : scene.instances) {
    names[inst.instance_id] = inst.object_class;
  }

  ordered_json j;
  j["target"] = plan.target;
  j["order"] = plan.order;
  j["statements"] = occlusynth::interpret_stacking(graph, names);
  ordered_json rationale = ordered_json::array();
  for (const auto& step : plan.rationale) {
    rationale.push_back({{"instance_id", step.instance_id},
                         {"occlusion_ratio", step.occlusion_ratio}});
  }
  j["rationale"] = std::move(rationale);
  ordered_json alternatives = ordered_json::array();
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    alternatives.push_back(candidates[i]->instance_id);
  }
  j["alternatives"] = std::move(alternatives);

  const std::string text = j.dump(2);
  std::cout << text << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw occlusynth::IoError("cannot write " + out_path);
    out << text << "\n";
  }
  return 0;
}

int run_viz(const std::string& dataset_dir, int scene_id,
            const std::string& out_prefix) {
  const std::string annotation_path =
      occlusynth::scene_annotation_path(dataset_dir, scene_id);
  if (!fs::exists(annotation_path)) {
    throw occlusynth::IoError("scene " + std::to_string(scene_id) +
                              " not found in " + dataset_dir);
  }
  const SceneAnnotation scene = occlusynth::load_annotation(annotation_path);
  const Image composite =
      occlusynth::load_png(occlusynth::scene_image_path(dataset_dir, scene_id))
          .rgb;

  Image visible_overlay = composite;
  Image occluded_overlay = composite;
  for (const auto& inst : scene.instances) {
    const auto color = color_for_instance(inst.instance_id);
    tint_mask(visible_overlay, inst.visible, color);
    tint_mask(occluded_overlay, inst.occluded, color);
  }
  occlusynth::save_png(out_prefix + "_composite.png", composite);
  occlusynth::save_png(out_prefix + "_visible.png", visible_overlay);
  occlusynth::save_png(out_prefix + "_occluded.png", occluded_overlay);
  std::cout << "wrote " << out_prefix << "_{composite,visible,occluded}.png\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occlusynth: cluttered-scene synthesis with visible/occluded "
               "ground truth, multi-mask PQ evaluation, and pick planning"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "Synthesize a dataset of stacked-object scenes");
  synth->add_option("--catalog", synth_args.catalog, "Instance image catalog")
      ->required();
  synth->add_option("--out", synth_args.out, "Output dataset directory")
      ->required();
  synth->add_option("--scenes", synth_args.n_scenes, "Number of scenes")
      ->required();
  synth->add_option("--config", synth_args.config_path,
                    "JSON scene configuration");
  synth->add_option("--seed", synth_args.seed,
                    "Master seed (overrides config)");
  synth->add_option("--jobs", synth_args.jobs, "Worker threads");

  std::string extract_catalog, extract_out;
  occlusynth::IngestConfig ingest;
  CLI::App* extract = app.add_subcommand(
      "extract", "Extract and export catalog foreground masks");
  extract->add_option("--catalog", extract_catalog, "Instance image catalog")
      ->required();
  extract->add_option("--out", extract_out, "Output directory")->required();
  extract->add_option("--fg-threshold", ingest.fg_threshold,
                      "Foreground luminance threshold (0-255)");
  extract->add_option("--min-area", ingest.min_area,
                      "Minimum component area in pixels");

  std::string check_dir;
  int check_jobs = default_jobs();
  CLI::App* check =
      app.add_subcommand("check", "Validate dataset annotation invariants");
  check->add_option("--dataset", check_dir, "Dataset directory")->required();
  check->add_option("--jobs", check_jobs, "Worker threads");

  std::string eval_gt, eval_pred, eval_out;
  std::string eval_region = "bbox";
  int eval_jobs = default_jobs();
  CLI::App* eval = app.add_subcommand(
      "eval", "Evaluate predictions with multi-mask panoptic quality");
  eval->add_option("--gt", eval_gt, "Ground-truth dataset directory")
      ->required();
  eval->add_option("--pred", eval_pred, "Prediction dataset directory")
      ->required();
  eval->add_option("--region", eval_region,
                   "Background-IoU support: bbox or image")
      ->check(CLI::IsMember({"bbox", "image"}));
  eval->add_option("--out", eval_out, "Report JSON path");
  eval->add_option("--jobs", eval_jobs, "Worker threads");

  std::string density_annotation, density_out;
  CLI::App* density = app.add_subcommand(
      "density", "Rasterize per-pixel instance counts per mask class");
  density->add_option("--annotation", density_annotation,
                      "Scene annotation JSON")
      ->required();
  density->add_option("--out", density_out, "Output 16-bit PNG path")
      ->required();

  std::string plan_annotation, plan_target, plan_out;
  double plan_occ_threshold = occlusynth::kDefaultOccludedThreshold;
  double plan_edge_threshold = occlusynth::kDefaultEdgeThreshold;
  bool plan_direct_only = false;
  CLI::App* plan = app.add_subcommand(
      "plan", "Plan an occlusion-respecting picking order");
  plan->add_option("--annotation", plan_annotation, "Scene annotation JSON")
      ->required();
  plan->add_option("--target-class", plan_target, "Class to pick")
      ->required();
  plan->add_option("--occ-threshold", plan_occ_threshold,
                   "Occlusion ratio above which the target needs clearing");
  plan->add_option("--edge-threshold", plan_edge_threshold,
                   "Inter-instance occlusion ratio for graph edges");
  plan->add_flag("--direct-only", plan_direct_only,
                 "Schedule only direct occluders");
  plan->add_option("--out", plan_out, "Plan JSON path");

  std::string viz_dataset, viz_out;
  int viz_scene = 0;
  CLI::App* viz = app.add_subcommand(
      "viz", "Export composite and mask-overlay images for a scene");
  viz->add_option("--dataset", viz_dataset, "Dataset directory")->required();
  viz->add_option("--scene", viz_scene, "Scene id")->required();
  viz->add_option("--out", viz_out, "Output path prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (synth->parsed()) return run_synth(synth_args);
    if (extract->parsed()) {
      return run_extract(extract_catalog, extract_out, ingest);
    }
    if (check->parsed()) return run_check(check_dir, check_jobs);
    if (eval->parsed()) {
      return run_eval(eval_gt, eval_pred, eval_region, eval_out, eval_jobs);
    }
    if (density->parsed()) return run_density(density_annotation, density_out);
    if (plan->parsed()) {
      return run_plan(plan_annotation, plan_target, plan_occ_threshold,
                      plan_edge_threshold, plan_direct_only, plan_out);
    }
    if (viz->parsed()) return run_viz(viz_dataset, viz_scene, viz_out);
  } catch (const occlusynth::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const occlusynth::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
