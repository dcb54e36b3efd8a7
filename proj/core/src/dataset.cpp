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

#include "occlusynth/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "occlusynth/error.hpp"
#include "occlusynth/parallel.hpp"
#include "occlusynth/rng.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace occlusynth {

namespace {

std::string scene_stem(int scene_id) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", scene_id);
  return buf;
}

ordered_json rle_to_json(const RleMask& rle) {
  ordered_json j;
  j["size"] = {rle.height, rle.width};
  j["counts"] = rle.counts;
  return j;
}

RleMask rle_from_json(const ordered_json& j, const std::string& context) {
  if (!j.is_object() || !j.contains("size") || !j.contains("counts") ||
      !j["size"].is_array() || j["size"].size() != 2) {
    throw ValidationError(context + ": malformed RLE object");
  }
  RleMask rle;
  rle.height = j["size"][0].get<int>();
  rle.width = j["size"][1].get<int>();
  rle.counts = j["counts"].get<std::vector<std::uint32_t>>();
  return rle;
}

ordered_json annotation_to_json(const SceneAnnotation& scene) {
  ordered_json j;
  j["scene_id"] = scene.scene_id;
  j["width"] = scene.width;
  j["height"] = scene.height;
  j["seed"] = scene.seed;
  j["instances"] = ordered_json::array();
  for (const InstanceAnnotation& inst : scene.instances) {
    ordered_json ij;
    ij["instance_id"] = inst.instance_id;
    ij["class"] = inst.object_class;
    ij["class_id"] = inst.class_id;
    ij["bbox"] = {inst.bbox.x_min, inst.bbox.y_min, inst.bbox.x_max,
                  inst.bbox.y_max};
    ij["visible_rle"] = rle_to_json(rle_encode(inst.visible));
    ij["occluded_rle"] = rle_to_json(rle_encode(inst.occluded));
    if (inst.score) ij["score"] = *inst.score;
    j["instances"].push_back(std::move(ij));
  }
  return j;
}

ordered_json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace

std::string scene_image_path(const std::string& dataset_dir, int scene_id) {
  return (fs::path(dataset_dir) / "images" / (scene_stem(scene_id) + ".png"))
      .string();
}

std::string scene_annotation_path(const std::string& dataset_dir,
                                  int scene_id) {
  return (fs::path(dataset_dir) / "annotations" /
          (scene_stem(scene_id) + ".json"))
      .string();
}

std::vector<int> list_scene_ids(const std::string& dataset_dir) {
  const fs::path dir = fs::path(dataset_dir) / "annotations";
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("not a dataset directory (missing annotations/): " +
                  dataset_dir);
  }
  std::vector<int> ids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") {
      continue;
    }
    const std::string stem = entry.path().stem().string();
    int id = 0;
    const char* begin = stem.data();
    auto [ptr, parse_ec] = std::from_chars(begin, begin + stem.size(), id);
    if (parse_ec == std::errc{} && ptr == begin + stem.size()) {
      ids.push_back(id);
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

void save_annotation(const std::string& path, const SceneAnnotation& scene) {
  write_text_file(path, annotation_to_json(scene).dump());
}

SceneAnnotation load_annotation(const std::string& path) {
  const ordered_json j = read_json_file(path);
  try {
    SceneAnnotation scene;
    scene.scene_id = j.at("scene_id").get<int>();
    scene.width = j.at("width").get<int>();
    scene.height = j.at("height").get<int>();
    scene.seed = j.value("seed", std::uint64_t{0});
    if (scene.width <= 0 || scene.height <= 0) {
      throw ValidationError("non-positive scene dimensions");
    }
    for (const ordered_json& ij : j.at("instances")) {
      InstanceAnnotation inst;
      inst.instance_id = ij.at("instance_id").get<int>();
      inst.object_class = ij.at("class").get<std::string>();
      inst.class_id = ij.value("class_id", 0);
      const auto& box = ij.at("bbox");
      if (!box.is_array() || box.size() != 4) {
        throw ValidationError("bbox must be [x0,y0,x1,y1]");
      }
      inst.bbox = {box[0].get<int>(), box[1].get<int>(), box[2].get<int>(),
                   box[3].get<int>()};
      const RleMask vis = rle_from_json(ij.at("visible_rle"), "visible_rle");
      const RleMask occ = rle_from_json(ij.at("occluded_rle"), "occluded_rle");
      if (vis.width != scene.width || vis.height != scene.height ||
          occ.width != scene.width || occ.height != scene.height) {
        throw ValidationError("instance " +
                              std::to_string(inst.instance_id) +
                              ": RLE size differs from scene size");
      }
      inst.visible = rle_decode(vis);
      inst.occluded = rle_decode(occ);
      if (ij.contains("score")) inst.score = ij["score"].get<double>();
      scene.instances.push_back(std::move(inst));
    }
    return scene;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void save_class_names(const std::string& path,
                      const std::vector<std::string>& names) {
  write_text_file(path, ordered_json(names).dump(2) + "\n");
}

std::vector<std::string> load_class_names(const std::string& path) {
  const ordered_json j = read_json_file(path);
  if (!j.is_array()) throw ValidationError(path + ": expected a JSON array");
  return j.get<std::vector<std::string>>();
}

namespace {

Interval interval_from_json(const ordered_json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw ValidationError("config field '" + field + "' must be [lo, hi]");
  }
  Interval iv{j[0].get<double>(), j[1].get<double>()};
  if (iv.lo > iv.hi) {
    throw ValidationError("config field '" + field + "' has lo > hi");
  }
  return iv;
}

template <typename T>
T get_field(const ordered_json& j, const std::string& field, T fallback) {
  if (!j.contains(field)) return fallback;
  try {
    return j.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("config field '" + field + "' has the wrong type");
  }
}

}  // namespace

SceneConfig load_scene_config(const std::string& path) {
  const ordered_json j = read_json_file(path);
  if (!j.is_object()) throw ValidationError(path + ": expected a JSON object");

  static const std::set<std::string> known = {
      "width",          "height",     "n_instances", "background",
      "backgrounds",    "min_visible_px", "allow_duplicates",
      "seed",           "fg_threshold",   "min_area",  "augment"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw ValidationError(path + ": unknown config field '" + key + "'");
    }
  }

  SceneConfig cfg;
  cfg.width = get_field(j, "width", cfg.width);
  cfg.height = get_field(j, "height", cfg.height);
  if (cfg.width <= 0 || cfg.height <= 0) {
    throw ValidationError("config fields 'width'/'height' must be positive");
  }
  if (j.contains("n_instances")) {
    const Interval iv = interval_from_json(j["n_instances"], "n_instances");
    cfg.n_instances_min = static_cast<int>(iv.lo);
    cfg.n_instances_max = static_cast<int>(iv.hi);
    if (cfg.n_instances_min < 0) {
      throw ValidationError("config field 'n_instances' must be >= 0");
    }
  }
  if (j.contains("background")) {
    const auto& bg = j["background"];
    if (!bg.is_array() || bg.size() != 3) {
      throw ValidationError("config field 'background' must be [r,g,b]");
    }
    for (int c = 0; c < 3; ++c) {
      const int v = bg[static_cast<std::size_t>(c)].get<int>();
      if (v < 0 || v > 255) {
        throw ValidationError("config field 'background' values in [0,255]");
      }
      cfg.background_color[static_cast<std::size_t>(c)] =
          static_cast<std::uint8_t>(v);
    }
  }
  cfg.background_dir = get_field<std::string>(j, "backgrounds", "");
  cfg.min_visible_px = get_field(j, "min_visible_px", cfg.min_visible_px);
  cfg.allow_duplicates = get_field(j, "allow_duplicates", cfg.allow_duplicates);
  cfg.master_seed = get_field(j, "seed", cfg.master_seed);
  cfg.ingest.fg_threshold = get_field(j, "fg_threshold",
                                      cfg.ingest.fg_threshold);
  cfg.ingest.min_area = get_field(j, "min_area", cfg.ingest.min_area);

  if (j.contains("augment")) {
    const auto& a = j["augment"];
    if (!a.is_object()) {
      throw ValidationError("config field 'augment' must be an object");
    }
    static const std::set<std::string> known_aug = {
        "hsv_s_scale", "hsv_v_scale", "affine_scale", "translate",
        "rotate",      "shear",       "blend_sigma"};
    for (const auto& [key, value] : a.items()) {
      if (!known_aug.count(key)) {
        throw ValidationError(path + ": unknown augment field '" + key + "'");
      }
    }
    AugmentRanges& r = cfg.augment;
    if (a.contains("hsv_s_scale")) {
      r.hsv_s_scale = interval_from_json(a["hsv_s_scale"], "hsv_s_scale");
    }
    if (a.contains("hsv_v_scale")) {
      r.hsv_v_scale = interval_from_json(a["hsv_v_scale"], "hsv_v_scale");
    }
    if (a.contains("affine_scale")) {
      r.affine_scale = interval_from_json(a["affine_scale"], "affine_scale");
    }
    if (a.contains("translate")) {
      r.translate = interval_from_json(a["translate"], "translate");
    }
    if (a.contains("rotate")) {
      r.rotate_deg = interval_from_json(a["rotate"], "rotate");
    }
    if (a.contains("shear")) {
      r.shear_deg = interval_from_json(a["shear"], "shear");
    }
    if (a.contains("blend_sigma")) {
      r.blend_sigma = interval_from_json(a["blend_sigma"], "blend_sigma");
      if (r.blend_sigma.lo < 0.0) {
        throw ValidationError("config field 'blend_sigma' must be >= 0");
      }
    }
  }
  return cfg;
}

namespace {

ordered_json interval_json(const Interval& iv) {
  return ordered_json{iv.lo, iv.hi};
}

ordered_json config_to_json(const SceneConfig& cfg) {
  ordered_json j;
  j["width"] = cfg.width;
  j["height"] = cfg.height;
  j["n_instances"] = {cfg.n_instances_min, cfg.n_instances_max};
  j["background"] = {cfg.background_color[0], cfg.background_color[1],
                     cfg.background_color[2]};
  if (!cfg.background_dir.empty()) j["backgrounds"] = cfg.background_dir;
  j["min_visible_px"] = cfg.min_visible_px;
  j["allow_duplicates"] = cfg.allow_duplicates;
  j["seed"] = cfg.master_seed;
  j["fg_threshold"] = cfg.ingest.fg_threshold;
  j["min_area"] = cfg.ingest.min_area;
  j["augment"] = {{"hsv_s_scale", interval_json(cfg.augment.hsv_s_scale)},
                  {"hsv_v_scale", interval_json(cfg.augment.hsv_v_scale)},
                  {"affine_scale", interval_json(cfg.augment.affine_scale)},
                  {"translate", interval_json(cfg.augment.translate)},
                  {"rotate", interval_json(cfg.augment.rotate_deg)},
                  {"shear", interval_json(cfg.augment.shear_deg)},
                  {"blend_sigma", interval_json(cfg.augment.blend_sigma)}};
  return j;
}

}  // namespace

void generate_dataset(const ObjectCatalog& catalog, const SceneConfig& config,
                      int n_scenes, const std::string& out_dir, int jobs) {
  if (n_scenes < 0) throw ValidationError("n_scenes must be >= 0");
  const fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root / "images", ec);
  fs::create_directories(root / "annotations", ec);
  if (!fs::is_directory(root / "images") ||
      !fs::is_directory(root / "annotations")) {
    throw IoError("cannot create dataset directories under " + out_dir);
  }

  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_scenes));
  for (int i = 0; i < n_scenes; ++i) {
    seeds[static_cast<std::size_t>(i)] =
        scene_seed(config.master_seed, static_cast<std::uint64_t>(i));
  }

  parallel_for(n_scenes, jobs, [&](std::int64_t i) {
    const int id = static_cast<int>(i);
    const SceneResult result = synthesize_scene(
        catalog, config, seeds[static_cast<std::size_t>(i)], id);
    save_png(scene_image_path(out_dir, id), result.image);
    save_annotation(scene_annotation_path(out_dir, id), result.annotation);
  });

  save_class_names((root / "class_names.json").string(),
                   catalog.class_names());

  ordered_json manifest;
  manifest["config"] = config_to_json(config);
  manifest["n_scenes"] = n_scenes;
  manifest["scene_seeds"] = seeds;
  write_text_file((root / "manifest.json").string(), manifest.dump(2) + "\n");
}

std::vector<SceneAnnotation> load_dataset_annotations(
    const std::string& dataset_dir, int jobs) {
  const std::vector<int> ids = list_scene_ids(dataset_dir);
  std::vector<SceneAnnotation> scenes(ids.size());
  parallel_for(static_cast<std::int64_t>(ids.size()), jobs,
               [&](std::int64_t i) {
                 scenes[static_cast<std::size_t>(i)] = load_annotation(
                     scene_annotation_path(
                         dataset_dir, ids[static_cast<std::size_t>(i)]));
               });
  return scenes;
}

std::vector<std::string> validate_scene(const SceneAnnotation& scene) {
  std::vector<std::string> violations;
  const auto report = [&](int instance_id, const std::string& what) {
    violations.push_back("scene " + std::to_string(scene.scene_id) +
                         " instance " + std::to_string(instance_id) + ": " +
                         what);
  };

  const std::size_t n = scene.instances.size();
  for (std::size_t i = 0; i < n; ++i) {
    const InstanceAnnotation& inst = scene.instances[i];
    if (inst.visible.width() != scene.width ||
        inst.visible.height() != scene.height ||
        inst.occluded.width() != scene.width ||
        inst.occluded.height() != scene.height) {
      report(inst.instance_id, "mask size differs from scene size");
      continue;
    }
    const std::int64_t overlap =
        intersection_area(inst.visible, inst.occluded);
    if (overlap != 0) {
      report(inst.instance_id, "visible/occluded overlap (" +
                                   std::to_string(overlap) + " px)");
    }
    if (tight_bbox(inst.full_region()) != inst.bbox) {
      report(inst.instance_id, "bbox does not bound visible+occluded");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const InstanceAnnotation& other = scene.instances[j];
      if (other.visible.width() != scene.width ||
          other.visible.height() != scene.height) {
        continue;
      }
      const std::int64_t shared =
          intersection_area(inst.visible, other.visible);
      if (shared != 0) {
        report(inst.instance_id,
               "visible mask overlaps instance " +
                   std::to_string(other.instance_id) + " (" +
                   std::to_string(shared) + " px)");
      }
    }
    // Every occluded pixel must be visible in some later instance.
    BitMask unexplained = inst.occluded;
    for (std::size_t j = i + 1; j < n && unexplained.any(); ++j) {
      if (scene.instances[j].visible.width() != scene.width) continue;
      unexplained = mask_diff(unexplained, scene.instances[j].visible);
    }
    if (unexplained.any()) {
      report(inst.instance_id,
             "occluded pixels not covered by any later instance (" +
                 std::to_string(unexplained.area()) + " px)");
    }
  }
  return violations;
}

std::vector<std::string> check_dataset(const std::string& dataset_dir,
                                       int jobs) {
  const std::vector<int> ids = list_scene_ids(dataset_dir);
  std::vector<std::vector<std::string>> per_scene(ids.size());
  parallel_for(static_cast<std::int64_t>(ids.size()), jobs,
               [&](std::int64_t i) {
                 const int id = ids[static_cast<std::size_t>(i)];
                 try {
                   const SceneAnnotation scene =
                       load_annotation(scene_annotation_path(dataset_dir, id));
                   if (scene.scene_id != id) {
                     per_scene[static_cast<std::size_t>(i)].push_back(
                         "scene " + std::to_string(id) +
                         ": scene_id field disagrees with file name");
                   }
                   auto v = validate_scene(scene);
                   auto& out = per_scene[static_cast<std::size_t>(i)];
                   out.insert(out.end(), v.begin(), v.end());
                 } catch (const std::exception& e) {
                   per_scene[static_cast<std::size_t>(i)].push_back(
                       "scene " + std::to_string(id) + ": " + e.what());
                 }
               });
  std::vector<std::string> violations;
  for (const auto& batch : per_scene) {
    violations.insert(violations.end(), batch.begin(), batch.end());
  }
  return violations;
}

void save_metric_report(const std::string& path, const MetricReport& report,
                        const std::string& region_mode) {
  ordered_json j;
  j["region"] = region_mode;
  j["classes"] = ordered_json::object();
  for (const auto& [cls, m] : report.per_class) {
    j["classes"][cls] = {{"dq", m.dq},       {"sq", m.sq},
                         {"sq_multi", m.sq_multi}, {"pq", m.pq},
                         {"pq_multi", m.pq_multi}, {"tp", m.tp},
                         {"fp", m.fp},       {"fn", m.fn}};
  }
  j["means"] = {{"m_dq", report.m_dq},
                {"m_sq", report.m_sq},
                {"m_sq_multi", report.m_sq_multi},
                {"m_pq", report.m_pq},
                {"m_pq_multi", report.m_pq_multi}};
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace occlusynth
