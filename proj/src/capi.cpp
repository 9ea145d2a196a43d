/* Copyright 2026 the fpvec authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "floorplan.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "image_io.hpp"
#include "loss.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "raster.hpp"
#include "svg_io.hpp"
#include "synth.hpp"
#include "vectorize.hpp"

struct fp_model {
  fpv::FloorplanModel m;
};
struct fp_maps {
  fpv::SegmentationMaps m;
};
struct fp_heatmaps {
  fpv::HeatmapStack s;
};
struct fp_stats {
  std::vector<fpv::FloorplanModel> models;
};

namespace {

thread_local std::string g_last_error;

using ordered_json = nlohmann::ordered_json;

fp_status status_of(fpv::Errc code) {
  switch (code) {
    case fpv::Errc::InvalidArgument:
    case fpv::Errc::NonPositiveSigma:
    case fpv::Errc::InvalidLabel:
    case fpv::Errc::PointOutOfFrame:
      return FP_ERROR_INVALID_ARGUMENT;
    case fpv::Errc::MalformedXml:
    case fpv::Errc::MissingViewport:
    case fpv::Errc::BadPointList:
      return FP_ERROR_PARSE;
    case fpv::Errc::InvalidModel:
      return FP_ERROR_VALIDATION;
    case fpv::Errc::ShapeMismatch:
      return FP_ERROR_SHAPE;
    case fpv::Errc::DegenerateWallGraph:
    case fpv::Errc::NoWallPixels:
      return FP_ERROR_DEGENERATE;
    case fpv::Errc::InfeasibleConfig:
      return FP_ERROR_INFEASIBLE;
    case fpv::Errc::IoError:
      return FP_ERROR_IO;
    case fpv::Errc::BadFormat:
      return FP_ERROR_FORMAT;
  }
  return FP_ERROR_UNKNOWN;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
fp_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FP_OK;
  } catch (const fpv::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FP_ERROR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown error";
    return FP_ERROR_UNKNOWN;
  }
}

fp_status require(bool cond, const char* what) {
  if (cond) return FP_OK;
  g_last_error = what;
  return FP_ERROR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* fp_version(void) { return "0.1.0"; }

const char* fp_last_error(void) { return g_last_error.c_str(); }

void fp_string_free(char* s) { std::free(s); }
void fp_model_free(fp_model* m) { delete m; }
void fp_maps_free(fp_maps* m) { delete m; }
void fp_heatmaps_free(fp_heatmaps* h) { delete h; }
void fp_stats_free(fp_stats* s) { delete s; }

fp_status fp_model_parse_svg(const char* text, size_t len, fp_model** out, char** warnings_json) {
  if (fp_status s = require(text && out, "text and out must be non-null")) return s;
  return guarded([&] {
    fpv::ParsedAnnotation parsed = fpv::parse_annotation(std::string_view(text, len));
    if (warnings_json) {
      ordered_json arr = ordered_json::array();
      for (const std::string& w : parsed.warnings) arr.push_back(w);
      *warnings_json = dup_string(arr.dump());
    }
    *out = new fp_model{std::move(parsed.model)};
  });
}

fp_status fp_model_parse_json(const char* text, size_t len, fp_model** out) {
  if (fp_status s = require(text && out, "text and out must be non-null")) return s;
  return guarded([&] { *out = new fp_model{fpv::parse_model_json(std::string_view(text, len))}; });
}

fp_status fp_model_to_svg(const fp_model* m, char** out) {
  if (fp_status s = require(m && out, "model and out must be non-null")) return s;
  return guarded([&] { *out = dup_string(fpv::write_annotation(m->m)); });
}

fp_status fp_model_to_json(const fp_model* m, char** out) {
  if (fp_status s = require(m && out, "model and out must be non-null")) return s;
  return guarded([&] { *out = dup_string(fpv::serialize_model_json(m->m)); });
}

fp_status fp_model_validate(const fp_model* m, char** report_json) {
  if (fp_status s = require(m && report_json, "model and report_json must be non-null")) return s;
  return guarded([&] {
    fpv::ValidationReport rep = fpv::validate_model(m->m);
    ordered_json arr = ordered_json::array();
    for (const fpv::Violation& v : rep.violations) {
      ordered_json e;
      e["code"] = v.code;
      e["element"] = v.element;
      e["message"] = v.message;
      arr.push_back(std::move(e));
    }
    *report_json = dup_string(arr.dump());
  });
}

fp_status fp_model_image_size(const fp_model* m, uint32_t* width, uint32_t* height) {
  if (fp_status s = require(m && width && height, "all arguments must be non-null")) return s;
  *width = static_cast<uint32_t>(m->m.width);
  *height = static_cast<uint32_t>(m->m.height);
  return FP_OK;
}

fp_status fp_model_counts(const fp_model* m, uint32_t* walls, uint32_t* rooms, uint32_t* icons,
                          uint32_t* openings) {
  if (fp_status s = require(m != nullptr, "model must be non-null")) return s;
  if (walls) *walls = static_cast<uint32_t>(m->m.walls.size());
  if (rooms) *rooms = static_cast<uint32_t>(m->m.rooms.size());
  if (icons) *icons = static_cast<uint32_t>(m->m.icons.size());
  if (openings) *openings = static_cast<uint32_t>(m->m.openings.size());
  return FP_OK;
}

fp_status fp_model_render(const fp_model* m, double sigma, fp_maps** maps, fp_heatmaps** heatmaps) {
  if (fp_status s = require(m && maps && heatmaps, "all arguments must be non-null")) return s;
  return guarded([&] {
    double sig = sigma > 0 ? sigma : 2.0;
    fpv::SegmentationMaps seg = fpv::render_segmentation(m->m);
    fpv::InterestPointSet points = fpv::extract_interest_points(m->m);
    fpv::HeatmapStack stack = fpv::render_heatmaps(points, m->m.width, m->m.height, sig);
    *maps = new fp_maps{std::move(seg)};
    *heatmaps = new fp_heatmaps{std::move(stack)};
  });
}

fp_status fp_maps_write_png(const fp_maps* m, const char* rooms_path, const char* icons_path) {
  if (fp_status s = require(m && rooms_path && icons_path, "all arguments must be non-null"))
    return s;
  return guarded([&] {
    fpv::write_png_gray(rooms_path, m->m.rooms);
    fpv::write_png_gray(icons_path, m->m.icons);
  });
}

fp_status fp_maps_read_png(const char* rooms_path, const char* icons_path, fp_maps** out) {
  if (fp_status s = require(rooms_path && icons_path && out, "all arguments must be non-null"))
    return s;
  return guarded([&] {
    fpv::SegmentationMaps maps;
    maps.rooms = fpv::read_png_gray(rooms_path);
    maps.icons = fpv::read_png_gray(icons_path);
    if (maps.rooms.width != maps.icons.width || maps.rooms.height != maps.icons.height) {
      fpv::raise(fpv::Errc::ShapeMismatch, "rooms and icons PNGs disagree in size");
    }
    *out = new fp_maps{std::move(maps)};
  });
}

fp_status fp_heatmaps_write_fpt1(const fp_heatmaps* h, const char* path) {
  if (fp_status s = require(h && path, "all arguments must be non-null")) return s;
  return guarded([&] { fpv::write_fpt1(path, h->s); });
}

fp_status fp_heatmaps_read_fpt1(const char* path, fp_heatmaps** out) {
  if (fp_status s = require(path && out, "all arguments must be non-null")) return s;
  return guarded([&] { *out = new fp_heatmaps{fpv::read_fpt1(path)}; });
}

fp_status fp_vectorize(const fp_maps* maps, const fp_heatmaps* heatmaps,
                       const fp_vectorize_config* config, fp_model** out,
                       char** diagnostics_jsonl) {
  if (fp_status s = require(maps && heatmaps && out, "maps, heatmaps and out must be non-null"))
    return s;
  return guarded([&] {
    fpv::VectorizeConfig cfg;
    if (config) {
      if (config->peak_threshold > 0) cfg.peak_threshold = config->peak_threshold;
      if (config->nms_radius > 0) cfg.nms_radius = config->nms_radius;
      if (config->prune_min_wall_fraction > 0) {
        cfg.prune_min_wall_fraction = config->prune_min_wall_fraction;
      }
    }
    fpv::VectorizeResult result = fpv::vectorize(maps->m, heatmaps->s, cfg);
    if (diagnostics_jsonl) {
      std::string lines;
      for (const fpv::Diagnostic& d : result.diagnostics) {
        ordered_json e;
        e["code"] = d.code;
        e["message"] = d.message;
        lines += e.dump();
        lines += "\n";
      }
      *diagnostics_jsonl = dup_string(lines);
    }
    *out = new fp_model{std::move(result.model)};
  });
}

fp_status fp_detection_metrics(const fp_model* pred, const fp_model* gt, double junction_tol,
                               double iou_threshold, char** report_json, char** report_csv) {
  if (fp_status s = require(pred && gt && report_json, "pred, gt, report_json must be non-null"))
    return s;
  return guarded([&] {
    fpv::DetectionConfig cfg;
    cfg.junction_tol = junction_tol;
    if (iou_threshold > 0) cfg.iou_threshold = iou_threshold;
    fpv::DetectionReport rep = fpv::detection_metrics(pred->m, gt->m, cfg);
    *report_json = dup_string(fpv::detection_report_json(rep));
    if (report_csv) *report_csv = dup_string(fpv::detection_report_csv(rep));
  });
}

fp_status fp_segmentation_metrics_png(const char* pred_path, const char* gt_path,
                                      uint32_t n_classes, char** report_json, char** report_csv) {
  if (fp_status s = require(pred_path && gt_path && report_json,
                            "pred_path, gt_path, report_json must be non-null"))
    return s;
  return guarded([&] {
    fpv::ClassRaster pred = fpv::read_png_gray(pred_path);
    fpv::ClassRaster gt = fpv::read_png_gray(gt_path);
    fpv::SegReport rep = fpv::segmentation_metrics(pred, gt, static_cast<int>(n_classes));
    bool icons = n_classes == fpv::kNumIconClasses;
    *report_json = dup_string(fpv::seg_report_json(rep, icons));
    if (report_csv) *report_csv = dup_string(fpv::seg_report_csv(rep, icons));
  });
}

fp_status fp_stats_new(fp_stats** out) {
  if (fp_status s = require(out != nullptr, "out must be non-null")) return s;
  *out = new fp_stats{};
  return FP_OK;
}

fp_status fp_stats_add(fp_stats* s, const fp_model* m) {
  if (fp_status st = require(s && m, "stats and model must be non-null")) return st;
  return guarded([&] { s->models.push_back(m->m); });
}

fp_status fp_stats_json(const fp_stats* s, char** out) {
  if (fp_status st = require(s && out, "stats and out must be non-null")) return st;
  return guarded([&] { *out = dup_string(fpv::stats_json(fpv::dataset_stats(s->models))); });
}

fp_status fp_stats_csv(const fp_stats* s, char** out) {
  if (fp_status st = require(s && out, "stats and out must be non-null")) return st;
  return guarded([&] { *out = dup_string(fpv::stats_csv(fpv::dataset_stats(s->models))); });
}

fp_status fp_loss_check(uint64_t seed, int instances, char** table_json) {
  if (fp_status s = require(table_json && instances > 0, "need table_json and instances > 0"))
    return s;
  return guarded([&] {
    std::vector<fpv::GradCheckRow> rows = fpv::run_gradient_checks(seed, instances);
    ordered_json arr = ordered_json::array();
    for (const fpv::GradCheckRow& r : rows) {
      ordered_json e;
      e["name"] = r.name;
      e["max_rel_err"] = r.max_rel_err;
      e["pass"] = r.pass;
      arr.push_back(std::move(e));
    }
    *table_json = dup_string(arr.dump());
  });
}

fp_status fp_loss_heatmap_fpt1(const char* pred_path, const char* target_path,
                               const double* sigmas, size_t sigma_count, char** breakdown_json) {
  if (fp_status s = require(pred_path && target_path && sigmas && breakdown_json,
                            "all arguments must be non-null"))
    return s;
  return guarded([&] {
    fpv::HeatmapStack pred = fpv::read_fpt1(pred_path);
    fpv::HeatmapStack target = fpv::read_fpt1(target_path);
    fpv::HeatmapLossPart part = fpv::heatmap_uncertainty_loss(
        pred, target, std::span<const double>(sigmas, sigma_count));
    ordered_json j;
    j["total"] = part.total;
    ordered_json per = ordered_json::array();
    for (double v : part.per_channel) per.push_back(v);
    j["per_channel"] = std::move(per);
    ordered_json gs = ordered_json::array();
    for (double v : part.grad_sigma) gs.push_back(v);
    j["grad_sigma"] = std::move(gs);
    *breakdown_json = dup_string(j.dump());
  });
}

void fp_synth_config_default(fp_synth_config* config) {
  if (!config) return;
  config->seed = 0;
  config->width = 256;
  config->height = 256;
  config->rows = 2;
  config->cols = 2;
  config->wall_width_min = 2;
  config->wall_width_max = 6;
  config->icons_min = 0;
  config->icons_max = 4;
  config->openings_min = 0;
  config->openings_max = 4;
  config->min_separation = 8.0;
}

fp_status fp_synth_generate(const fp_synth_config* config, fp_model** out) {
  if (fp_status s = require(config && out, "config and out must be non-null")) return s;
  return guarded([&] {
    fpv::SynthConfig cfg;
    cfg.seed = config->seed;
    cfg.width = static_cast<int>(config->width);
    cfg.height = static_cast<int>(config->height);
    cfg.rows = static_cast<int>(config->rows);
    cfg.cols = static_cast<int>(config->cols);
    cfg.wall_width_min = static_cast<int>(config->wall_width_min);
    cfg.wall_width_max = static_cast<int>(config->wall_width_max);
    cfg.icons_min = static_cast<int>(config->icons_min);
    cfg.icons_max = static_cast<int>(config->icons_max);
    cfg.openings_min = static_cast<int>(config->openings_min);
    cfg.openings_max = static_cast<int>(config->openings_max);
    cfg.min_separation = config->min_separation;
    *out = new fp_model{fpv::generate(cfg)};
  });
}

fp_status fp_corrupt(const fp_maps* maps, const fp_heatmaps* heatmaps, double gaussian_sigma,
                     double dropout_prob, double jitter_px, uint64_t seed, fp_maps** maps_out,
                     fp_heatmaps** heatmaps_out) {
  if (fp_status s =
          require(maps && heatmaps && maps_out && heatmaps_out, "all arguments must be non-null"))
    return s;
  return guarded([&] {
    fpv::CorruptParams params;
    params.gaussian_sigma = gaussian_sigma;
    params.dropout_prob = dropout_prob;
    params.jitter_px = jitter_px;
    fpv::CorruptResult res = fpv::corrupt(maps->m, heatmaps->s, params, seed);
    *maps_out = new fp_maps{std::move(res.maps)};
    *heatmaps_out = new fp_heatmaps{std::move(res.stack)};
  });
}

fp_status fp_classes_json(char** out) {
  if (fp_status s = require(out != nullptr, "out must be non-null")) return s;
  return guarded([&] {
    ordered_json j;
    ordered_json rooms = ordered_json::array();
    for (int c = 0; c < fpv::kNumRoomClasses; ++c) {
      ordered_json e;
      e["code"] = c;
      e["name"] = std::string(fpv::room_class_name(static_cast<fpv::RoomClass>(c)));
      rooms.push_back(std::move(e));
    }
    ordered_json icons = ordered_json::array();
    for (int c = 0; c < fpv::kNumIconClasses; ++c) {
      ordered_json e;
      e["code"] = c;
      e["name"] = std::string(fpv::icon_class_name(static_cast<fpv::IconClass>(c)));
      icons.push_back(std::move(e));
    }
    ordered_json channels = ordered_json::array();
    for (int c = 0; c < fpv::kNumChannels; ++c) {
      ordered_json e;
      e["code"] = c;
      e["name"] = fpv::kind_name(fpv::kind_from_channel(c));
      channels.push_back(std::move(e));
    }
    j["rooms"] = std::move(rooms);
    j["icons"] = std::move(icons);
    j["channels"] = std::move(channels);
    *out = dup_string(j.dump(2));
  });
}

}  // extern "C"
