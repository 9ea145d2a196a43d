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
 *
 * C interface of the floorplan vectorization library. All functions return
 * fp_status; fp_last_error() carries the detail for the last failure on the
 * calling thread. Output strings are heap-allocated and must be released
 * with fp_string_free; handles with their matching *_free.
 */
#ifndef FLOORPLAN_H
#define FLOORPLAN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FP_API __declspec(dllexport)
#else
#define FP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fp_status {
  FP_OK = 0,
  FP_ERROR_INVALID_ARGUMENT = 1,
  FP_ERROR_PARSE = 2,      /* malformed SVG/XML or point lists */
  FP_ERROR_VALIDATION = 3, /* model breaks an invariant */
  FP_ERROR_SHAPE = 4,
  FP_ERROR_DEGENERATE = 5, /* wall graph outside the junction taxonomy */
  FP_ERROR_INFEASIBLE = 6, /* generator cannot satisfy the config */
  FP_ERROR_IO = 7,
  FP_ERROR_FORMAT = 8, /* PNG / FPT1 / fpv-1 schema violations */
  FP_ERROR_UNKNOWN = 9
} fp_status;

typedef struct fp_model fp_model;       /* vector floorplan */
typedef struct fp_maps fp_maps;         /* rooms + icons class rasters */
typedef struct fp_heatmaps fp_heatmaps; /* C x H x W float tensor */
typedef struct fp_stats fp_stats;       /* dataset statistics accumulator */

FP_API const char* fp_version(void);
/* Detail for the last failing call on this thread; empty when none. */
FP_API const char* fp_last_error(void);

FP_API void fp_string_free(char* s);
FP_API void fp_model_free(fp_model* m);
FP_API void fp_maps_free(fp_maps* m);
FP_API void fp_heatmaps_free(fp_heatmaps* h);
FP_API void fp_stats_free(fp_stats* s);

/* -------- annotations (SVG) and the fpv-1 JSON form -------- */

/* warnings_json (nullable out): JSON array of strings, one per
 * unrecognized SVG element. */
FP_API fp_status fp_model_parse_svg(const char* text, size_t len, fp_model** out,
                                    char** warnings_json);
FP_API fp_status fp_model_parse_json(const char* text, size_t len, fp_model** out);
FP_API fp_status fp_model_to_svg(const fp_model* m, char** out);
FP_API fp_status fp_model_to_json(const fp_model* m, char** out);
/* Always FP_OK on a readable handle; violations are data in report_json. */
FP_API fp_status fp_model_validate(const fp_model* m, char** report_json);
FP_API fp_status fp_model_image_size(const fp_model* m, uint32_t* width, uint32_t* height);
FP_API fp_status fp_model_counts(const fp_model* m, uint32_t* walls, uint32_t* rooms,
                                 uint32_t* icons, uint32_t* openings);

/* -------- rasterizer -------- */

/* sigma <= 0 selects the default of 2.0 px. */
FP_API fp_status fp_model_render(const fp_model* m, double sigma, fp_maps** maps,
                                 fp_heatmaps** heatmaps);
FP_API fp_status fp_maps_write_png(const fp_maps* m, const char* rooms_path,
                                   const char* icons_path);
FP_API fp_status fp_maps_read_png(const char* rooms_path, const char* icons_path, fp_maps** out);
FP_API fp_status fp_heatmaps_write_fpt1(const fp_heatmaps* h, const char* path);
FP_API fp_status fp_heatmaps_read_fpt1(const char* path, fp_heatmaps** out);

/* -------- vectorizer -------- */

typedef struct fp_vectorize_config {
  double peak_threshold;          /* 0 selects 0.4 */
  double nms_radius;              /* 0 selects 5 px */
  double prune_min_wall_fraction; /* 0 selects 0.5 */
} fp_vectorize_config;

/* diagnostics_jsonl (nullable out): one JSON object per line with fields
 * "code" and "message". */
FP_API fp_status fp_vectorize(const fp_maps* maps, const fp_heatmaps* heatmaps,
                              const fp_vectorize_config* config, fp_model** out,
                              char** diagnostics_jsonl);

/* -------- metrics -------- */

/* junction_tol 0 selects max(4 px, 0.5% of image diagonal); iou_threshold 0
 * selects 0.5. report_csv is nullable. */
FP_API fp_status fp_detection_metrics(const fp_model* pred, const fp_model* gt,
                                      double junction_tol, double iou_threshold,
                                      char** report_json, char** report_csv);
FP_API fp_status fp_segmentation_metrics_png(const char* pred_path, const char* gt_path,
                                             uint32_t n_classes, char** report_json,
                                             char** report_csv);
FP_API fp_status fp_stats_new(fp_stats** out);
FP_API fp_status fp_stats_add(fp_stats* s, const fp_model* m);
FP_API fp_status fp_stats_json(const fp_stats* s, char** out);
FP_API fp_status fp_stats_csv(const fp_stats* s, char** out);

/* -------- losses -------- */

/* Runs the randomized gradient verification suite; table_json rows carry
 * name, max_rel_err and pass. Returns FP_OK even when rows fail. */
FP_API fp_status fp_loss_check(uint64_t seed, int instances, char** table_json);
/* Heatmap uncertainty loss of two FPT1 tensors (21 channels each) with one
 * sigma per channel (sigma_count must be 21). */
FP_API fp_status fp_loss_heatmap_fpt1(const char* pred_path, const char* target_path,
                                      const double* sigmas, size_t sigma_count,
                                      char** breakdown_json);

/* -------- synthetic floorplans -------- */

typedef struct fp_synth_config {
  uint64_t seed;
  uint32_t width, height;
  uint32_t rows, cols;
  uint32_t wall_width_min, wall_width_max;
  uint32_t icons_min, icons_max;
  uint32_t openings_min, openings_max;
  double min_separation;
} fp_synth_config;

FP_API void fp_synth_config_default(fp_synth_config* config);
FP_API fp_status fp_synth_generate(const fp_synth_config* config, fp_model** out);
/* Deterministic noise probe; zero parameters copy the inputs bit-exactly. */
FP_API fp_status fp_corrupt(const fp_maps* maps, const fp_heatmaps* heatmaps,
                            double gaussian_sigma, double dropout_prob, double jitter_px,
                            uint64_t seed, fp_maps** maps_out, fp_heatmaps** heatmaps_out);

/* -------- class-code reference tables -------- */

/* {"rooms":[{code,name}...], "icons":[...], "channels":[...]} */
FP_API fp_status fp_classes_json(char** out);

#ifdef __cplusplus
}
#endif

#endif /* FLOORPLAN_H */
