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
 * Batch front end over the C API (floorplan.h). Human-readable progress on
 * stderr, machine output on files only; exit 0 on success, 1 when any input
 * failed, 2 on usage errors.
 */
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "floorplan.h"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct ManifestEntry {
  std::string input;
  std::vector<std::string> outputs;
  std::string status;  // "ok" or "error: ..."
  int64_t ms = 0;
};

class Manifest {
 public:
  // Entries are indexed by input position so parallel completion order
  // never changes the written manifest.
  Manifest(std::string command, ordered_json config, size_t inputs)
      : command_(std::move(command)), config_(std::move(config)), entries_(inputs) {}

  void set(size_t index, ManifestEntry entry) {
    std::lock_guard<std::mutex> lock(mu_);
    entries_[index] = std::move(entry);
  }

  bool all_ok() const {
    for (const ManifestEntry& e : entries_) {
      if (e.status != "ok") return false;
    }
    return true;
  }

  void write(const fs::path& path) const {
    ordered_json j;
    j["tool"] = "fpvec";
    j["version"] = fp_version();
    j["command"] = command_;
    j["config"] = config_;
    ordered_json entries = ordered_json::array();
    for (const ManifestEntry& e : entries_) {
      ordered_json o;
      o["input"] = e.input;
      o["outputs"] = e.outputs;
      o["status"] = e.status;
      o["ms"] = e.ms;
      entries.push_back(std::move(o));
    }
    j["entries"] = std::move(entries);
    std::ofstream out(path);
    out << j.dump(2) << "\n";
  }

 private:
  std::string command_;
  ordered_json config_;
  std::vector<ManifestEntry> entries_;
  mutable std::mutex mu_;
};

std::string take(char* s) {
  std::string out = s ? s : "";
  fp_string_free(s);
  return out;
}

std::string last_error() {
  const char* e = fp_last_error();
  return e && *e ? e : "unknown error";
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Loads a model from .svg or fpv-1 .json by extension.
fp_model* load_model(const fs::path& path) {
  std::string text = read_text(path);
  fp_model* model = nullptr;
  fp_status st;
  if (path.extension() == ".svg") {
    st = fp_model_parse_svg(text.data(), text.size(), &model, nullptr);
  } else {
    st = fp_model_parse_json(text.data(), text.size(), &model);
  }
  if (st != FP_OK) throw std::runtime_error(path.string() + ": " + last_error());
  return model;
}

// Runs fn(i) for i in [0,n) on up to jobs threads.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  int workers = std::min(jobs, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

int finish(const Manifest& manifest, const fs::path& manifest_path) {
  manifest.write(manifest_path);
  return manifest.all_ok() ? 0 : 1;
}

int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"floorplan raster<->vector toolkit"};
  app.set_version_flag("--version", fp_version());
  app.set_config("--config", "", "key=value file merged under the flags (flags win)");
  app.require_subcommand(1);
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs <= 0) jobs = 1;
  app.add_option("--jobs", jobs, "parallel input files")->capture_default_str();

  // ---- classes ----
  auto* cmd_classes = app.add_subcommand("classes", "write the class-code reference tables");
  std::string classes_out = "classes.json";
  cmd_classes->add_option("--out", classes_out, "output JSON path")->capture_default_str();

  // ---- parse ----
  auto* cmd_parse = app.add_subcommand("parse", "parse annotation SVGs into fpv-1 JSON");
  std::vector<std::string> parse_inputs;
  std::string parse_out_dir = ".";
  std::string parse_format = "json";
  cmd_parse->add_option("--in", parse_inputs, "input SVG files")->required();
  cmd_parse->add_option("--out-dir", parse_out_dir, "output directory")->capture_default_str();
  cmd_parse->add_option("--format", parse_format, "json or svg")
      ->check(CLI::IsMember({"json", "svg"}))
      ->capture_default_str();

  // ---- render ----
  auto* cmd_render = app.add_subcommand("render", "rasterize models into PNG maps + FPT1 heatmaps");
  std::vector<std::string> render_inputs;
  std::string render_out_dir = ".";
  double render_sigma = 2.0;
  cmd_render->add_option("--in", render_inputs, "input models (.json or .svg)")->required();
  cmd_render->add_option("--out-dir", render_out_dir, "output directory")->capture_default_str();
  cmd_render->add_option("--sigma", render_sigma, "heatmap Gaussian sigma (px)")
      ->capture_default_str();

  // ---- vectorize ----
  auto* cmd_vec = app.add_subcommand("vectorize", "run the post-processor on maps + heatmaps");
  std::string vec_rooms, vec_icons, vec_heat, vec_out;
  std::string vec_svg, vec_diag;
  fp_vectorize_config vec_cfg{0.4, 5.0, 0.5};
  cmd_vec->add_option("--rooms", vec_rooms, "rooms segmentation PNG")->required();
  cmd_vec->add_option("--icons", vec_icons, "icons segmentation PNG")->required();
  cmd_vec->add_option("--heatmaps", vec_heat, "heatmap stack FPT1")->required();
  cmd_vec->add_option("--out", vec_out, "output model JSON")->required();
  cmd_vec->add_option("--svg", vec_svg, "also write the model as SVG");
  cmd_vec->add_option("--diagnostics", vec_diag, "write line-oriented JSON diagnostics");
  cmd_vec->add_option("--threshold", vec_cfg.peak_threshold, "peak threshold")
      ->capture_default_str();
  cmd_vec->add_option("--nms", vec_cfg.nms_radius, "NMS radius (px)")->capture_default_str();
  cmd_vec->add_option("--prune", vec_cfg.prune_min_wall_fraction, "min wall fraction")
      ->capture_default_str();

  // ---- eval-detection ----
  auto* cmd_det = app.add_subcommand("eval-detection", "acc/recall per category");
  std::string det_pred, det_gt, det_out, det_csv;
  double det_tol = 0.0, det_iou = 0.5;
  cmd_det->add_option("--pred", det_pred, "predicted model (.json/.svg)")->required();
  cmd_det->add_option("--gt", det_gt, "ground-truth model (.json/.svg)")->required();
  cmd_det->add_option("--out", det_out, "report JSON path")->required();
  cmd_det->add_option("--csv", det_csv, "report CSV path");
  cmd_det->add_option("--junction-tol", det_tol, "junction match distance (0 = auto)")
      ->capture_default_str();
  cmd_det->add_option("--iou", det_iou, "region IoU threshold")->capture_default_str();

  // ---- eval-segmentation ----
  auto* cmd_seg = app.add_subcommand("eval-segmentation", "pixel metrics between class PNGs");
  std::string seg_pred, seg_gt, seg_out, seg_csv;
  uint32_t seg_classes = 12;
  cmd_seg->add_option("--pred", seg_pred, "predicted class PNG")->required();
  cmd_seg->add_option("--gt", seg_gt, "ground-truth class PNG")->required();
  cmd_seg->add_option("--classes", seg_classes, "class count")->capture_default_str();
  cmd_seg->add_option("--out", seg_out, "report JSON path")->required();
  cmd_seg->add_option("--csv", seg_csv, "report CSV path");

  // ---- stats ----
  auto* cmd_stats = app.add_subcommand("stats", "dataset statistics over a model collection");
  std::vector<std::string> stats_inputs;
  std::string stats_out, stats_csv_path;
  cmd_stats->add_option("--in", stats_inputs, "input models (.json/.svg)")->required();
  cmd_stats->add_option("--out", stats_out, "stats JSON path")->required();
  cmd_stats->add_option("--csv", stats_csv_path, "stats CSV path");

  // ---- synth ----
  auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic corpus");
  fp_synth_config synth_cfg;
  fp_synth_config_default(&synth_cfg);
  uint64_t synth_seed = 0;
  int synth_count = 1;
  std::string synth_out_dir;
  uint32_t synth_size = 256;
  double synth_sigma = 2.0;
  cmd_synth->add_option("--seed", synth_seed, "base seed")->capture_default_str();
  cmd_synth->add_option("--count", synth_count, "number of samples")->capture_default_str();
  cmd_synth->add_option("--out", synth_out_dir, "output directory")->required();
  cmd_synth->add_option("--size", synth_size, "image width and height")->capture_default_str();
  cmd_synth->add_option("--rows", synth_cfg.rows, "room grid rows")->capture_default_str();
  cmd_synth->add_option("--cols", synth_cfg.cols, "room grid cols")->capture_default_str();
  cmd_synth->add_option("--icons-min", synth_cfg.icons_min, "min icons")->capture_default_str();
  cmd_synth->add_option("--icons-max", synth_cfg.icons_max, "max icons")->capture_default_str();
  cmd_synth->add_option("--openings-min", synth_cfg.openings_min, "min openings")
      ->capture_default_str();
  cmd_synth->add_option("--openings-max", synth_cfg.openings_max, "max openings")
      ->capture_default_str();
  cmd_synth->add_option("--separation", synth_cfg.min_separation, "min feature separation (px)")
      ->capture_default_str();
  cmd_synth->add_option("--sigma", synth_sigma, "heatmap sigma for rendered samples")
      ->capture_default_str();

  // ---- loss-check ----
  auto* cmd_loss = app.add_subcommand("loss-check", "verify loss gradients / evaluate tensors");
  uint64_t loss_seed = 1;
  int loss_count = 100;
  std::string loss_out, loss_pred, loss_target;
  double loss_sigma = 1.0;
  cmd_loss->add_option("--seed", loss_seed, "rng seed")->capture_default_str();
  cmd_loss->add_option("--count", loss_count, "randomized instances")->capture_default_str();
  cmd_loss->add_option("--out", loss_out, "write the pass/fail table as JSON");
  cmd_loss->add_option("--pred", loss_pred, "FPT1 prediction tensor (pairs with --target)");
  cmd_loss->add_option("--target", loss_target, "FPT1 target tensor");
  cmd_loss->add_option("--sigma", loss_sigma, "uniform sigma for --pred/--target evaluation")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*cmd_classes) {
      char* json = nullptr;
      if (fp_classes_json(&json) != FP_OK) {
        std::cerr << "classes: " << last_error() << "\n";
        return 1;
      }
      write_text(classes_out, take(json));
      std::cerr << "wrote " << classes_out << "\n";
      return 0;
    }

    if (*cmd_parse) {
      fs::create_directories(parse_out_dir);
      ordered_json cfg{{"format", parse_format}, {"out_dir", parse_out_dir}, {"jobs", jobs}};
      Manifest manifest("parse", cfg, parse_inputs.size());
      parallel_for(static_cast<int>(parse_inputs.size()), jobs, [&](int i) {
        auto start = std::chrono::steady_clock::now();
        ManifestEntry entry;
        entry.input = parse_inputs[i];
        try {
          std::string text = read_text(parse_inputs[i]);
          fp_model* model = nullptr;
          char* warnings = nullptr;
          fp_status st = fp_model_parse_svg(text.data(), text.size(), &model, &warnings);
          if (st != FP_OK) throw std::runtime_error(last_error());
          std::string warn_text = take(warnings);
          if (warn_text != "[]") {
            std::cerr << parse_inputs[i] << ": warnings " << warn_text << "\n";
          }
          fs::path out = fs::path(parse_out_dir) /
                         (fs::path(parse_inputs[i]).stem().string() + "." + parse_format);
          char* text_out = nullptr;
          st = parse_format == "json" ? fp_model_to_json(model, &text_out)
                                      : fp_model_to_svg(model, &text_out);
          fp_model_free(model);
          if (st != FP_OK) throw std::runtime_error(last_error());
          write_text(out, take(text_out));
          entry.outputs.push_back(out.string());
          entry.status = "ok";
        } catch (const std::exception& e) {
          entry.status = std::string("error: ") + e.what();
        }
        entry.ms = elapsed_ms(start);
        manifest.set(i, entry);
      });
      return finish(manifest, fs::path(parse_out_dir) / "run_manifest.json");
    }

    if (*cmd_render) {
      fs::create_directories(render_out_dir);
      ordered_json cfg{{"sigma", render_sigma}, {"out_dir", render_out_dir}, {"jobs", jobs}};
      Manifest manifest("render", cfg, render_inputs.size());
      parallel_for(static_cast<int>(render_inputs.size()), jobs, [&](int i) {
        auto start = std::chrono::steady_clock::now();
        ManifestEntry entry;
        entry.input = render_inputs[i];
        try {
          fp_model* model = load_model(render_inputs[i]);
          fp_maps* maps = nullptr;
          fp_heatmaps* heat = nullptr;
          fp_status st = fp_model_render(model, render_sigma, &maps, &heat);
          fp_model_free(model);
          if (st != FP_OK) throw std::runtime_error(last_error());
          std::string stem = fs::path(render_inputs[i]).stem().string();
          fs::path rooms = fs::path(render_out_dir) / (stem + "_rooms.png");
          fs::path icons = fs::path(render_out_dir) / (stem + "_icons.png");
          fs::path fpt = fs::path(render_out_dir) / (stem + ".fpt1");
          st = fp_maps_write_png(maps, rooms.string().c_str(), icons.string().c_str());
          if (st == FP_OK) st = fp_heatmaps_write_fpt1(heat, fpt.string().c_str());
          fp_maps_free(maps);
          fp_heatmaps_free(heat);
          if (st != FP_OK) throw std::runtime_error(last_error());
          entry.outputs = {rooms.string(), icons.string(), fpt.string()};
          entry.status = "ok";
        } catch (const std::exception& e) {
          entry.status = std::string("error: ") + e.what();
        }
        entry.ms = elapsed_ms(start);
        manifest.set(i, entry);
      });
      return finish(manifest, fs::path(render_out_dir) / "run_manifest.json");
    }

    if (*cmd_vec) {
      ordered_json cfg{{"threshold", vec_cfg.peak_threshold},
                       {"nms", vec_cfg.nms_radius},
                       {"prune", vec_cfg.prune_min_wall_fraction}};
      Manifest manifest("vectorize", cfg, 1);
      auto start = std::chrono::steady_clock::now();
      ManifestEntry entry;
      entry.input = vec_rooms + "," + vec_icons + "," + vec_heat;
      try {
        fp_maps* maps = nullptr;
        fp_heatmaps* heat = nullptr;
        if (fp_maps_read_png(vec_rooms.c_str(), vec_icons.c_str(), &maps) != FP_OK) {
          throw std::runtime_error(last_error());
        }
        if (fp_heatmaps_read_fpt1(vec_heat.c_str(), &heat) != FP_OK) {
          fp_maps_free(maps);
          throw std::runtime_error(last_error());
        }
        fp_model* model = nullptr;
        char* diagnostics = nullptr;
        fp_status st = fp_vectorize(maps, heat, &vec_cfg, &model, &diagnostics);
        fp_maps_free(maps);
        fp_heatmaps_free(heat);
        if (st != FP_OK) throw std::runtime_error(last_error());
        std::string diag_text = take(diagnostics);
        char* json = nullptr;
        st = fp_model_to_json(model, &json);
        if (st != FP_OK) {
          fp_model_free(model);
          throw std::runtime_error(last_error());
        }
        write_text(vec_out, take(json));
        entry.outputs.push_back(vec_out);
        if (!vec_svg.empty()) {
          char* svg = nullptr;
          st = fp_model_to_svg(model, &svg);
          if (st != FP_OK) {
            fp_model_free(model);
            throw std::runtime_error(last_error());
          }
          write_text(vec_svg, take(svg));
          entry.outputs.push_back(vec_svg);
        }
        fp_model_free(model);
        if (!vec_diag.empty()) {
          write_text(vec_diag, diag_text);
          entry.outputs.push_back(vec_diag);
        }
        entry.status = "ok";
      } catch (const std::exception& e) {
        entry.status = std::string("error: ") + e.what();
      }
      entry.ms = elapsed_ms(start);
      manifest.set(0, entry);
      return finish(manifest, fs::path(vec_out).string() + ".manifest.json");
    }

    if (*cmd_det) {
      ordered_json cfg{{"junction_tol", det_tol}, {"iou", det_iou}};
      Manifest manifest("eval-detection", cfg, 1);
      auto start = std::chrono::steady_clock::now();
      ManifestEntry entry;
      entry.input = det_pred + "," + det_gt;
      try {
        fp_model* pred = load_model(det_pred);
        fp_model* gt = nullptr;
        try {
          gt = load_model(det_gt);
        } catch (...) {
          fp_model_free(pred);
          throw;
        }
        char* json = nullptr;
        char* csv = nullptr;
        fp_status st = fp_detection_metrics(pred, gt, det_tol, det_iou, &json,
                                            det_csv.empty() ? nullptr : &csv);
        fp_model_free(pred);
        fp_model_free(gt);
        if (st != FP_OK) throw std::runtime_error(last_error());
        write_text(det_out, take(json));
        entry.outputs.push_back(det_out);
        if (!det_csv.empty()) {
          write_text(det_csv, take(csv));
          entry.outputs.push_back(det_csv);
        }
        entry.status = "ok";
      } catch (const std::exception& e) {
        entry.status = std::string("error: ") + e.what();
      }
      entry.ms = elapsed_ms(start);
      manifest.set(0, entry);
      return finish(manifest, det_out + ".manifest.json");
    }

    if (*cmd_seg) {
      ordered_json cfg{{"classes", seg_classes}};
      Manifest manifest("eval-segmentation", cfg, 1);
      auto start = std::chrono::steady_clock::now();
      ManifestEntry entry;
      entry.input = seg_pred + "," + seg_gt;
      try {
        char* json = nullptr;
        char* csv = nullptr;
        fp_status st = fp_segmentation_metrics_png(seg_pred.c_str(), seg_gt.c_str(), seg_classes,
                                                   &json, seg_csv.empty() ? nullptr : &csv);
        if (st != FP_OK) throw std::runtime_error(last_error());
        write_text(seg_out, take(json));
        entry.outputs.push_back(seg_out);
        if (!seg_csv.empty()) {
          write_text(seg_csv, take(csv));
          entry.outputs.push_back(seg_csv);
        }
        entry.status = "ok";
      } catch (const std::exception& e) {
        entry.status = std::string("error: ") + e.what();
      }
      entry.ms = elapsed_ms(start);
      manifest.set(0, entry);
      return finish(manifest, seg_out + ".manifest.json");
    }

    if (*cmd_stats) {
      ordered_json cfg{{"inputs", stats_inputs.size()}};
      Manifest manifest("stats", cfg, stats_inputs.size());
      std::vector<fp_model*> models(stats_inputs.size(), nullptr);
      std::vector<std::string> errors(stats_inputs.size());
      std::vector<int64_t> times(stats_inputs.size(), 0);
      parallel_for(static_cast<int>(stats_inputs.size()), jobs, [&](int i) {
        auto start = std::chrono::steady_clock::now();
        try {
          models[i] = load_model(stats_inputs[i]);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
        times[i] = elapsed_ms(start);
      });
      fp_stats* stats = nullptr;
      fp_stats_new(&stats);
      for (size_t i = 0; i < models.size(); ++i) {
        ManifestEntry entry;
        entry.input = stats_inputs[i];
        entry.ms = times[i];
        if (models[i]) {
          fp_stats_add(stats, models[i]);
          fp_model_free(models[i]);
          entry.status = "ok";
        } else {
          entry.status = "error: " + errors[i];
        }
        manifest.set(i, entry);
      }
      char* json = nullptr;
      fp_status st = fp_stats_json(stats, &json);
      if (st == FP_OK) write_text(stats_out, take(json));
      if (st == FP_OK && !stats_csv_path.empty()) {
        char* csv = nullptr;
        st = fp_stats_csv(stats, &csv);
        if (st == FP_OK) write_text(stats_csv_path, take(csv));
      }
      fp_stats_free(stats);
      if (st != FP_OK) {
        std::cerr << "stats: " << last_error() << "\n";
        return 1;
      }
      return finish(manifest, stats_out + ".manifest.json");
    }

    if (*cmd_synth) {
      fs::create_directories(synth_out_dir);
      synth_cfg.width = synth_size;
      synth_cfg.height = synth_size;
      ordered_json cfg{{"seed", synth_seed},       {"count", synth_count},
                       {"size", synth_size},       {"rows", synth_cfg.rows},
                       {"cols", synth_cfg.cols},   {"icons_max", synth_cfg.icons_max},
                       {"sigma", synth_sigma},     {"separation", synth_cfg.min_separation}};
      Manifest manifest("synth", cfg, static_cast<size_t>(synth_count));
      parallel_for(synth_count, jobs, [&](int i) {
        auto start = std::chrono::steady_clock::now();
        ManifestEntry entry;
        entry.input = "seed " + std::to_string(synth_seed + static_cast<uint64_t>(i));
        try {
          fp_synth_config sample_cfg = synth_cfg;
          sample_cfg.seed = synth_seed + static_cast<uint64_t>(i);
          fp_model* model = nullptr;
          if (fp_synth_generate(&sample_cfg, &model) != FP_OK) {
            throw std::runtime_error(last_error());
          }
          char buf[16];
          std::snprintf(buf, sizeof(buf), "%04d", i);
          std::string stem = buf;
          fs::path dir(synth_out_dir);
          fp_maps* maps = nullptr;
          fp_heatmaps* heat = nullptr;
          fp_status st = fp_model_render(model, synth_sigma, &maps, &heat);
          if (st != FP_OK) {
            fp_model_free(model);
            throw std::runtime_error(last_error());
          }
          char* svg = nullptr;
          char* json = nullptr;
          st = fp_model_to_svg(model, &svg);
          if (st == FP_OK) st = fp_model_to_json(model, &json);
          fp_model_free(model);
          if (st != FP_OK) {
            fp_maps_free(maps);
            fp_heatmaps_free(heat);
            throw std::runtime_error(last_error());
          }
          write_text(dir / (stem + ".svg"), take(svg));
          write_text(dir / (stem + ".json"), take(json));
          fs::path rooms = dir / (stem + "_rooms.png");
          fs::path icons = dir / (stem + "_icons.png");
          fs::path fpt = dir / (stem + ".fpt1");
          st = fp_maps_write_png(maps, rooms.string().c_str(), icons.string().c_str());
          if (st == FP_OK) st = fp_heatmaps_write_fpt1(heat, fpt.string().c_str());
          fp_maps_free(maps);
          fp_heatmaps_free(heat);
          if (st != FP_OK) throw std::runtime_error(last_error());
          entry.outputs = {(dir / (stem + ".svg")).string(), (dir / (stem + ".json")).string(),
                           rooms.string(), icons.string(), fpt.string()};
          entry.status = "ok";
        } catch (const std::exception& e) {
          entry.status = std::string("error: ") + e.what();
        }
        entry.ms = elapsed_ms(start);
        manifest.set(static_cast<size_t>(i), entry);
      });
      return finish(manifest, fs::path(synth_out_dir) / "run_manifest.json");
    }

    if (*cmd_loss) {
      if (!loss_pred.empty() || !loss_target.empty()) {
        if (loss_pred.empty() || loss_target.empty()) {
          std::cerr << "loss-check: --pred and --target must be given together\n";
          return 2;
        }
        std::vector<double> sigmas(21, loss_sigma);
        char* json = nullptr;
        if (fp_loss_heatmap_fpt1(loss_pred.c_str(), loss_target.c_str(), sigmas.data(),
                                 sigmas.size(), &json) != FP_OK) {
          std::cerr << "loss-check: " << last_error() << "\n";
          return 1;
        }
        std::string text = take(json);
        if (!loss_out.empty()) {
          write_text(loss_out, text);
        } else {
          std::cout << text << "\n";
        }
        return 0;
      }
      char* json = nullptr;
      if (fp_loss_check(loss_seed, loss_count, &json) != FP_OK) {
        std::cerr << "loss-check: " << last_error() << "\n";
        return 1;
      }
      std::string table = take(json);
      ordered_json rows = ordered_json::parse(table);
      bool all_pass = true;
      std::cerr << "gradient check (" << loss_count << " instances, seed " << loss_seed << ")\n";
      for (const auto& row : rows) {
        bool pass = row["pass"].get<bool>();
        all_pass = all_pass && pass;
        std::cerr << (pass ? "  [pass] " : "  [FAIL] ") << row["name"].get<std::string>()
                  << "  max_rel_err=" << row["max_rel_err"].get<double>() << "\n";
      }
      if (!loss_out.empty()) write_text(loss_out, table);
      return all_pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "fpvec: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
