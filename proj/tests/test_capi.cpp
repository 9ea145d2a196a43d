#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "floorplan.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  fp_string_free(s);
  return out;
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "fpv_capi_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("version and error strings are always available") {
  CHECK(fp_version() != nullptr);
  CHECK(fp_last_error() != nullptr);
}

TEST_CASE("synth -> render -> file round trip -> vectorize over the C surface") {
  fp_synth_config cfg;
  fp_synth_config_default(&cfg);
  cfg.seed = 11;
  cfg.icons_min = cfg.icons_max = 2;
  cfg.openings_min = cfg.openings_max = 1;

  fp_model* model = nullptr;
  REQUIRE(fp_synth_generate(&cfg, &model) == FP_OK);

  uint32_t w = 0, h = 0;
  REQUIRE(fp_model_image_size(model, &w, &h) == FP_OK);
  CHECK(w == 256);
  CHECK(h == 256);

  char* report = nullptr;
  REQUIRE(fp_model_validate(model, &report) == FP_OK);
  CHECK(take(report) == "[]");

  fp_maps* maps = nullptr;
  fp_heatmaps* heat = nullptr;
  REQUIRE(fp_model_render(model, 2.0, &maps, &heat) == FP_OK);

  auto dir = temp_dir();
  std::string rooms_png = (dir / "rooms.png").string();
  std::string icons_png = (dir / "icons.png").string();
  std::string fpt = (dir / "stack.fpt1").string();
  REQUIRE(fp_maps_write_png(maps, rooms_png.c_str(), icons_png.c_str()) == FP_OK);
  REQUIRE(fp_heatmaps_write_fpt1(heat, fpt.c_str()) == FP_OK);

  fp_maps* maps2 = nullptr;
  fp_heatmaps* heat2 = nullptr;
  REQUIRE(fp_maps_read_png(rooms_png.c_str(), icons_png.c_str(), &maps2) == FP_OK);
  REQUIRE(fp_heatmaps_read_fpt1(fpt.c_str(), &heat2) == FP_OK);

  fp_model* recovered = nullptr;
  char* diagnostics = nullptr;
  REQUIRE(fp_vectorize(maps2, heat2, nullptr, &recovered, &diagnostics) == FP_OK);
  take(diagnostics);

  uint32_t walls = 0, rooms = 0, icons = 0, openings = 0;
  uint32_t gw = 0, gr = 0, gi = 0, go = 0;
  REQUIRE(fp_model_counts(recovered, &walls, &rooms, &icons, &openings) == FP_OK);
  REQUIRE(fp_model_counts(model, &gw, &gr, &gi, &go) == FP_OK);
  CHECK(walls == gw);
  CHECK(rooms == gr);
  CHECK(icons == gi);
  CHECK(openings == go);

  char* det_json = nullptr;
  REQUIRE(fp_detection_metrics(recovered, model, 2.0, 0.5, &det_json, nullptr) == FP_OK);
  std::string det = take(det_json);
  CHECK(det.find("\"acc\":1.0") != std::string::npos);

  fp_model_free(model);
  fp_model_free(recovered);
  fp_maps_free(maps);
  fp_maps_free(maps2);
  fp_heatmaps_free(heat);
  fp_heatmaps_free(heat2);
}

TEST_CASE("SVG and JSON round trip through the C surface") {
  fp_synth_config cfg;
  fp_synth_config_default(&cfg);
  cfg.seed = 3;
  fp_model* model = nullptr;
  REQUIRE(fp_synth_generate(&cfg, &model) == FP_OK);

  char* svg = nullptr;
  REQUIRE(fp_model_to_svg(model, &svg) == FP_OK);
  std::string svg_text = take(svg);
  fp_model* parsed = nullptr;
  char* warnings = nullptr;
  REQUIRE(fp_model_parse_svg(svg_text.data(), svg_text.size(), &parsed, &warnings) == FP_OK);
  CHECK(take(warnings) == "[]");

  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(fp_model_to_json(model, &a) == FP_OK);
  REQUIRE(fp_model_to_json(parsed, &b) == FP_OK);
  std::string ja = take(a), jb = take(b);
  CHECK(ja == jb);

  fp_model* from_json = nullptr;
  REQUIRE(fp_model_parse_json(ja.data(), ja.size(), &from_json) == FP_OK);
  char* c = nullptr;
  REQUIRE(fp_model_to_json(from_json, &c) == FP_OK);
  CHECK(take(c) == ja);

  fp_model_free(model);
  fp_model_free(parsed);
  fp_model_free(from_json);
}

TEST_CASE("parse failures set a status and a thread-local message") {
  fp_model* model = nullptr;
  const char* junk = "this is not svg";
  CHECK(fp_model_parse_svg(junk, std::strlen(junk), &model, nullptr) == FP_ERROR_PARSE);
  CHECK(std::strlen(fp_last_error()) > 0);
  CHECK(model == nullptr);

  const char* no_viewport = "<svg></svg>";
  CHECK(fp_model_parse_svg(no_viewport, std::strlen(no_viewport), &model, nullptr) ==
        FP_ERROR_PARSE);

  const char* bad_json = "{\"schema\":\"nope\"}";
  CHECK(fp_model_parse_json(bad_json, std::strlen(bad_json), &model) == FP_ERROR_FORMAT);

  CHECK(fp_model_parse_svg(nullptr, 0, &model, nullptr) == FP_ERROR_INVALID_ARGUMENT);
  CHECK(fp_heatmaps_read_fpt1("/no/such/file.fpt1", nullptr) == FP_ERROR_INVALID_ARGUMENT);
  fp_heatmaps* heat = nullptr;
  CHECK(fp_heatmaps_read_fpt1("/no/such/file.fpt1", &heat) == FP_ERROR_IO);
}

TEST_CASE("infeasible synth configs map to FP_ERROR_INFEASIBLE") {
  fp_synth_config cfg;
  fp_synth_config_default(&cfg);
  cfg.width = 64;
  cfg.height = 64;
  cfg.rows = 8;
  cfg.cols = 8;
  fp_model* model = nullptr;
  CHECK(fp_synth_generate(&cfg, &model) == FP_ERROR_INFEASIBLE);
}

TEST_CASE("corrupt with zero noise copies inputs through the C surface") {
  fp_synth_config cfg;
  fp_synth_config_default(&cfg);
  cfg.seed = 21;
  fp_model* model = nullptr;
  REQUIRE(fp_synth_generate(&cfg, &model) == FP_OK);
  fp_maps* maps = nullptr;
  fp_heatmaps* heat = nullptr;
  REQUIRE(fp_model_render(model, 2.0, &maps, &heat) == FP_OK);
  fp_maps* maps2 = nullptr;
  fp_heatmaps* heat2 = nullptr;
  REQUIRE(fp_corrupt(maps, heat, 0, 0, 0, 5, &maps2, &heat2) == FP_OK);

  auto dir = temp_dir();
  std::string a = (dir / "a.fpt1").string();
  std::string b = (dir / "b.fpt1").string();
  REQUIRE(fp_heatmaps_write_fpt1(heat, a.c_str()) == FP_OK);
  REQUIRE(fp_heatmaps_write_fpt1(heat2, b.c_str()) == FP_OK);
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::string ba((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  std::string bb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  CHECK(ba == bb);

  fp_model_free(model);
  fp_maps_free(maps);
  fp_maps_free(maps2);
  fp_heatmaps_free(heat);
  fp_heatmaps_free(heat2);
}

TEST_CASE("loss-check and classes are exposed") {
  char* table = nullptr;
  REQUIRE(fp_loss_check(5, 10, &table) == FP_OK);
  std::string t = take(table);
  CHECK(t.find("\"pass\":true") != std::string::npos);
  CHECK(t.find("false") == std::string::npos);

  char* classes = nullptr;
  REQUIRE(fp_classes_json(&classes) == FP_OK);
  std::string c = take(classes);
  CHECK(c.find("\"Kitchen\"") != std::string::npos);
  CHECK(c.find("junction-X") != std::string::npos);
  CHECK(c.find("opening-end-down") != std::string::npos);
}

TEST_CASE("segmentation metrics from PNG files") {
  auto dir = temp_dir();
  fp_synth_config cfg;
  fp_synth_config_default(&cfg);
  cfg.seed = 2;
  fp_model* model = nullptr;
  REQUIRE(fp_synth_generate(&cfg, &model) == FP_OK);
  fp_maps* maps = nullptr;
  fp_heatmaps* heat = nullptr;
  REQUIRE(fp_model_render(model, 2.0, &maps, &heat) == FP_OK);
  std::string rooms_png = (dir / "seg_rooms.png").string();
  std::string icons_png = (dir / "seg_icons.png").string();
  REQUIRE(fp_maps_write_png(maps, rooms_png.c_str(), icons_png.c_str()) == FP_OK);

  char* json = nullptr;
  char* csv = nullptr;
  REQUIRE(fp_segmentation_metrics_png(rooms_png.c_str(), rooms_png.c_str(), 12, &json, &csv) ==
          FP_OK);
  std::string j = take(json);
  CHECK(j.find("\"overall_acc\":1.0") != std::string::npos);
  CHECK(take(csv).find("overall_acc,1,") != std::string::npos);

  fp_model_free(model);
  fp_maps_free(maps);
  fp_heatmaps_free(heat);
}

TEST_CASE("stats accumulate over models") {
  fp_stats* stats = nullptr;
  REQUIRE(fp_stats_new(&stats) == FP_OK);
  for (uint64_t seed = 0; seed < 3; ++seed) {
    fp_synth_config cfg;
    fp_synth_config_default(&cfg);
    cfg.seed = seed;
    fp_model* model = nullptr;
    REQUIRE(fp_synth_generate(&cfg, &model) == FP_OK);
    REQUIRE(fp_stats_add(stats, model) == FP_OK);
    fp_model_free(model);
  }
  char* json = nullptr;
  REQUIRE(fp_stats_json(stats, &json) == FP_OK);
  CHECK(take(json).find("\"images\":3") != std::string::npos);
  char* csv = nullptr;
  REQUIRE(fp_stats_csv(stats, &csv) == FP_OK);
  CHECK(take(csv).find("total,images,3") != std::string::npos);
  fp_stats_free(stats);
}
