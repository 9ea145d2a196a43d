// End-to-end CLI checks, run against the built fpvec binary:
//   test_cli <fpvec-path> <scratch-dir> <golden-dir>
// Plain asserts; returns the number of failures.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::string g_fpvec;
fs::path g_scratch;

void check(bool ok, const std::string& what) {
  if (!ok) {
    std::cerr << "FAILED: " << what << "\n";
    ++g_failures;
  }
}

int run(const std::string& args) {
  std::string cmd = g_fpvec + " " + args + " 2>>" + (g_scratch / "stderr.log").string();
  int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_bytes(const fs::path& a, const fs::path& b) { return slurp(a) == slurp(b); }

}  // namespace

int main(int argc, char** argv) {
  if (argc < 4) {
    std::cerr << "usage: test_cli <fpvec> <scratch-dir> <golden-dir>\n";
    return 1;
  }
  g_fpvec = argv[1];
  g_scratch = argv[2];
  fs::path golden = argv[3];
  fs::remove_all(g_scratch);
  fs::create_directories(g_scratch);

  // Usage errors exit 2.
  check(run("definitely-not-a-subcommand") == 2, "unknown subcommand exits 2");
  check(run("vectorize") == 2, "missing required flags exit 2");

  // classes
  fs::path classes = g_scratch / "classes.json";
  check(run("classes --out " + classes.string()) == 0, "classes exits 0");
  std::string classes_text = slurp(classes);
  check(classes_text.find("\"Kitchen\"") != std::string::npos, "classes.json lists Kitchen");
  check(classes_text.find("junction-X") != std::string::npos, "classes.json lists channels");

  // synth determinism: identical trees for identical invocations.
  fs::path dir_a = g_scratch / "a";
  fs::path dir_b = g_scratch / "b";
  std::string synth_flags = " --seed 7 --count 3 --rows 2 --cols 2 --icons-min 1 --icons-max 2"
                            " --openings-min 1 --openings-max 2";
  check(run("synth --out " + dir_a.string() + synth_flags) == 0, "synth run A exits 0");
  check(run("synth --out " + dir_b.string() + synth_flags) == 0, "synth run B exits 0");
  for (const char* name :
       {"0000.svg", "0000.json", "0000_rooms.png", "0000_icons.png", "0000.fpt1", "0001.json",
        "0002.svg", "0002.fpt1"}) {
    check(fs::exists(dir_a / name), std::string("synth wrote ") + name);
    check(same_bytes(dir_a / name, dir_b / name), std::string("deterministic ") + name);
  }
  check(fs::exists(dir_a / "run_manifest.json"), "synth writes a manifest");
  check(slurp(dir_a / "run_manifest.json").find("\"status\": \"ok\"") != std::string::npos,
        "manifest entries are ok");

  // parse: svg -> json equals the json synth wrote.
  fs::path parsed = g_scratch / "parsed";
  check(run("parse --in " + (dir_a / "0000.svg").string() + " --out-dir " + parsed.string()) == 0,
        "parse exits 0");
  check(same_bytes(parsed / "0000.json", dir_a / "0000.json"), "parse svg == synth json");

  // render from the json model reproduces the synth rasters byte-for-byte.
  fs::path rendered = g_scratch / "rendered";
  check(run("render --in " + (dir_a / "0000.json").string() + " --out-dir " + rendered.string()) ==
            0,
        "render exits 0");
  check(same_bytes(rendered / "0000_rooms.png", dir_a / "0000_rooms.png"), "render rooms match");
  check(same_bytes(rendered / "0000_icons.png", dir_a / "0000_icons.png"), "render icons match");
  check(same_bytes(rendered / "0000.fpt1", dir_a / "0000.fpt1"), "render heatmaps match");

  // vectorize and compare against the ground truth via eval-detection.
  fs::path recovered = g_scratch / "recovered.json";
  check(run("vectorize --rooms " + (dir_a / "0000_rooms.png").string() + " --icons " +
            (dir_a / "0000_icons.png").string() + " --heatmaps " + (dir_a / "0000.fpt1").string() +
            " --out " + recovered.string() + " --diagnostics " +
            (g_scratch / "diag.jsonl").string()) == 0,
        "vectorize exits 0");
  fs::path det_report = g_scratch / "det.json";
  check(run("eval-detection --pred " + recovered.string() + " --gt " +
            (dir_a / "0000.json").string() + " --out " + det_report.string() + " --csv " +
            (g_scratch / "det.csv").string()) == 0,
        "eval-detection exits 0");
  std::string det = slurp(det_report);
  check(det.find("\"acc\":1.0") != std::string::npos, "round-trip detection acc is 1.0");
  check(slurp(g_scratch / "det.csv").find("junction,1,1,") != std::string::npos,
        "csv mirrors the table layout");

  // All-zero inputs vectorize to the empty model with exit 0.
  fs::path empty_model = g_scratch / "empty.json";
  std::ofstream(empty_model)
      << "{\"schema\":\"fpv-1\",\"image_size\":[64,64],\"walls\":[],\"rooms\":[],\"icons\":[],"
         "\"openings\":[]}";
  fs::path empty_rasters = g_scratch / "empty_rasters";
  check(run("render --in " + empty_model.string() + " --out-dir " + empty_rasters.string()) == 0,
        "render of the empty model exits 0");
  fs::path empty_out = g_scratch / "empty_out.json";
  check(run("vectorize --rooms " + (empty_rasters / "empty_rooms.png").string() + " --icons " +
            (empty_rasters / "empty_icons.png").string() + " --heatmaps " +
            (empty_rasters / "empty.fpt1").string() + " --out " + empty_out.string()) == 0,
        "vectorize of all-zero inputs exits 0");
  check(slurp(empty_out) == slurp(empty_model), "all-zero inputs produce the empty model");

  // eval-segmentation on the checked-in 2x2 fixture.
  fs::path seg_report = g_scratch / "seg.json";
  check(run("eval-segmentation --pred " + (golden / "seg_pred_2x2.png").string() + " --gt " +
            (golden / "seg_gt_2x2.png").string() + " --classes 3 --out " + seg_report.string()) ==
            0,
        "eval-segmentation exits 0");
  std::string seg = slurp(seg_report);
  check(seg.find("\"overall_acc\":0.75") != std::string::npos, "overall accuracy 0.75");
  check(seg.find("\"mean_iou\":0.5833333333333") != std::string::npos, "mean IoU 7/12");

  // stats over the corpus; idempotent across runs.
  fs::path stats_a = g_scratch / "stats_a.json";
  fs::path stats_b = g_scratch / "stats_b.json";
  std::string inputs;
  for (int i = 0; i < 3; ++i) {
    inputs += " --in " + (dir_a / ("000" + std::to_string(i) + ".json")).string();
  }
  check(run("stats" + inputs + " --out " + stats_a.string()) == 0, "stats exits 0");
  check(run("stats" + inputs + " --out " + stats_b.string()) == 0, "stats rerun exits 0");
  check(same_bytes(stats_a, stats_b), "stats output is idempotent");
  check(slurp(stats_a).find("\"images\":3") != std::string::npos, "stats counts 3 images");

  // Parallel runs produce the same files and the same ordered manifest
  // (timings aside).
  fs::path dir_p = g_scratch / "p";
  check(run("--jobs 2 synth --out " + dir_p.string() + synth_flags) == 0, "parallel synth ok");
  for (const char* name : {"0000.json", "0001.json", "0002.json"}) {
    check(same_bytes(dir_p / name, dir_a / name), std::string("parallel synth matches ") + name);
  }
  {
    std::string ma = slurp(dir_a / "run_manifest.json");
    size_t i0 = ma.find("seed 7"), i1 = ma.find("seed 8"), i2 = ma.find("seed 9");
    check(i0 != std::string::npos && i0 < i1 && i1 < i2, "manifest entries follow input order");
    std::string mp = slurp(dir_p / "run_manifest.json");
    size_t p1 = mp.find("seed 8");
    check(mp.find("seed 7") < p1 && p1 < mp.find("seed 9"),
          "parallel manifest keeps input order");
  }

  // loss-check
  check(run("loss-check --seed 3 --count 20 --out " + (g_scratch / "loss.json").string()) == 0,
        "loss-check exits 0");
  check(slurp(g_scratch / "loss.json").find("\"pass\":true") != std::string::npos,
        "loss table records passes");

  // loss-check evaluating FPT1 tensors: identical tensors leave only the
  // regularizers, 21 * log(1+sigma) with sigma 1.
  fs::path loss_eval = g_scratch / "loss_eval.json";
  check(run("loss-check --pred " + (dir_a / "0000.fpt1").string() + " --target " +
            (dir_a / "0000.fpt1").string() + " --sigma 1 --out " + loss_eval.string()) == 0,
        "loss-check tensor evaluation exits 0");
  check(slurp(loss_eval).find("\"total\":14.5560") != std::string::npos,
        "zero-residual total equals 21*log(2)");

  // partial failure: one bad input among good ones exits 1 but still writes.
  fs::path bad = g_scratch / "bad.svg";
  std::ofstream(bad) << "<svg this is broken";
  fs::path mixed = g_scratch / "mixed";
  int rc = run("parse --in " + (dir_a / "0001.svg").string() + " --in " + bad.string() +
               " --out-dir " + mixed.string());
  check(rc == 1, "partial failure exits 1");
  check(fs::exists(mixed / "0001.json"), "good input still converted");
  check(slurp(mixed / "run_manifest.json").find("error: ") != std::string::npos,
        "manifest records the error");

  if (g_failures == 0) std::cout << "cli checks passed\n";
  return g_failures;
}
