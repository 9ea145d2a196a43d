#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "metrics.hpp"
#include "raster.hpp"
#include "rng.hpp"
#include "synth.hpp"

using namespace fpv;

namespace {

// Test-side oracle: brute-force confusion matrix and the derived metrics,
// written independently of the implementation.
struct OracleSeg {
  double overall, mean_acc, mean_iou;
};

OracleSeg oracle_segmentation(const ClassRaster& pred, const ClassRaster& gt, int n) {
  std::vector<std::vector<int64_t>> cm(n, std::vector<int64_t>(n, 0));
  for (size_t i = 0; i < pred.data.size(); ++i) cm[gt.data[i]][pred.data[i]]++;
  int64_t correct = 0, total = static_cast<int64_t>(pred.data.size());
  for (int c = 0; c < n; ++c) correct += cm[c][c];
  double acc_sum = 0, iou_sum = 0;
  int present = 0;
  for (int c = 0; c < n; ++c) {
    int64_t gt_c = 0, pred_c = 0;
    for (int k = 0; k < n; ++k) {
      gt_c += cm[c][k];
      pred_c += cm[k][c];
    }
    if (gt_c + pred_c == 0) continue;
    int64_t tp = cm[c][c];
    acc_sum += gt_c == 0 ? 0.0 : static_cast<double>(tp) / gt_c;
    iou_sum += static_cast<double>(tp) / (gt_c + pred_c - tp);
    ++present;
  }
  return {static_cast<double>(correct) / total, present ? acc_sum / present : 1.0,
          present ? iou_sum / present : 1.0};
}

ClassRaster raster_of(std::initializer_list<uint8_t> values, int w, int h) {
  ClassRaster img(w, h);
  std::copy(values.begin(), values.end(), img.data.begin());
  return img;
}

}  // namespace

TEST_CASE("identical rasters score 1.0 on all three metrics") {
  Rng rng(2);
  ClassRaster img(16, 16);
  for (uint8_t& v : img.data) v = static_cast<uint8_t>(rng.uniform_int(0, 11));
  SegReport rep = segmentation_metrics(img, img, 12);
  CHECK(rep.overall_acc == 1.0);
  CHECK(rep.mean_acc == 1.0);
  CHECK(rep.mean_iou == 1.0);
}

TEST_CASE("the 2x2 fixture from first principles") {
  // pred [A,A;B,B], gt [A,B;B,B] with A=1, B=2.
  ClassRaster pred = raster_of({1, 1, 2, 2}, 2, 2);
  ClassRaster gt = raster_of({1, 2, 2, 2}, 2, 2);
  SegReport rep = segmentation_metrics(pred, gt, 3);
  CHECK(rep.overall_acc == doctest::Approx( 0.75).epsilon(1e-12));
  CHECK(rep.per_class_iou[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.per_class_iou[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(rep.mean_iou == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("segmentation_metrics equals the brute-force oracle exactly") {
  Rng rng(1001);
  for (int iter = 0; iter < 300; ++iter) {
    ClassRaster pred(16, 16), gt(16, 16);
    for (uint8_t& v : pred.data) v = static_cast<uint8_t>(rng.uniform_int(0, 11));
    for (uint8_t& v : gt.data) v = static_cast<uint8_t>(rng.uniform_int(0, 11));
    SegReport rep = segmentation_metrics(pred, gt, 12);
    OracleSeg oracle = oracle_segmentation(pred, gt, 12);
    CHECK(rep.overall_acc == oracle.overall);
    CHECK(rep.mean_acc == oracle.mean_acc);
    CHECK(rep.mean_iou == oracle.mean_iou);
    CHECK(rep.mean_iou <= rep.mean_acc);
    CHECK(rep.mean_acc <= 1.0);
  }
}

TEST_CASE("overall accuracy is invariant under consistent relabeling") {
  Rng rng(8);
  ClassRaster pred(12, 12), gt(12, 12);
  for (uint8_t& v : pred.data) v = static_cast<uint8_t>(rng.uniform_int(0, 7));
  for (uint8_t& v : gt.data) v = static_cast<uint8_t>(rng.uniform_int(0, 7));
  int perm[8] = {5, 2, 7, 0, 6, 1, 3, 4};
  ClassRaster pred2 = pred, gt2 = gt;
  for (uint8_t& v : pred2.data) v = static_cast<uint8_t>(perm[v]);
  for (uint8_t& v : gt2.data) v = static_cast<uint8_t>(perm[v]);
  CHECK(segmentation_metrics(pred, gt, 8).overall_acc ==
        segmentation_metrics(pred2, gt2, 8).overall_acc);
}

TEST_CASE("segmentation_metrics rejects bad input") {
  ClassRaster a(4, 4), b(4, 5);
  CHECK_THROWS_AS(segmentation_metrics(a, b, 12), Error);
  ClassRaster c(4, 4, 13);
  CHECK_THROWS_AS(segmentation_metrics(c, c, 12), Error);
}

TEST_CASE("perfect prediction scores 1.0 on every detection category") {
  SynthConfig cfg;
  cfg.seed = 12;
  cfg.icons_min = cfg.icons_max = 2;
  cfg.openings_min = cfg.openings_max = 2;
  FloorplanModel m = generate(cfg);
  DetectionReport rep = detection_metrics(m, m);
  for (const CategoryScore* s : {&rep.junctions, &rep.openings, &rep.icons, &rep.rooms}) {
    CHECK(s->acc == 1.0);
    CHECK(s->recall == 1.0);
  }
}

TEST_CASE("empty prediction against a populated ground truth: acc 1, recall 0") {
  SynthConfig cfg;
  cfg.seed = 3;
  cfg.icons_min = cfg.icons_max = 1;
  cfg.openings_min = cfg.openings_max = 1;
  FloorplanModel gt = generate(cfg);
  FloorplanModel empty;
  empty.width = gt.width;
  empty.height = gt.height;
  DetectionReport rep = detection_metrics(empty, gt);
  CHECK(rep.junctions.acc == 1.0);  // 0/0 convention
  CHECK(rep.junctions.recall == 0.0);
  CHECK(rep.rooms.acc == 1.0);
  CHECK(rep.rooms.recall == 0.0);
  CHECK(rep.icons.recall == 0.0);
  CHECK(rep.openings.recall == 0.0);
}

TEST_CASE("two predicted junctions, one real: acc 0.5, recall 1.0") {
  // Brute-force fixture with hand-built point sets.
  FloorplanModel pred, gt;
  pred.width = gt.width = 100;
  pred.height = gt.height = 100;
  InterestPointSet pred_points, gt_points;
  gt_points.points.push_back({{50, 50}, JunctionType{JunctionFamily::X, 0}});
  pred_points.points.push_back({{51, 50}, JunctionType{JunctionFamily::X, 0}});
  pred_points.points.push_back({{80, 20}, JunctionType{JunctionFamily::X, 0}});
  DetectionReport rep = detection_metrics(pred, pred_points, gt, gt_points, {});
  CHECK(rep.junctions.acc == 0.5);
  CHECK(rep.junctions.recall == 1.0);
  CHECK(rep.junctions.matched == 1);
}

TEST_CASE("junction matching requires the same kind") {
  FloorplanModel pred, gt;
  pred.width = gt.width = 100;
  pred.height = gt.height = 100;
  InterestPointSet pred_points, gt_points;
  gt_points.points.push_back({{50, 50}, JunctionType{JunctionFamily::X, 0}});
  pred_points.points.push_back({{50, 50}, JunctionType{JunctionFamily::T, 1}});
  DetectionReport rep = detection_metrics(pred, pred_points, gt, gt_points, {});
  CHECK(rep.junctions.matched == 0);
}

TEST_CASE("acc and recall swap when pred and gt swap") {
  SynthConfig a_cfg, b_cfg;
  a_cfg.seed = 41;
  b_cfg.seed = 42;
  a_cfg.icons_max = b_cfg.icons_max = 3;
  a_cfg.openings_max = b_cfg.openings_max = 3;
  FloorplanModel a = generate(a_cfg);
  FloorplanModel b = generate(b_cfg);
  DetectionReport ab = detection_metrics(a, b);
  DetectionReport ba = detection_metrics(b, a);
  CHECK(ab.junctions.acc == ba.junctions.recall);
  CHECK(ab.junctions.recall == ba.junctions.acc);
  CHECK(ab.rooms.acc == ba.rooms.recall);
  CHECK(ab.icons.acc == ba.icons.recall);
  CHECK(ab.openings.acc == ba.openings.recall);
}

TEST_CASE("greedy region matching equals the exhaustive optimal matcher on small fixtures") {
  // Oracle: maximum bipartite matching by brute force over subsets.
  auto optimal_count = [](const std::vector<Room>& pred, const std::vector<Room>& gt,
                          auto&& can_match) {
    size_t np = pred.size();
    std::vector<int> gt_used;
    std::function<int(size_t, std::vector<bool>&)> rec = [&](size_t p, std::vector<bool>& used) {
      if (p == np) return 0;
      int best = rec(p + 1, used);
      for (size_t g = 0; g < gt.size(); ++g) {
        if (!used[g] && can_match(pred[p], gt[g])) {
          used[g] = true;
          best = std::max(best, 1 + rec(p + 1, used));
          used[g] = false;
        }
      }
      return best;
    };
    std::vector<bool> used(gt.size(), false);
    return rec(0, used);
  };

  Rng rng(77);
  for (int iter = 0; iter < 40; ++iter) {
    std::vector<Room> pred, gt;
    int np = rng.uniform_int(0, 4), ng = rng.uniform_int(1, 4);
    auto rand_room = [&] {
      int x = rng.uniform_int(0, 30), y = rng.uniform_int(0, 30);
      int w = rng.uniform_int(6, 20), h = rng.uniform_int(6, 20);
      Room r;
      r.polygon = {{double(x), double(y)},
                   {double(x + w), double(y)},
                   {double(x + w), double(y + h)},
                   {double(x), double(y + h)}};
      r.label = rng.uniform_int(0, 1) ? RoomClass::Bath : RoomClass::Kitchen;
      return r;
    };
    for (int i = 0; i < np; ++i) pred.push_back(rand_room());
    for (int i = 0; i < ng; ++i) gt.push_back(rand_room());

    FloorplanModel pm, gm;
    pm.width = gm.width = 64;
    pm.height = gm.height = 64;
    pm.rooms = pred;
    gm.rooms = gt;
    DetectionReport rep = detection_metrics(pm, InterestPointSet{}, gm, InterestPointSet{}, {});

    auto can_match = [&](const Room& p, const Room& g) {
      if (p.label != g.label) return false;
      Rect rp = polygon_bbox(p.polygon), rg = polygon_bbox(g.polygon);
      return rect_iou(rp, rg) >= 0.5;
    };
    int oracle = optimal_count(pred, gt, can_match);
    CHECK(rep.rooms.matched == oracle);
  }
}

TEST_CASE("dataset stats on an empty collection are all zero") {
  StatsBundle s = dataset_stats({});
  CHECK(s.images == 0);
  CHECK(s.rooms == 0);
  CHECK(s.rooms_per_image.empty());
  CHECK(s.resolutions.empty());
}

TEST_CASE("two models with 3 and 5 rooms total 8 with the right histogram") {
  auto make = [](int rooms) {
    FloorplanModel m;
    m.width = 100;
    m.height = 80;
    for (int i = 0; i < rooms; ++i) {
      Room r;
      double x = 10.0 * i;
      r.polygon = {{x, 0}, {x + 8, 0}, {x + 8, 8}, {x, 8}};
      r.label = RoomClass::Bedroom;
      m.rooms.push_back(r);
    }
    return m;
  };
  std::vector<FloorplanModel> models = {make(3), make(5)};
  StatsBundle s = dataset_stats(models);
  CHECK(s.images == 2);
  CHECK(s.rooms == 8);
  CHECK(s.rooms_per_image.at(3) == 1);
  CHECK(s.rooms_per_image.at(5) == 1);
  CHECK(s.room_class_counts[static_cast<int>(RoomClass::Bedroom)] == 8);
  CHECK(s.resolutions.size() == 2);
  CHECK(s.resolutions[0] == std::pair<int, int>{100, 80});
}

TEST_CASE("ranked counts sort by count then code") {
  std::array<int64_t, 5> counts = {0, 7, 3, 7, 1};
  auto ranked = ranked_counts(counts);
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0] == std::pair<int, int64_t>{1, 7});
  CHECK(ranked[1] == std::pair<int, int64_t>{3, 7});
  CHECK(ranked[2] == std::pair<int, int64_t>{2, 3});
  CHECK(ranked[3] == std::pair<int, int64_t>{4, 1});
}

TEST_CASE("report serializers emit parseable text") {
  SynthConfig cfg;
  cfg.seed = 4;
  FloorplanModel m = generate(cfg);
  DetectionReport rep = detection_metrics(m, m);
  std::string json = detection_report_json(rep);
  CHECK(json.find("\"junction\"") != std::string::npos);
  std::string csv = detection_report_csv(rep);
  CHECK(csv.find("junction,1,1,") != std::string::npos);

  ClassRaster img(4, 4, 3);
  SegReport seg = segmentation_metrics(img, img, 12);
  CHECK(seg_report_json(seg, false).find("Kitchen") != std::string::npos);
  CHECK(seg_report_csv(seg, false).find("overall_acc,1,") != std::string::npos);

  std::vector<FloorplanModel> models = {m};
  StatsBundle stats = dataset_stats(models);
  CHECK(stats_json(stats).find("\"images\":1") != std::string::npos);
  CHECK(stats_csv(stats).find("total,images,1") != std::string::npos);
}
