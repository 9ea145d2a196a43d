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
#include "metrics.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "raster.hpp"
#include "svg_io.hpp"

namespace fpv {

namespace {

using ordered_json = nlohmann::ordered_json;

void finalize(CategoryScore& s) {
  s.acc = s.predicted == 0 ? 1.0 : static_cast<double>(s.matched) / s.predicted;
  s.recall = s.ground_truth == 0 ? 1.0 : static_cast<double>(s.matched) / s.ground_truth;
}

CategoryScore match_junctions(const InterestPointSet& pred, const InterestPointSet& gt,
                              double tol) {
  std::vector<int> pj, gj;
  for (size_t i = 0; i < pred.points.size(); ++i) {
    if (std::holds_alternative<JunctionType>(pred.points[i].kind)) pj.push_back(i);
  }
  for (size_t i = 0; i < gt.points.size(); ++i) {
    if (std::holds_alternative<JunctionType>(gt.points[i].kind)) gj.push_back(i);
  }
  struct Pair {
    double dist;
    int p, g;
  };
  std::vector<Pair> candidates;
  for (size_t a = 0; a < pj.size(); ++a) {
    for (size_t b = 0; b < gj.size(); ++b) {
      const InterestPoint& p = pred.points[pj[a]];
      const InterestPoint& g = gt.points[gj[b]];
      if (!(p.kind == g.kind)) continue;
      double d = distance(p.location, g.location);
      if (d <= tol) candidates.push_back({d, static_cast<int>(a), static_cast<int>(b)});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Pair& a, const Pair& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.p != b.p) return a.p < b.p;
    return a.g < b.g;
  });
  CategoryScore score;
  score.predicted = static_cast<int64_t>(pj.size());
  score.ground_truth = static_cast<int64_t>(gj.size());
  std::vector<bool> pu(pj.size(), false), gu(gj.size(), false);
  for (const Pair& c : candidates) {
    if (pu[c.p] || gu[c.g]) continue;
    pu[c.p] = gu[c.g] = true;
    ++score.matched;
    score.matches.emplace_back(c.p, c.g);
  }
  finalize(score);
  return score;
}

// Greedy one-to-one matching by descending IoU for labeled regions.
template <typename T, typename IouFn, typename LabelFn>
CategoryScore match_regions(const std::vector<T>& pred, const std::vector<T>& gt, double iou_min,
                            IouFn iou, LabelFn label) {
  struct Pair {
    double iou;
    int p, g;
  };
  std::vector<Pair> candidates;
  for (size_t a = 0; a < pred.size(); ++a) {
    for (size_t b = 0; b < gt.size(); ++b) {
      if (label(pred[a]) != label(gt[b])) continue;
      double v = iou(pred[a], gt[b]);
      if (v >= iou_min) candidates.push_back({v, static_cast<int>(a), static_cast<int>(b)});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.p != b.p) return a.p < b.p;
    return a.g < b.g;
  });
  CategoryScore score;
  score.predicted = static_cast<int64_t>(pred.size());
  score.ground_truth = static_cast<int64_t>(gt.size());
  std::vector<bool> pu(pred.size(), false), gu(gt.size(), false);
  for (const Pair& c : candidates) {
    if (pu[c.p] || gu[c.g]) continue;
    pu[c.p] = gu[c.g] = true;
    ++score.matched;
    score.matches.emplace_back(c.p, c.g);
  }
  finalize(score);
  return score;
}

// Pixel-level polygon IoU via small rasterized masks aligned to the union
// bbox. Exact for the rectilinear integer polygons handled here and robust
// for everything else.
double room_iou(const Room& a, const Room& b) {
  Rect ra = polygon_bbox(a.polygon);
  Rect rb = polygon_bbox(b.polygon);
  if (rect_overlap_area(ra, rb) <= 0) return 0.0;
  int x0 = static_cast<int>(std::floor(std::min(ra.min.x, rb.min.x)));
  int y0 = static_cast<int>(std::floor(std::min(ra.min.y, rb.min.y)));
  int x1 = static_cast<int>(std::ceil(std::max(ra.max.x, rb.max.x)));
  int y1 = static_cast<int>(std::ceil(std::max(ra.max.y, rb.max.y)));
  int w = std::max(1, x1 - x0), h = std::max(1, y1 - y0);
  ClassRaster ma(w, h, 0), mb(w, h, 0);
  std::vector<Point> shifted;
  auto shift_fill = [&](ClassRaster& m, const std::vector<Point>& poly) {
    shifted.clear();
    for (const Point& p : poly) shifted.push_back({p.x - x0, p.y - y0});
    fill_polygon(m, shifted, 1);
  };
  shift_fill(ma, a.polygon);
  shift_fill(mb, b.polygon);
  int64_t inter = 0, uni = 0;
  for (size_t i = 0; i < ma.data.size(); ++i) {
    bool ia = ma.data[i] != 0, ib = mb.data[i] != 0;
    inter += ia && ib;
    uni += ia || ib;
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

DetectionReport detection_metrics(const FloorplanModel& pred, const InterestPointSet& pred_points,
                                  const FloorplanModel& gt, const InterestPointSet& gt_points,
                                  const DetectionConfig& config) {
  double tol = config.junction_tol;
  if (tol <= 0) {
    double diag = std::hypot(static_cast<double>(gt.width), static_cast<double>(gt.height));
    tol = std::max(4.0, 0.005 * diag);
  }
  DetectionReport report;
  report.junctions = match_junctions(pred_points, gt_points, tol);
  report.openings = match_regions(
      pred.openings, gt.openings, config.iou_threshold,
      [](const Opening& a, const Opening& b) { return rect_iou(a.rect(), b.rect()); },
      [](const Opening& o) { return o.label; });
  report.icons = match_regions(
      pred.icons, gt.icons, config.iou_threshold,
      [](const Icon& a, const Icon& b) { return rect_iou(a.bbox, b.bbox); },
      [](const Icon& i) { return i.label; });
  report.rooms = match_regions(pred.rooms, gt.rooms, config.iou_threshold, room_iou,
                               [](const Room& r) { return r.label; });
  return report;
}

DetectionReport detection_metrics(const FloorplanModel& pred, const FloorplanModel& gt,
                                  const DetectionConfig& config) {
  return detection_metrics(pred, extract_interest_points(pred), gt, extract_interest_points(gt),
                           config);
}

SegReport segmentation_metrics(const ClassRaster& pred, const ClassRaster& gt, int n_classes) {
  if (pred.width != gt.width || pred.height != gt.height) {
    raise(Errc::ShapeMismatch, "prediction and ground truth sizes disagree");
  }
  if (n_classes <= 0 || n_classes > 256) raise(Errc::InvalidArgument, "bad class count");

  std::vector<int64_t> confusion(static_cast<size_t>(n_classes) * n_classes, 0);
  for (size_t i = 0; i < pred.data.size(); ++i) {
    uint8_t p = pred.data[i], g = gt.data[i];
    if (p >= n_classes || g >= n_classes) raise(Errc::InvalidLabel, "class code out of range");
    ++confusion[static_cast<size_t>(g) * n_classes + p];
  }

  SegReport rep;
  rep.per_class_acc.assign(n_classes, 0.0);
  rep.per_class_iou.assign(n_classes, 0.0);
  rep.gt_pixels.assign(n_classes, 0);
  rep.pred_pixels.assign(n_classes, 0);
  rep.true_positives.assign(n_classes, 0);

  int64_t correct = 0;
  for (int g = 0; g < n_classes; ++g) {
    for (int p = 0; p < n_classes; ++p) {
      int64_t n = confusion[static_cast<size_t>(g) * n_classes + p];
      rep.gt_pixels[g] += n;
      rep.pred_pixels[p] += n;
      if (g == p) {
        rep.true_positives[g] = n;
        correct += n;
      }
    }
  }
  int64_t total = static_cast<int64_t>(pred.data.size());
  rep.overall_acc = total == 0 ? 1.0 : static_cast<double>(correct) / total;

  double acc_sum = 0, iou_sum = 0;
  int present = 0;
  for (int c = 0; c < n_classes; ++c) {
    int64_t tp = rep.true_positives[c];
    int64_t gt_c = rep.gt_pixels[c];
    int64_t pr_c = rep.pred_pixels[c];
    if (gt_c + pr_c == 0) continue;  // absent classes do not dilute the means
    int64_t uni = gt_c + pr_c - tp;  // TP + FP + FN
    rep.per_class_acc[c] = gt_c == 0 ? 0.0 : static_cast<double>(tp) / gt_c;
    rep.per_class_iou[c] = uni == 0 ? 0.0 : static_cast<double>(tp) / uni;
    acc_sum += rep.per_class_acc[c];
    iou_sum += rep.per_class_iou[c];
    ++present;
  }
  rep.mean_acc = present == 0 ? 1.0 : acc_sum / present;
  rep.mean_iou = present == 0 ? 1.0 : iou_sum / present;
  return rep;
}

StatsBundle dataset_stats(std::span<const FloorplanModel> models) {
  StatsBundle s;
  s.images = static_cast<int64_t>(models.size());
  for (const FloorplanModel& m : models) {
    s.rooms += static_cast<int64_t>(m.rooms.size());
    s.icons += static_cast<int64_t>(m.icons.size());
    s.walls += static_cast<int64_t>(m.walls.size());
    s.openings += static_cast<int64_t>(m.openings.size());
    for (const Room& r : m.rooms) ++s.room_class_counts[static_cast<int>(r.label)];
    for (const Icon& i : m.icons) ++s.icon_class_counts[static_cast<int>(i.label)];
    ++s.rooms_per_image[static_cast<int64_t>(m.rooms.size())];
    ++s.icons_per_image[static_cast<int64_t>(m.icons.size())];
    ++s.walls_per_image[static_cast<int64_t>(m.walls.size())];
    s.resolutions.emplace_back(m.width, m.height);
  }
  return s;
}

std::vector<std::pair<int, int64_t>> ranked_counts(std::span<const int64_t> counts) {
  std::vector<std::pair<int, int64_t>> out;
  for (size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > 0) out.emplace_back(static_cast<int>(c), counts[c]);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return out;
}

namespace {

ordered_json score_json(const CategoryScore& s) {
  ordered_json j;
  j["acc"] = s.acc;
  j["recall"] = s.recall;
  j["matched"] = s.matched;
  j["predicted"] = s.predicted;
  j["ground_truth"] = s.ground_truth;
  ordered_json matches = ordered_json::array();
  for (auto [p, g] : s.matches) matches.push_back(ordered_json::array({p, g}));
  j["matches"] = std::move(matches);
  return j;
}

}  // namespace

std::string detection_report_json(const DetectionReport& report) {
  ordered_json j;
  j["junction"] = score_json(report.junctions);
  j["opening"] = score_json(report.openings);
  j["icon"] = score_json(report.icons);
  j["room"] = score_json(report.rooms);
  return j.dump();
}

std::string detection_report_csv(const DetectionReport& report) {
  std::string out = "category,acc,recall,matched,predicted,ground_truth\n";
  auto row = [&](const char* name, const CategoryScore& s) {
    out += std::string(name) + "," + format_number(s.acc) + "," + format_number(s.recall) + "," +
           std::to_string(s.matched) + "," + std::to_string(s.predicted) + "," +
           std::to_string(s.ground_truth) + "\n";
  };
  row("junction", report.junctions);
  row("opening", report.openings);
  row("icon", report.icons);
  row("room", report.rooms);
  return out;
}

std::string seg_report_json(const SegReport& report, bool icon_classes) {
  ordered_json j;
  j["overall_acc"] = report.overall_acc;
  j["mean_acc"] = report.mean_acc;
  j["mean_iou"] = report.mean_iou;
  ordered_json classes = ordered_json::array();
  for (size_t c = 0; c < report.per_class_acc.size(); ++c) {
    ordered_json e;
    e["code"] = c;
    e["name"] = icon_classes && c < kNumIconClasses
                    ? std::string(icon_class_name(static_cast<IconClass>(c)))
                    : (!icon_classes && c < kNumRoomClasses
                           ? std::string(room_class_name(static_cast<RoomClass>(c)))
                           : "class" + std::to_string(c));
    e["acc"] = report.per_class_acc[c];
    e["iou"] = report.per_class_iou[c];
    e["gt_pixels"] = report.gt_pixels[c];
    e["pred_pixels"] = report.pred_pixels[c];
    classes.push_back(std::move(e));
  }
  j["classes"] = std::move(classes);
  return j.dump();
}

std::string seg_report_csv(const SegReport& report, bool icon_classes) {
  std::string out = "class,acc,iou\n";
  for (size_t c = 0; c < report.per_class_acc.size(); ++c) {
    std::string name = icon_classes && c < kNumIconClasses
                           ? std::string(icon_class_name(static_cast<IconClass>(c)))
                           : (!icon_classes && c < kNumRoomClasses
                                  ? std::string(room_class_name(static_cast<RoomClass>(c)))
                                  : "class" + std::to_string(c));
    out += name + "," + format_number(report.per_class_acc[c]) + "," +
           format_number(report.per_class_iou[c]) + "\n";
  }
  out += "overall_acc," + format_number(report.overall_acc) + ",\n";
  out += "mean_acc," + format_number(report.mean_acc) + ",\n";
  out += "mean_iou,," + format_number(report.mean_iou) + "\n";
  return out;
}

std::string stats_json(const StatsBundle& stats) {
  ordered_json j;
  j["images"] = stats.images;
  j["rooms"] = stats.rooms;
  j["icons"] = stats.icons;
  j["walls"] = stats.walls;
  j["openings"] = stats.openings;
  auto ranked = [&](std::span<const int64_t> counts, bool icons) {
    ordered_json arr = ordered_json::array();
    for (auto [code, count] : ranked_counts(counts)) {
      ordered_json e;
      e["code"] = code;
      e["name"] = icons ? std::string(icon_class_name(static_cast<IconClass>(code)))
                        : std::string(room_class_name(static_cast<RoomClass>(code)));
      e["count"] = count;
      arr.push_back(std::move(e));
    }
    return arr;
  };
  j["room_classes_ranked"] = ranked(stats.room_class_counts, false);
  j["icon_classes_ranked"] = ranked(stats.icon_class_counts, true);
  auto hist = [](const std::map<int64_t, int64_t>& h) {
    ordered_json obj = ordered_json::object();
    for (auto [k, v] : h) obj[std::to_string(k)] = v;
    return obj;
  };
  j["rooms_per_image"] = hist(stats.rooms_per_image);
  j["icons_per_image"] = hist(stats.icons_per_image);
  j["walls_per_image"] = hist(stats.walls_per_image);
  ordered_json res = ordered_json::array();
  for (auto [w, h] : stats.resolutions) res.push_back(ordered_json::array({w, h}));
  j["resolutions"] = std::move(res);
  return j.dump();
}

std::string stats_csv(const StatsBundle& stats) {
  std::string out = "series,key,value\n";
  out += "total,images," + std::to_string(stats.images) + "\n";
  out += "total,rooms," + std::to_string(stats.rooms) + "\n";
  out += "total,icons," + std::to_string(stats.icons) + "\n";
  out += "total,walls," + std::to_string(stats.walls) + "\n";
  out += "total,openings," + std::to_string(stats.openings) + "\n";
  for (auto [code, count] : ranked_counts(stats.room_class_counts)) {
    out += "room_class," + std::string(room_class_name(static_cast<RoomClass>(code))) + "," +
           std::to_string(count) + "\n";
  }
  for (auto [code, count] : ranked_counts(stats.icon_class_counts)) {
    out += "icon_class," + std::string(icon_class_name(static_cast<IconClass>(code))) + "," +
           std::to_string(count) + "\n";
  }
  auto hist = [&out](const char* name, const std::map<int64_t, int64_t>& h) {
    for (auto [k, v] : h) {
      out += std::string(name) + "," + std::to_string(k) + "," + std::to_string(v) + "\n";
    }
  };
  hist("rooms_per_image", stats.rooms_per_image);
  hist("icons_per_image", stats.icons_per_image);
  hist("walls_per_image", stats.walls_per_image);
  for (auto [w, h] : stats.resolutions) {
    out += "resolution," + std::to_string(w) + "x" + std::to_string(h) + ",1\n";
  }
  return out;
}

}  // namespace fpv
