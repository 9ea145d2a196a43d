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
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "image.hpp"
#include "model.hpp"

namespace fpv {

struct DetectionConfig {
  // Junction match distance; 0 picks max(4 px, 0.5% of the image diagonal).
  double junction_tol = 0.0;
  double iou_threshold = 0.5;
};

struct CategoryScore {
  double acc = 1.0;     // precision: matched / predicted (0/0 counts as 1)
  double recall = 1.0;  // matched / ground truth (0/0 counts as 1)
  int64_t matched = 0;
  int64_t predicted = 0;
  int64_t ground_truth = 0;
  std::vector<std::pair<int, int>> matches;  // (pred index, gt index)
};

struct DetectionReport {
  CategoryScore junctions;
  CategoryScore openings;
  CategoryScore icons;
  CategoryScore rooms;
};

// Junctions match one-to-one (greedy nearest first) when the kind agrees
// and the distance stays within tolerance; openings, icons and rooms match
// greedily by descending IoU when labels agree and IoU >= threshold.
DetectionReport detection_metrics(const FloorplanModel& pred, const InterestPointSet& pred_points,
                                  const FloorplanModel& gt, const InterestPointSet& gt_points,
                                  const DetectionConfig& config = {});

// Convenience: derives both interest-point sets from the models.
DetectionReport detection_metrics(const FloorplanModel& pred, const FloorplanModel& gt,
                                  const DetectionConfig& config = {});

struct SegReport {
  double overall_acc = 0;  // correctly classified / total pixels
  double mean_acc = 0;     // per-class pixel recall averaged over present classes
  double mean_iou = 0;
  std::vector<double> per_class_acc;
  std::vector<double> per_class_iou;
  std::vector<int64_t> gt_pixels;
  std::vector<int64_t> pred_pixels;
  std::vector<int64_t> true_positives;
};

// Confusion-matrix derived pixel metrics. Mean metrics average over classes
// present in ground truth or prediction; a class with no ground-truth
// pixels scores 0 accuracy. Throws ShapeMismatch.
SegReport segmentation_metrics(const ClassRaster& pred, const ClassRaster& gt, int n_classes);

struct StatsBundle {
  int64_t images = 0;
  int64_t rooms = 0;
  int64_t icons = 0;
  int64_t walls = 0;
  int64_t openings = 0;
  std::array<int64_t, kNumRoomClasses> room_class_counts{};
  std::array<int64_t, kNumIconClasses> icon_class_counts{};
  std::map<int64_t, int64_t> rooms_per_image;
  std::map<int64_t, int64_t> icons_per_image;
  std::map<int64_t, int64_t> walls_per_image;
  std::vector<std::pair<int, int>> resolutions;  // (width, height) per image
};

StatsBundle dataset_stats(std::span<const FloorplanModel> models);

// (class code, count) sorted by count descending, code ascending; zero
// counts omitted.
std::vector<std::pair<int, int64_t>> ranked_counts(std::span<const int64_t> counts);

// Report serializers used by the CLI and the C surface.
std::string detection_report_json(const DetectionReport& report);
std::string detection_report_csv(const DetectionReport& report);
std::string seg_report_json(const SegReport& report, bool icon_classes);
std::string seg_report_csv(const SegReport& report, bool icon_classes);
std::string stats_json(const StatsBundle& stats);
std::string stats_csv(const StatsBundle& stats);

}  // namespace fpv
