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

#include <utility>

#include "image.hpp"
#include "model.hpp"

namespace fpv {

struct VectorizeConfig {
  double peak_threshold = 0.4;
  double nms_radius = 5.0;
  double align_tol = kAxisTol;
  // A skeleton segment survives only if at least this fraction of its
  // centerline pixels carry the Wall class.
  double prune_min_wall_fraction = 0.5;
  // A shared cell edge covered by skeleton segments over at least this
  // fraction of its length counts as a fully separating wall.
  double separating_coverage = 0.95;
};

struct Diagnostic {
  std::string code;
  std::string message;
};

// Graph of paired junctions, as index pairs into the point set the skeleton
// was built from.
struct WallSkeleton {
  std::vector<std::pair<int, int>> segments;
};

// Junction-free rectangles spanned by junction triplets, on integer pixel
// bounds (junction coordinates snapped to shared grid lines).
struct CellGrid {
  struct Cell {
    int x1, y1, x2, y2;
  };
  struct Adjacency {
    int a, b;          // cell indices
    bool vertical;     // true: shared edge is vertical (cells side by side)
    double coord;      // x of a vertical edge / y of a horizontal one
    double lo, hi;     // shared interval on the other axis
  };
  std::vector<Cell> cells;
  std::vector<Adjacency> adjacency;
};

// Per channel: local maxima >= threshold, greedy non-maximum suppression
// (strongest first, suppressing anything strictly closer than nms_radius),
// then sub-pixel refinement by the 3x3 intensity centroid. Output sorted by
// (channel, y, x).
InterestPointSet detect_peaks(const HeatmapStack& stack, double threshold, double nms_radius);

// Pairs junctions that are axis-aligned within align_tol and have joints
// facing each other (nearest first, each joint used at most once), then
// prunes segments lacking Wall support under the centerline.
WallSkeleton build_wall_skeleton(const InterestPointSet& points, const ClassRaster& rooms_map,
                                 const VectorizeConfig& config = {},
                                 std::vector<Diagnostic>* diagnostics = nullptr);

// Median perpendicular run of Wall pixels over 11 stations spread along the
// middle 80% of the segment; at least 1. Throws NoWallPixels when no
// station touches the Wall class.
double estimate_wall_width(const Point& a, const Point& b, const ClassRaster& rooms_map);

// The junction-triplet cell grid (exposed for tests and diagnostics).
CellGrid build_cell_grid(const InterestPointSet& points, double align_tol = kAxisTol);

// Cells labeled by majority vote over interior pixels (Wall/Background
// excluded), neighbors merged when the shared edge is not fully separating
// and labels agree, merged regions emitted as counter-clockwise rectilinear
// polygons.
std::vector<Room> extract_rooms(const InterestPointSet& points, const ClassRaster& rooms_map,
                                const WallSkeleton& skeleton, const VectorizeConfig& config = {},
                                std::vector<Diagnostic>* diagnostics = nullptr);

// Quadruples of mutually aligned NW/NE/SW/SE corners become bboxes labeled
// by majority icon class over the interior (Empty excluded; an Empty vote
// discards the box).
std::vector<Icon> extract_icons(const InterestPointSet& points, const ClassRaster& icons_map,
                                const VectorizeConfig& config = {},
                                std::vector<Diagnostic>* diagnostics = nullptr);

// Endpoints outside every wall polygon (dilated 2 px) are rejected; the
// rest pair with the nearest aligned opposite-direction endpoint; label by
// majority over {Window, Door} pixels under the segment; width copied from
// the containing wall.
std::vector<Opening> extract_openings(const InterestPointSet& points, const ClassRaster& icons_map,
                                      std::span<const Wall> walls,
                                      const VectorizeConfig& config = {},
                                      std::vector<Diagnostic>* diagnostics = nullptr);

struct VectorizeResult {
  FloorplanModel model;
  std::vector<Diagnostic> diagnostics;
};

// The full four-step post-processor: peaks -> wall skeleton + widths ->
// rooms -> icons -> openings. Never fails on valid shapes; everything
// questionable lands in diagnostics.
VectorizeResult vectorize(const SegmentationMaps& maps, const HeatmapStack& stack,
                          const VectorizeConfig& config = {});

}  // namespace fpv
