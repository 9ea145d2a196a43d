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

#include "image.hpp"
#include "model.hpp"

namespace fpv {

// Scanline fill: a pixel is painted when its center (ix+0.5, iy+0.5) lies
// inside the polygon (even-odd rule, half-open on the max side so abutting
// polygons never double-paint).
void fill_polygon(ClassRaster& img, std::span<const Point> poly, uint8_t value);
void fill_rect(ClassRaster& img, const Rect& r, uint8_t value);

// One WallJunction per cluster of coincident wall-centerline endpoints
// (cluster radius kAxisTol), typed by the set of incident wall directions;
// 4 IconCorners per icon; 2 OpeningEndpoints per opening. Points come out
// in deterministic order: junctions by (y,x), then icon corners in icon
// order, then opening endpoints in opening order.
// Throws DegenerateWallGraph for wall graphs outside the taxonomy
// (collinear overlapping walls, straight pass-throughs, duplicate arms).
InterestPointSet extract_interest_points(const FloorplanModel& model);

// Rooms map: rooms painted first, walls over them. Icons map: icons first,
// openings over them. Untouched pixels stay Background/Empty.
SegmentationMaps render_segmentation(const FloorplanModel& model);

// Unnormalized Gaussian exp(-d^2 / (2 sigma^2)) per point on its channel,
// sampled at integer pixel coordinates; overlapping same-kind responses
// combine by per-pixel max. Throws PointOutOfFrame.
HeatmapStack render_heatmaps(const InterestPointSet& points, int width, int height, double sigma);

}  // namespace fpv
