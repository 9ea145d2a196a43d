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

#include <cmath>
#include <span>
#include <vector>

namespace fpv {

// Pixel coordinates, origin at the top-left corner, y grows downward.
struct Point {
  double x = 0;
  double y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Axis-aligned rectangle, min <= max after normalize().
struct Rect {
  Point min;
  Point max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double area() const { return width() * height(); }
  bool contains(const Point& p, double tol = 0.0) const {
    return p.x >= min.x - tol && p.x <= max.x + tol && p.y >= min.y - tol && p.y <= max.y + tol;
  }
  Rect dilated(double d) const { return {{min.x - d, min.y - d}, {max.x + d, max.y + d}}; }

  static Rect of(const Point& a, const Point& b) {
    return {{std::min(a.x, b.x), std::min(a.y, b.y)}, {std::max(a.x, b.x), std::max(a.y, b.y)}};
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

// Intersection area of two rectangles (0 when disjoint).
double rect_overlap_area(const Rect& a, const Rect& b);

// |A∩B| / |A∪B| for two rectangles.
double rect_iou(const Rect& a, const Rect& b);

inline bool axis_aligned_h(const Point& a, const Point& b, double tol) {
  return std::abs(a.y - b.y) <= tol;
}
inline bool axis_aligned_v(const Point& a, const Point& b, double tol) {
  return std::abs(a.x - b.x) <= tol;
}
inline bool axis_aligned(const Point& a, const Point& b, double tol) {
  return axis_aligned_h(a, b, tol) || axis_aligned_v(a, b, tol);
}

// Shoelace area; positive when the vertices run counter-clockwise in
// coordinate terms (x right, y down stored as plain numbers).
double signed_area(std::span<const Point> poly);

// Every edge horizontal or vertical within tol.
bool is_rectilinear(std::span<const Point> poly, double tol);

// No two non-adjacent edges intersect and no edge degenerates to a point.
bool is_simple_polygon(std::span<const Point> poly);

// Even-odd rule; points exactly on the boundary count as inside.
bool point_in_polygon(const Point& p, std::span<const Point> poly);

Rect polygon_bbox(std::span<const Point> poly);

}  // namespace fpv
