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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geometry.hpp"

namespace fpv {

// Shared tolerance for "horizontal/vertical up to a few pixels" checks. The
// same constant drives junction clustering, skeleton pairing and validation
// so the pieces cannot disagree.
inline constexpr double kAxisTol = 3.0;

enum class RoomClass : uint8_t {
  Background = 0,
  Outdoor,
  Wall,
  Kitchen,
  LivingRoom,
  Bedroom,
  Bath,
  Hallway,
  Railing,
  Storage,
  Garage,
  OtherRooms,
};
inline constexpr int kNumRoomClasses = 12;

enum class IconClass : uint8_t {
  Empty = 0,
  Window,
  Door,
  Closet,
  ElectricalAppliance,
  Toilet,
  Sink,
  SaunaBench,
  FirePlace,
  Bathtub,
  Chimney,
};
inline constexpr int kNumIconClasses = 11;

std::string_view room_class_name(RoomClass c);
std::string_view icon_class_name(IconClass c);
// Return false when the name is unknown.
bool room_class_from_name(std::string_view name, RoomClass* out);
bool icon_class_from_name(std::string_view name, IconClass* out);

// Compass directions in raster coordinates: East = +x, South = +y.
enum class Dir : uint8_t { East = 0, South = 1, West = 2, North = 3 };

inline Dir opposite(Dir d) { return static_cast<Dir>((static_cast<int>(d) + 2) % 4); }
std::string_view dir_name(Dir d);

enum class JunctionFamily : uint8_t { I = 0, L, T, X };

// Wall junction taxonomy: 13 distinct (family, orientation) combinations.
// `orientation` is a quarter-turn index 0..3 standing for 0/90/180/270
// degrees and maps onto Dir (0=E, 1=S, 2=W, 3=N):
//   I: the single arm points toward orientation.
//   L: two arms, toward orientation and orientation+90.
//   T: three arms, the missing one points toward orientation.
//   X: four arms; orientation fixed at 0.
struct JunctionType {
  JunctionFamily family = JunctionFamily::I;
  uint8_t orientation = 0;

  friend bool operator==(const JunctionType&, const JunctionType&) = default;
};

// Arm directions implied by a junction type, in Dir order.
std::vector<Dir> junction_arms(JunctionType t);

// Inverse of junction_arms. `dir_mask` has bit (1 << Dir) set per incident
// arm. Returns false for combinations outside the taxonomy (straight
// pass-through of two collinear arms, empty mask).
bool junction_from_arms(unsigned dir_mask, JunctionType* out);

enum class IconCorner : uint8_t { NW = 0, NE, SW, SE };
enum class OpeningEnd : uint8_t { Left = 0, Right, Up, Down };

// An interest point kind is one of 21 heatmap channels.
using PointKind = std::variant<JunctionType, IconCorner, OpeningEnd>;

inline constexpr int kNumChannels = 21;

// Bijection between kinds and channels 0..20: wall junctions 0-12 in the
// order I(E,S,W,N), L(ES..NE), T(missing E..N), X; icon corners 13-16
// (NW,NE,SW,SE); opening endpoints 17-20 (left,right,up,down).
int channel_index(const PointKind& kind);
PointKind kind_from_channel(int channel);
std::string kind_name(const PointKind& kind);

struct InterestPoint {
  Point location;
  PointKind kind;

  friend bool operator==(const InterestPoint&, const InterestPoint&) = default;
};

struct InterestPointSet {
  std::vector<InterestPoint> points;
};

// Axis-aligned wall segment. The polygon is always derived from the
// centerline and width, never stored, so area == length() * width holds by
// construction. length() is the extent along the dominant axis.
struct Wall {
  Point a;
  Point b;
  double width = 0;

  bool horizontal() const { return std::abs(b.x - a.x) >= std::abs(b.y - a.y); }
  double length() const;
  std::array<Point, 4> polygon() const;
  Rect bounds() const;

  friend bool operator==(const Wall&, const Wall&) = default;
};

struct Room {
  std::vector<Point> polygon;  // closed, counter-clockwise (positive shoelace)
  RoomClass label = RoomClass::OtherRooms;

  friend bool operator==(const Room&, const Room&) = default;
};

struct Icon {
  Rect bbox;
  IconClass label = IconClass::Closet;

  friend bool operator==(const Icon&, const Icon&) = default;
};

// A door or window embedded in a wall; rendered as the segment dilated by
// width/2 perpendicular to it.
struct Opening {
  Point a;
  Point b;
  double width = 0;
  IconClass label = IconClass::Window;  // Window or Door only

  bool horizontal() const { return std::abs(b.x - a.x) >= std::abs(b.y - a.y); }
  Rect rect() const;

  friend bool operator==(const Opening&, const Opening&) = default;
};

struct FloorplanModel {
  int width = 0;
  int height = 0;
  std::vector<Wall> walls;
  std::vector<Room> rooms;
  std::vector<Icon> icons;
  std::vector<Opening> openings;

  friend bool operator==(const FloorplanModel&, const FloorplanModel&) = default;
};

// Coordinate-wise comparison with tolerance; labels and counts must match
// exactly.
bool model_approx_equal(const FloorplanModel& a, const FloorplanModel& b, double tol);

struct Violation {
  std::string code;     // stable identifier, e.g. "room-edge-not-axis-aligned"
  std::string element;  // offending element, e.g. "room[2]"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every type invariant; violations are data, not failures.
ValidationReport validate_model(const FloorplanModel& model);

}  // namespace fpv
