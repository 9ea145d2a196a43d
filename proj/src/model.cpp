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
#include "model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "error.hpp"

namespace fpv {

namespace {

constexpr std::string_view kRoomNames[kNumRoomClasses] = {
    "Background", "Outdoor", "Wall",    "Kitchen", "LivingRoom", "Bedroom",
    "Bath",       "Hallway", "Railing", "Storage", "Garage",     "OtherRooms",
};

constexpr std::string_view kIconNames[kNumIconClasses] = {
    "Empty",  "Window", "Door",       "Closet",    "ElectricalAppliance", "Toilet",
    "Sink",   "SaunaBench", "FirePlace", "Bathtub", "Chimney",
};

constexpr std::string_view kDirNames[4] = {"E", "S", "W", "N"};
constexpr std::string_view kCornerNames[4] = {"NW", "NE", "SW", "SE"};
constexpr std::string_view kEndNames[4] = {"left", "right", "up", "down"};

}  // namespace

std::string_view room_class_name(RoomClass c) { return kRoomNames[static_cast<int>(c)]; }
std::string_view icon_class_name(IconClass c) { return kIconNames[static_cast<int>(c)]; }
std::string_view dir_name(Dir d) { return kDirNames[static_cast<int>(d)]; }

bool room_class_from_name(std::string_view name, RoomClass* out) {
  for (int i = 0; i < kNumRoomClasses; ++i) {
    if (kRoomNames[i] == name) {
      *out = static_cast<RoomClass>(i);
      return true;
    }
  }
  return false;
}

bool icon_class_from_name(std::string_view name, IconClass* out) {
  for (int i = 0; i < kNumIconClasses; ++i) {
    if (kIconNames[i] == name) {
      *out = static_cast<IconClass>(i);
      return true;
    }
  }
  return false;
}

std::vector<Dir> junction_arms(JunctionType t) {
  unsigned mask = 0;
  int o = t.orientation;
  switch (t.family) {
    case JunctionFamily::I:
      mask = 1u << o;
      break;
    case JunctionFamily::L:
      mask = (1u << o) | (1u << ((o + 1) % 4));
      break;
    case JunctionFamily::T:
      mask = 0xFu & ~(1u << o);
      break;
    case JunctionFamily::X:
      mask = 0xFu;
      break;
  }
  std::vector<Dir> arms;
  for (int d = 0; d < 4; ++d) {
    if (mask & (1u << d)) arms.push_back(static_cast<Dir>(d));
  }
  return arms;
}

bool junction_from_arms(unsigned dir_mask, JunctionType* out) {
  dir_mask &= 0xFu;
  int n = std::popcount(dir_mask);
  switch (n) {
    case 1:
      out->family = JunctionFamily::I;
      out->orientation = static_cast<uint8_t>(std::countr_zero(dir_mask));
      return true;
    case 2:
      for (uint8_t o = 0; o < 4; ++o) {
        if (dir_mask == ((1u << o) | (1u << ((o + 1) % 4)))) {
          out->family = JunctionFamily::L;
          out->orientation = o;
          return true;
        }
      }
      return false;  // two collinear arms: not a junction type
    case 3:
      out->family = JunctionFamily::T;
      out->orientation = static_cast<uint8_t>(std::countr_zero(~dir_mask & 0xFu));
      return true;
    case 4:
      out->family = JunctionFamily::X;
      out->orientation = 0;
      return true;
    default:
      return false;
  }
}

int channel_index(const PointKind& kind) {
  struct Visitor {
    int operator()(const JunctionType& j) const {
      switch (j.family) {
        case JunctionFamily::I:
          return j.orientation;
        case JunctionFamily::L:
          return 4 + j.orientation;
        case JunctionFamily::T:
          return 8 + j.orientation;
        case JunctionFamily::X:
          return 12;
      }
      return -1;
    }
    int operator()(IconCorner c) const { return 13 + static_cast<int>(c); }
    int operator()(OpeningEnd e) const { return 17 + static_cast<int>(e); }
  };
  return std::visit(Visitor{}, kind);
}

PointKind kind_from_channel(int channel) {
  if (channel < 0 || channel >= kNumChannels) raise(Errc::InvalidArgument, "channel out of range");
  if (channel < 4) return JunctionType{JunctionFamily::I, static_cast<uint8_t>(channel)};
  if (channel < 8) return JunctionType{JunctionFamily::L, static_cast<uint8_t>(channel - 4)};
  if (channel < 12) return JunctionType{JunctionFamily::T, static_cast<uint8_t>(channel - 8)};
  if (channel == 12) return JunctionType{JunctionFamily::X, 0};
  if (channel < 17) return static_cast<IconCorner>(channel - 13);
  return static_cast<OpeningEnd>(channel - 17);
}

std::string kind_name(const PointKind& kind) {
  struct Visitor {
    std::string operator()(const JunctionType& j) const {
      switch (j.family) {
        case JunctionFamily::I:
          return "junction-I-" + std::string(kDirNames[j.orientation]);
        case JunctionFamily::L:
          return "junction-L-" + std::string(kDirNames[j.orientation]) +
                 std::string(kDirNames[(j.orientation + 1) % 4]);
        case JunctionFamily::T:
          return "junction-T-missing-" + std::string(kDirNames[j.orientation]);
        case JunctionFamily::X:
          return "junction-X";
      }
      return "junction";
    }
    std::string operator()(IconCorner c) const {
      return "icon-corner-" + std::string(kCornerNames[static_cast<int>(c)]);
    }
    std::string operator()(OpeningEnd e) const {
      return "opening-end-" + std::string(kEndNames[static_cast<int>(e)]);
    }
  };
  return std::visit(Visitor{}, kind);
}

double Wall::length() const {
  return horizontal() ? std::abs(b.x - a.x) : std::abs(b.y - a.y);
}

std::array<Point, 4> Wall::polygon() const {
  double h = width / 2.0;
  if (horizontal()) {
    double yc = (a.y + b.y) / 2.0;
    double x1 = std::min(a.x, b.x), x2 = std::max(a.x, b.x);
    return {Point{x1, yc - h}, Point{x2, yc - h}, Point{x2, yc + h}, Point{x1, yc + h}};
  }
  double xc = (a.x + b.x) / 2.0;
  double y1 = std::min(a.y, b.y), y2 = std::max(a.y, b.y);
  return {Point{xc - h, y1}, Point{xc + h, y1}, Point{xc + h, y2}, Point{xc - h, y2}};
}

Rect Wall::bounds() const {
  auto poly = polygon();
  return Rect::of(poly[0], poly[2]);
}

Rect Opening::rect() const {
  double h = width / 2.0;
  if (horizontal()) {
    double yc = (a.y + b.y) / 2.0;
    return {{std::min(a.x, b.x), yc - h}, {std::max(a.x, b.x), yc + h}};
  }
  double xc = (a.x + b.x) / 2.0;
  return {{xc - h, std::min(a.y, b.y)}, {xc + h, std::max(a.y, b.y)}};
}

bool model_approx_equal(const FloorplanModel& a, const FloorplanModel& b, double tol) {
  auto close = [tol](const Point& p, const Point& q) {
    return std::abs(p.x - q.x) <= tol && std::abs(p.y - q.y) <= tol;
  };
  if (a.width != b.width || a.height != b.height) return false;
  if (a.walls.size() != b.walls.size() || a.rooms.size() != b.rooms.size() ||
      a.icons.size() != b.icons.size() || a.openings.size() != b.openings.size())
    return false;
  for (size_t i = 0; i < a.walls.size(); ++i) {
    const Wall &w = a.walls[i], &v = b.walls[i];
    if (!close(w.a, v.a) || !close(w.b, v.b) || std::abs(w.width - v.width) > tol) return false;
  }
  for (size_t i = 0; i < a.rooms.size(); ++i) {
    const Room &r = a.rooms[i], &s = b.rooms[i];
    if (r.label != s.label || r.polygon.size() != s.polygon.size()) return false;
    for (size_t j = 0; j < r.polygon.size(); ++j) {
      if (!close(r.polygon[j], s.polygon[j])) return false;
    }
  }
  for (size_t i = 0; i < a.icons.size(); ++i) {
    const Icon &c = a.icons[i], &d = b.icons[i];
    if (c.label != d.label || !close(c.bbox.min, d.bbox.min) || !close(c.bbox.max, d.bbox.max))
      return false;
  }
  for (size_t i = 0; i < a.openings.size(); ++i) {
    const Opening &o = a.openings[i], &p = b.openings[i];
    if (o.label != p.label || !close(o.a, p.a) || !close(o.b, p.b) ||
        std::abs(o.width - p.width) > tol)
      return false;
  }
  return true;
}

namespace {

bool finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

bool in_frame(const Point& p, int w, int h) {
  return p.x >= 0 && p.y >= 0 && p.x <= w && p.y <= h;
}

void add(ValidationReport& rep, std::string code, std::string element, std::string message) {
  rep.violations.push_back({std::move(code), std::move(element), std::move(message)});
}

}  // namespace

ValidationReport validate_model(const FloorplanModel& model) {
  ValidationReport rep;
  if (model.width <= 0 || model.height <= 0) {
    add(rep, "image-size-not-positive", "model", "image size must be positive");
    return rep;
  }

  for (size_t i = 0; i < model.walls.size(); ++i) {
    const Wall& w = model.walls[i];
    std::string el = "wall[" + std::to_string(i) + "]";
    if (!finite(w.a) || !finite(w.b) || !std::isfinite(w.width)) {
      add(rep, "wall-not-finite", el, "non-finite coordinates");
      continue;
    }
    if (!axis_aligned(w.a, w.b, kAxisTol)) {
      add(rep, "wall-not-axis-aligned", el, "centerline neither horizontal nor vertical");
    }
    if (w.width <= 0) add(rep, "wall-width-not-positive", el, "width must be > 0");
    if (w.length() <= 0) add(rep, "wall-zero-length", el, "centerline endpoints coincide");
    if (!in_frame(w.a, model.width, model.height) || !in_frame(w.b, model.width, model.height)) {
      add(rep, "wall-outside-frame", el, "centerline leaves the image frame");
    }
    if (w.width > 0 && w.length() > 0) {
      auto poly = w.polygon();
      double area = std::abs(signed_area(std::span<const Point>(poly.data(), poly.size())));
      double expect = w.length() * w.width;
      if (std::abs(area - expect) > 1e-6 * std::max(1.0, expect)) {
        add(rep, "wall-area-mismatch", el, "polygon area != length * width");
      }
    }
  }

  for (size_t i = 0; i < model.rooms.size(); ++i) {
    const Room& r = model.rooms[i];
    std::string el = "room[" + std::to_string(i) + "]";
    if (r.polygon.size() < 4) {
      add(rep, "room-too-few-vertices", el, "polygon needs at least 4 vertices");
      continue;
    }
    bool all_finite = true;
    for (const Point& p : r.polygon) {
      if (!finite(p)) all_finite = false;
    }
    if (!all_finite) {
      add(rep, "room-not-finite", el, "non-finite vertex");
      continue;
    }
    if (!is_rectilinear(r.polygon, kAxisTol)) {
      add(rep, "room-edge-not-axis-aligned", el, "room edge not axis-aligned");
    }
    if (!is_simple_polygon(r.polygon)) {
      add(rep, "room-not-simple", el, "polygon self-intersects");
    } else if (signed_area(r.polygon) <= 0) {
      add(rep, "room-not-counter-clockwise", el, "vertices must run counter-clockwise");
    }
    if (r.label == RoomClass::Background || r.label == RoomClass::Wall) {
      add(rep, "room-label-invalid", el, "label may not be Background or Wall");
    }
    for (const Point& p : r.polygon) {
      if (!in_frame(p, model.width, model.height)) {
        add(rep, "room-outside-frame", el, "vertex leaves the image frame");
        break;
      }
    }
  }

  for (size_t i = 0; i < model.icons.size(); ++i) {
    const Icon& c = model.icons[i];
    std::string el = "icon[" + std::to_string(i) + "]";
    if (!finite(c.bbox.min) || !finite(c.bbox.max)) {
      add(rep, "icon-not-finite", el, "non-finite bbox");
      continue;
    }
    if (c.bbox.area() <= 0) add(rep, "icon-empty-bbox", el, "bbox area must be positive");
    if (c.label == IconClass::Empty) add(rep, "icon-label-empty", el, "label may not be Empty");
    if (c.label == IconClass::Window || c.label == IconClass::Door) {
      add(rep, "icon-label-opening", el, "windows and doors are openings, not icons");
    }
    if (!in_frame(c.bbox.min, model.width, model.height) ||
        !in_frame(c.bbox.max, model.width, model.height)) {
      add(rep, "icon-outside-frame", el, "bbox leaves the image frame");
    }
  }

  for (size_t i = 0; i < model.openings.size(); ++i) {
    const Opening& o = model.openings[i];
    std::string el = "opening[" + std::to_string(i) + "]";
    if (!finite(o.a) || !finite(o.b) || !std::isfinite(o.width)) {
      add(rep, "opening-not-finite", el, "non-finite coordinates");
      continue;
    }
    if (!axis_aligned(o.a, o.b, kAxisTol)) {
      add(rep, "opening-not-axis-aligned", el, "endpoints neither horizontal nor vertical");
    }
    if (o.width <= 0) add(rep, "opening-width-not-positive", el, "width must be > 0");
    if (o.label != IconClass::Window && o.label != IconClass::Door) {
      add(rep, "opening-label-invalid", el, "label must be Window or Door");
    }
    if (!in_frame(o.a, model.width, model.height) || !in_frame(o.b, model.width, model.height)) {
      add(rep, "opening-outside-frame", el, "segment leaves the image frame");
    }
    bool covered = false;
    for (const Wall& w : model.walls) {
      Rect r = w.bounds().dilated(kAxisTol);
      if (r.contains(o.a) && r.contains(o.b)) {
        covered = true;
        break;
      }
    }
    if (!covered) add(rep, "opening-outside-walls", el, "opening outside walls");
  }

  return rep;
}

}  // namespace fpv
