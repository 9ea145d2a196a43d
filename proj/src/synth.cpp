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
#include "synth.hpp"

#include <algorithm>
#include <cmath>

#include "raster.hpp"
#include "rng.hpp"
#include "vectorize.hpp"

namespace fpv {

namespace {

constexpr RoomClass kRoomLabels[] = {
    RoomClass::Outdoor, RoomClass::Kitchen, RoomClass::LivingRoom,
    RoomClass::Bedroom, RoomClass::Bath,    RoomClass::Hallway,
    RoomClass::Storage, RoomClass::Garage,  RoomClass::OtherRooms,
};

constexpr IconClass kIconLabels[] = {
    IconClass::Closet,     IconClass::ElectricalAppliance,
    IconClass::Toilet,     IconClass::Sink,
    IconClass::SaunaBench, IconClass::FirePlace,
    IconClass::Bathtub,    IconClass::Chimney,
};

// Grid line positions: fixed frame lines, jittered interior lines, with all
// gaps at least min_gap.
std::vector<int> grid_lines(Rng& rng, int lo, int hi, int divisions, int min_gap) {
  std::vector<int> lines(divisions + 1);
  lines.front() = lo;
  lines.back() = hi;
  double base = static_cast<double>(hi - lo) / divisions;
  if (base < min_gap) {
    raise(Errc::InfeasibleConfig, "cells of " + std::to_string(base) +
                                      " px cannot respect the minimum gap of " +
                                      std::to_string(min_gap));
  }
  int jitter = static_cast<int>(std::floor((base - min_gap) / 2.0));
  for (int i = 1; i < divisions; ++i) {
    int center = lo + static_cast<int>(std::lround(base * i));
    lines[i] = center + (jitter > 0 ? rng.uniform_int(-jitter, jitter) : 0);
  }
  return lines;
}

}  // namespace

FloorplanModel generate(const SynthConfig& config) {
  if (config.width <= 0 || config.height <= 0 || config.rows <= 0 || config.cols <= 0) {
    raise(Errc::InfeasibleConfig, "sizes and grid dims must be positive");
  }
  if (config.min_separation < 8.0) {
    raise(Errc::InfeasibleConfig, "minimum feature separation must be at least 8 px");
  }
  if (config.wall_width_min < 2 || config.wall_width_max < config.wall_width_min) {
    raise(Errc::InfeasibleConfig, "wall width range must satisfy 2 <= min <= max");
  }
  if (config.icons_min > config.icons_max || config.openings_min > config.openings_max ||
      config.icons_min < 0 || config.openings_min < 0) {
    raise(Errc::InfeasibleConfig, "bad icon/opening count range");
  }

  Rng rng(config.seed);
  FloorplanModel model;
  model.width = config.width;
  model.height = config.height;

  int margin = config.wall_width_max;
  int min_gap = std::max(static_cast<int>(std::ceil(config.min_separation)),
                         2 * config.wall_width_max + 6);
  std::vector<int> xs = grid_lines(rng, margin, config.width - margin, config.cols, min_gap);
  std::vector<int> ys = grid_lines(rng, margin, config.height - margin, config.rows, min_gap);

  // One width per grid line so collinear segments agree.
  std::vector<int> wx(xs.size()), wy(ys.size());
  for (int& w : wx) w = rng.uniform_int(config.wall_width_min, config.wall_width_max);
  for (int& w : wy) w = rng.uniform_int(config.wall_width_min, config.wall_width_max);

  // Walls split at every junction so each endpoint cluster types cleanly.
  for (size_t j = 0; j < ys.size(); ++j) {
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
      model.walls.push_back({{static_cast<double>(xs[i]), static_cast<double>(ys[j])},
                             {static_cast<double>(xs[i + 1]), static_cast<double>(ys[j])},
                             static_cast<double>(wy[j])});
    }
  }
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t j = 0; j + 1 < ys.size(); ++j) {
      model.walls.push_back({{static_cast<double>(xs[i]), static_cast<double>(ys[j])},
                             {static_cast<double>(xs[i]), static_cast<double>(ys[j + 1])},
                             static_cast<double>(wx[i])});
    }
  }

  for (size_t j = 0; j + 1 < ys.size(); ++j) {
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
      Room room;
      double x1 = xs[i], x2 = xs[i + 1], y1 = ys[j], y2 = ys[j + 1];
      room.polygon = {{x1, y1}, {x2, y1}, {x2, y2}, {x1, y2}};
      room.label = kRoomLabels[rng.uniform_int(0, static_cast<int>(std::size(kRoomLabels)) - 1)];
      model.rooms.push_back(std::move(room));
    }
  }

  // Icons: rejection-sampled boxes inside room interiors, clear of walls,
  // respecting same-kind corner separation across icons.
  int icon_target = rng.uniform_int(config.icons_min, config.icons_max);
  double sep = config.min_separation;
  int placed = 0;
  for (int n = 0; n < icon_target; ++n) {
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      int ci = rng.uniform_int(0, static_cast<int>(xs.size()) - 2);
      int cj = rng.uniform_int(0, static_cast<int>(ys.size()) - 2);
      int lo_x = xs[ci] + wx[ci] / 2 + 2;
      int hi_x = xs[ci + 1] - wx[ci + 1] / 2 - 2;
      int lo_y = ys[cj] + wy[cj] / 2 + 2;
      int hi_y = ys[cj + 1] - wy[cj + 1] / 2 - 2;
      if (hi_x - lo_x < 9 || hi_y - lo_y < 9) continue;
      int iw = rng.uniform_int(8, std::min(hi_x - lo_x - 1, 24));
      int ih = rng.uniform_int(8, std::min(hi_y - lo_y - 1, 24));
      int x1 = rng.uniform_int(lo_x, hi_x - iw);
      int y1 = rng.uniform_int(lo_y, hi_y - ih);
      Rect box{{static_cast<double>(x1), static_cast<double>(y1)},
               {static_cast<double>(x1 + iw), static_cast<double>(y1 + ih)}};
      bool clash = false;
      for (const Icon& other : model.icons) {
        if (rect_overlap_area(box.dilated(2.0), other.bbox) > 0) {
          clash = true;
          break;
        }
        Point bc[4] = {box.min, {box.max.x, box.min.y}, {box.min.x, box.max.y}, box.max};
        Point oc[4] = {other.bbox.min,
                       {other.bbox.max.x, other.bbox.min.y},
                       {other.bbox.min.x, other.bbox.max.y},
                       other.bbox.max};
        for (int k = 0; k < 4; ++k) {
          if (distance(bc[k], oc[k]) < sep) {
            clash = true;
            break;
          }
        }
        if (clash) break;
      }
      if (clash) continue;
      IconClass label = kIconLabels[rng.uniform_int(0, static_cast<int>(std::size(kIconLabels)) - 1)];
      model.icons.push_back({box, label});
      ok = true;
      ++placed;
    }
  }
  if (placed < config.icons_min) {
    raise(Errc::InfeasibleConfig, "could not place the minimum icon count");
  }

  // Openings on interior walls, one per wall segment.
  struct HostSegment {
    bool horizontal;
    int line;   // index into ys (horizontal) or xs (vertical)
    int cell;   // index along the line
  };
  std::vector<HostSegment> hosts;
  for (size_t j = 1; j + 1 < ys.size(); ++j) {
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
      hosts.push_back({true, static_cast<int>(j), static_cast<int>(i)});
    }
  }
  for (size_t i = 1; i + 1 < xs.size(); ++i) {
    for (size_t j = 0; j + 1 < ys.size(); ++j) {
      hosts.push_back({false, static_cast<int>(i), static_cast<int>(j)});
    }
  }
  std::vector<bool> host_used(hosts.size(), false);
  int opening_target = hosts.empty() ? 0 : rng.uniform_int(config.openings_min, config.openings_max);
  if (hosts.empty() && config.openings_min > 0) {
    raise(Errc::InfeasibleConfig, "no interior walls to host openings");
  }
  int openings_placed = 0;
  for (int n = 0; n < opening_target; ++n) {
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      int hidx = rng.uniform_int(0, static_cast<int>(hosts.size()) - 1);
      if (host_used[hidx]) continue;
      const HostSegment& hs = hosts[hidx];
      int wall_w = hs.horizontal ? wy[hs.line] : wx[hs.line];
      int lo, hi;
      if (hs.horizontal) {
        lo = xs[hs.cell] + std::max(4, wx[hs.cell] / 2 + 2);
        hi = xs[hs.cell + 1] - std::max(4, wx[hs.cell + 1] / 2 + 2);
      } else {
        lo = ys[hs.cell] + std::max(4, wy[hs.cell] / 2 + 2);
        hi = ys[hs.cell + 1] - std::max(4, wy[hs.cell + 1] / 2 + 2);
      }
      int min_len = std::max(8, wall_w + 1);
      if (hi - lo < min_len) continue;
      int len = rng.uniform_int(min_len, std::min(hi - lo, 32));
      int start = rng.uniform_int(lo, hi - len);
      Opening op;
      op.width = wall_w;
      op.label = rng.uniform_int(0, 1) == 0 ? IconClass::Window : IconClass::Door;
      if (hs.horizontal) {
        op.a = {static_cast<double>(start), static_cast<double>(ys[hs.line])};
        op.b = {static_cast<double>(start + len), static_cast<double>(ys[hs.line])};
      } else {
        op.a = {static_cast<double>(xs[hs.line]), static_cast<double>(start)};
        op.b = {static_cast<double>(xs[hs.line]), static_cast<double>(start + len)};
      }
      bool clash = false;
      for (const Opening& other : model.openings) {
        if (other.horizontal() == op.horizontal() &&
            (distance(op.a, other.a) < sep || distance(op.b, other.b) < sep)) {
          clash = true;
          break;
        }
      }
      if (clash) continue;
      host_used[hidx] = true;
      model.openings.push_back(op);
      ok = true;
      ++openings_placed;
    }
  }
  if (openings_placed < config.openings_min) {
    raise(Errc::InfeasibleConfig, "could not place the minimum opening count");
  }

  return model;
}

CorruptResult corrupt(const SegmentationMaps& maps, const HeatmapStack& stack,
                      const CorruptParams& params, uint64_t seed) {
  if (params.gaussian_sigma < 0 || params.dropout_prob < 0 || params.jitter_px < 0) {
    raise(Errc::InvalidArgument, "corrupt parameters must be non-negative");
  }
  CorruptResult out{maps, stack};
  Rng rng(seed);

  if (params.jitter_px > 0) {
    InterestPointSet points = detect_peaks(out.stack, 0.5, 5.0);
    for (InterestPoint& p : points.points) {
      p.location.x = std::clamp(p.location.x + rng.uniform_real(-params.jitter_px, params.jitter_px),
                                0.0, static_cast<double>(out.stack.width));
      p.location.y = std::clamp(p.location.y + rng.uniform_real(-params.jitter_px, params.jitter_px),
                                0.0, static_cast<double>(out.stack.height));
    }
    out.stack = render_heatmaps(points, out.stack.width, out.stack.height, params.render_sigma);
  }
  if (params.gaussian_sigma > 0) {
    for (float& v : out.stack.data) {
      v = static_cast<float>(
          std::clamp(static_cast<double>(v) + rng.normal() * params.gaussian_sigma, 0.0, 1.0));
    }
  }
  if (params.dropout_prob > 0) {
    for (uint8_t& v : out.maps.rooms.data) {
      if (rng.uniform_real() < params.dropout_prob) v = static_cast<uint8_t>(RoomClass::Background);
    }
    for (uint8_t& v : out.maps.icons.data) {
      if (rng.uniform_real() < params.dropout_prob) v = static_cast<uint8_t>(IconClass::Empty);
    }
  }
  return out;
}

}  // namespace fpv
