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
#include "raster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fpv {

void fill_polygon(ClassRaster& img, std::span<const Point> poly, uint8_t value) {
  if (poly.size() < 3) return;
  Rect bb = polygon_bbox(poly);
  int y0 = std::max(0, static_cast<int>(std::floor(bb.min.y - 0.5)));
  int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(bb.max.y)));
  std::vector<double> xs;
  for (int iy = y0; iy <= y1; ++iy) {
    double yc = iy + 0.5;
    xs.clear();
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
      const Point& a = poly[i];
      const Point& b = poly[(i + 1) % n];
      // Half-open span [min(y), max(y)) so shared vertices count once.
      if ((a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y)) {
        xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (size_t k = 0; k + 1 < xs.size(); k += 2) {
      int ix0 = std::max(0, static_cast<int>(std::ceil(xs[k] - 0.5)));
      int ix1 = std::min(img.width - 1, static_cast<int>(std::ceil(xs[k + 1] - 0.5)) - 1);
      for (int ix = ix0; ix <= ix1; ++ix) img.at(ix, iy) = value;
    }
  }
}

void fill_rect(ClassRaster& img, const Rect& r, uint8_t value) {
  const Point pts[4] = {r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}};
  fill_polygon(img, pts, value);
}

namespace {

std::string fmt_point(const Point& p) {
  return std::to_string(p.x) + ", " + std::to_string(p.y);
}

struct EndpointRec {
  Point at;
  Dir away;  // direction along the wall, away from this endpoint
  size_t wall;
};

Dir direction_of(const Point& from, const Point& to) {
  double dx = to.x - from.x;
  double dy = to.y - from.y;
  if (std::abs(dx) >= std::abs(dy)) return dx >= 0 ? Dir::East : Dir::West;
  return dy >= 0 ? Dir::South : Dir::North;
}

// Two walls on the same carrier line whose spans overlap cannot be typed as
// junctions; the annotation (or generator) should have merged them.
void check_collinear_overlap(const FloorplanModel& model) {
  for (size_t i = 0; i < model.walls.size(); ++i) {
    for (size_t j = i + 1; j < model.walls.size(); ++j) {
      const Wall& u = model.walls[i];
      const Wall& v = model.walls[j];
      if (u.horizontal() != v.horizontal()) continue;
      double off_u = u.horizontal() ? (u.a.y + u.b.y) / 2 : (u.a.x + u.b.x) / 2;
      double off_v = v.horizontal() ? (v.a.y + v.b.y) / 2 : (v.a.x + v.b.x) / 2;
      if (std::abs(off_u - off_v) > kAxisTol) continue;
      double u0 = u.horizontal() ? std::min(u.a.x, u.b.x) : std::min(u.a.y, u.b.y);
      double u1 = u.horizontal() ? std::max(u.a.x, u.b.x) : std::max(u.a.y, u.b.y);
      double v0 = v.horizontal() ? std::min(v.a.x, v.b.x) : std::min(v.a.y, v.b.y);
      double v1 = v.horizontal() ? std::max(v.a.x, v.b.x) : std::max(v.a.y, v.b.y);
      double overlap = std::min(u1, v1) - std::max(u0, v0);
      if (overlap > kAxisTol) {
        raise(Errc::DegenerateWallGraph,
              "walls " + std::to_string(i) + " and " + std::to_string(j) +
                  " are collinear and overlap");
      }
    }
  }
}

}  // namespace

InterestPointSet extract_interest_points(const FloorplanModel& model) {
  check_collinear_overlap(model);

  std::vector<EndpointRec> recs;
  recs.reserve(model.walls.size() * 2);
  for (size_t i = 0; i < model.walls.size(); ++i) {
    const Wall& w = model.walls[i];
    recs.push_back({w.a, direction_of(w.a, w.b), i});
    recs.push_back({w.b, direction_of(w.b, w.a), i});
  }

  // Cluster coincident endpoints (union-find over pairs within kAxisTol).
  std::vector<size_t> parent(recs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t i = 0; i < recs.size(); ++i) {
    for (size_t j = i + 1; j < recs.size(); ++j) {
      if (distance(recs[i].at, recs[j].at) <= kAxisTol) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<size_t>> clusters(recs.size());
  for (size_t i = 0; i < recs.size(); ++i) clusters[find(i)].push_back(i);

  InterestPointSet out;
  std::vector<InterestPoint> junctions;
  for (const auto& members : clusters) {
    if (members.empty()) continue;
    Point loc{0, 0};
    unsigned mask = 0;
    for (size_t m : members) {
      loc.x += recs[m].at.x;
      loc.y += recs[m].at.y;
      unsigned bit = 1u << static_cast<int>(recs[m].away);
      if (mask & bit) {
        raise(Errc::DegenerateWallGraph,
              "two walls leave the junction near (" + fmt_point(recs[m].at) +
                  ") in the same direction");
      }
      mask |= bit;
    }
    loc.x /= static_cast<double>(members.size());
    loc.y /= static_cast<double>(members.size());
    JunctionType jt;
    if (!junction_from_arms(mask, &jt)) {
      raise(Errc::DegenerateWallGraph,
            "arm pattern at (" + fmt_point(loc) + ") is not an I/L/T/X junction");
    }
    junctions.push_back({loc, jt});
  }
  std::sort(junctions.begin(), junctions.end(), [](const InterestPoint& a, const InterestPoint& b) {
    return a.location.y != b.location.y ? a.location.y < b.location.y : a.location.x < b.location.x;
  });
  out.points = std::move(junctions);

  for (const Icon& ic : model.icons) {
    const Rect& b = ic.bbox;
    out.points.push_back({{b.min.x, b.min.y}, IconCorner::NW});
    out.points.push_back({{b.max.x, b.min.y}, IconCorner::NE});
    out.points.push_back({{b.min.x, b.max.y}, IconCorner::SW});
    out.points.push_back({{b.max.x, b.max.y}, IconCorner::SE});
  }

  for (const Opening& op : model.openings) {
    if (op.horizontal()) {
      const Point& left = op.a.x <= op.b.x ? op.a : op.b;
      const Point& right = op.a.x <= op.b.x ? op.b : op.a;
      out.points.push_back({left, OpeningEnd::Left});
      out.points.push_back({right, OpeningEnd::Right});
    } else {
      const Point& top = op.a.y <= op.b.y ? op.a : op.b;
      const Point& bottom = op.a.y <= op.b.y ? op.b : op.a;
      out.points.push_back({top, OpeningEnd::Up});
      out.points.push_back({bottom, OpeningEnd::Down});
    }
  }
  return out;
}

SegmentationMaps render_segmentation(const FloorplanModel& model) {
  SegmentationMaps maps;
  maps.rooms = ClassRaster(model.width, model.height, static_cast<uint8_t>(RoomClass::Background));
  maps.icons = ClassRaster(model.width, model.height, static_cast<uint8_t>(IconClass::Empty));

  for (const Room& r : model.rooms) {
    fill_polygon(maps.rooms, r.polygon, static_cast<uint8_t>(r.label));
  }
  for (const Wall& w : model.walls) {
    auto poly = w.polygon();
    fill_polygon(maps.rooms, std::span<const Point>(poly.data(), poly.size()),
                 static_cast<uint8_t>(RoomClass::Wall));
  }
  for (const Icon& ic : model.icons) {
    fill_rect(maps.icons, ic.bbox, static_cast<uint8_t>(ic.label));
  }
  for (const Opening& op : model.openings) {
    fill_rect(maps.icons, op.rect(), static_cast<uint8_t>(op.label));
  }
  return maps;
}

HeatmapStack render_heatmaps(const InterestPointSet& points, int width, int height, double sigma) {
  if (sigma <= 0) raise(Errc::InvalidArgument, "sigma must be positive");
  HeatmapStack stack(kNumChannels, height, width);
  // Beyond 15 sigma the response underflows float32 to zero, so the
  // truncated render is bit-identical to the full one.
  double radius = 15.0 * sigma;
  double inv = 1.0 / (2.0 * sigma * sigma);
  for (const InterestPoint& p : points.points) {
    if (p.location.x < 0 || p.location.y < 0 || p.location.x > width || p.location.y > height) {
      raise(Errc::PointOutOfFrame, kind_name(p.kind) + " at (" + fmt_point(p.location) +
                                       ") lies outside the frame");
    }
    int c = channel_index(p.kind);
    int x0 = std::max(0, static_cast<int>(std::ceil(p.location.x - radius)));
    int x1 = std::min(width - 1, static_cast<int>(std::floor(p.location.x + radius)));
    int y0 = std::max(0, static_cast<int>(std::ceil(p.location.y - radius)));
    int y1 = std::min(height - 1, static_cast<int>(std::floor(p.location.y + radius)));
    for (int y = y0; y <= y1; ++y) {
      double dy = y - p.location.y;
      for (int x = x0; x <= x1; ++x) {
        double dx = x - p.location.x;
        float v = static_cast<float>(std::exp(-(dx * dx + dy * dy) * inv));
        float& cell = stack.at(c, x, y);
        cell = std::max(cell, v);
      }
    }
  }
  return stack;
}

}  // namespace fpv
