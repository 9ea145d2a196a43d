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
#include "vectorize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>

#include "svg_io.hpp"

namespace fpv {

namespace {

bool is_junction(const InterestPoint& p) { return std::holds_alternative<JunctionType>(p.kind); }

unsigned arm_mask_of(const InterestPoint& p) {
  unsigned mask = 0;
  for (Dir d : junction_arms(std::get<JunctionType>(p.kind))) mask |= 1u << static_cast<int>(d);
  return mask;
}

void diag(std::vector<Diagnostic>* diags, std::string code, std::string message) {
  if (diags) diags->push_back({std::move(code), std::move(message)});
}

// Pixel column range whose centers fall in [lo, hi).
std::pair<int, int> center_span(double lo, double hi, int limit) {
  int i0 = std::max(0, static_cast<int>(std::ceil(lo - 0.5)));
  int i1 = std::min(limit - 1, static_cast<int>(std::ceil(hi - 0.5)) - 1);
  return {i0, i1};
}

uint8_t wall_code() { return static_cast<uint8_t>(RoomClass::Wall); }

double wall_fraction_on_line(const Point& a, const Point& b, const ClassRaster& map) {
  double len = distance(a, b);
  int steps = std::max(1, static_cast<int>(std::lround(len)));
  int hit = 0;
  for (int i = 0; i <= steps; ++i) {
    double t = static_cast<double>(i) / steps;
    int x = static_cast<int>(std::floor(a.x + (b.x - a.x) * t));
    int y = static_cast<int>(std::floor(a.y + (b.y - a.y) * t));
    if (map.in_bounds(x, y) && map.at(x, y) == wall_code()) ++hit;
  }
  return static_cast<double>(hit) / (steps + 1);
}

}  // namespace

InterestPointSet detect_peaks(const HeatmapStack& stack, double threshold, double nms_radius) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    raise(Errc::InvalidArgument, "peak threshold must lie in (0,1)");
  }
  if (nms_radius < 1.0) raise(Errc::InvalidArgument, "nms radius must be >= 1");

  struct Cand {
    float v;
    int x, y;
  };
  InterestPointSet out;
  for (int c = 0; c < stack.channels; ++c) {
    std::vector<Cand> cands;
    for (int y = 0; y < stack.height; ++y) {
      for (int x = 0; x < stack.width; ++x) {
        float v = stack.at(c, x, y);
        if (v < threshold) continue;
        bool is_max = true;
        for (int dy = -1; dy <= 1 && is_max; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= stack.width || ny >= stack.height) continue;
            if (stack.at(c, nx, ny) > v) {
              is_max = false;
              break;
            }
          }
        }
        if (is_max) cands.push_back({v, x, y});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.v != b.v) return a.v > b.v;
      return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    std::vector<Cand> kept;
    for (const Cand& cand : cands) {
      bool suppressed = false;
      for (const Cand& k : kept) {
        double d = std::hypot(cand.x - k.x, cand.y - k.y);
        if (d < nms_radius) {
          suppressed = true;
          break;
        }
      }
      if (!suppressed) kept.push_back(cand);
    }
    std::vector<InterestPoint> channel_points;
    for (const Cand& k : kept) {
      // Sub-pixel refinement: intensity centroid of the 3x3 neighborhood.
      double wsum = 0, xsum = 0, ysum = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          int nx = k.x + dx, ny = k.y + dy;
          if (nx < 0 || ny < 0 || nx >= stack.width || ny >= stack.height) continue;
          double w = stack.at(c, nx, ny);
          wsum += w;
          xsum += w * nx;
          ysum += w * ny;
        }
      }
      Point loc = wsum > 0 ? Point{xsum / wsum, ysum / wsum}
                           : Point{static_cast<double>(k.x), static_cast<double>(k.y)};
      channel_points.push_back({loc, kind_from_channel(c)});
    }
    std::sort(channel_points.begin(), channel_points.end(),
              [](const InterestPoint& a, const InterestPoint& b) {
                return a.location.y != b.location.y ? a.location.y < b.location.y
                                                    : a.location.x < b.location.x;
              });
    out.points.insert(out.points.end(), channel_points.begin(), channel_points.end());
  }
  return out;
}

WallSkeleton build_wall_skeleton(const InterestPointSet& points, const ClassRaster& rooms_map,
                                 const VectorizeConfig& config,
                                 std::vector<Diagnostic>* diagnostics) {
  const double tol = config.align_tol;
  std::vector<int> junctions;
  for (size_t i = 0; i < points.points.size(); ++i) {
    if (is_junction(points.points[i])) junctions.push_back(static_cast<int>(i));
  }

  struct Cand {
    double dist;
    int from, to;  // point indices; joint `from` faces dir, `to` faces opposite(dir)
    Dir dir;
  };
  std::vector<Cand> cands;
  for (size_t ii = 0; ii < junctions.size(); ++ii) {
    for (size_t jj = ii + 1; jj < junctions.size(); ++jj) {
      int i = junctions[ii], j = junctions[jj];
      const Point& pi = points.points[i].location;
      const Point& pj = points.points[j].location;
      unsigned mi = arm_mask_of(points.points[i]);
      unsigned mj = arm_mask_of(points.points[j]);
      if (std::abs(pi.y - pj.y) <= tol && std::abs(pi.x - pj.x) > tol) {
        int left = pi.x < pj.x ? i : j;
        int right = left == i ? j : i;
        unsigned ml = left == i ? mi : mj;
        unsigned mr = left == i ? mj : mi;
        if ((ml & (1u << static_cast<int>(Dir::East))) && (mr & (1u << static_cast<int>(Dir::West)))) {
          cands.push_back({std::abs(pi.x - pj.x), left, right, Dir::East});
        }
      }
      if (std::abs(pi.x - pj.x) <= tol && std::abs(pi.y - pj.y) > tol) {
        int top = pi.y < pj.y ? i : j;
        int bottom = top == i ? j : i;
        unsigned mt = top == i ? mi : mj;
        unsigned mb = top == i ? mj : mi;
        if ((mt & (1u << static_cast<int>(Dir::South))) &&
            (mb & (1u << static_cast<int>(Dir::North)))) {
          cands.push_back({std::abs(pi.y - pj.y), top, bottom, Dir::South});
        }
      }
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
  });

  // Greedy nearest-first pairing, each joint consumed at most once.
  std::map<std::pair<int, int>, bool> joint_used;  // (point, dir) -> used
  WallSkeleton skeleton;
  std::vector<std::pair<int, int>> raw;
  for (const Cand& c : cands) {
    auto key_from = std::make_pair(c.from, static_cast<int>(c.dir));
    auto key_to = std::make_pair(c.to, static_cast<int>(opposite(c.dir)));
    if (joint_used[key_from] || joint_used[key_to]) continue;
    joint_used[key_from] = joint_used[key_to] = true;
    raw.emplace_back(c.from, c.to);
  }
  std::sort(raw.begin(), raw.end());

  for (auto [i, j] : raw) {
    const Point& a = points.points[i].location;
    const Point& b = points.points[j].location;
    double fraction = wall_fraction_on_line(a, b, rooms_map);
    if (fraction < config.prune_min_wall_fraction) {
      diag(diagnostics, "segment-pruned",
           "segment " + std::to_string(i) + "-" + std::to_string(j) + " has wall support " +
               std::to_string(fraction) + " < " + std::to_string(config.prune_min_wall_fraction));
      continue;
    }
    skeleton.segments.emplace_back(i, j);
  }
  return skeleton;
}

double estimate_wall_width(const Point& a, const Point& b, const ClassRaster& rooms_map) {
  constexpr int kStations = 11;
  bool horizontal = std::abs(b.x - a.x) >= std::abs(b.y - a.y);
  std::vector<int> runs;
  runs.reserve(kStations);
  bool any = false;
  for (int s = 0; s < kStations; ++s) {
    // Stations span the middle 80% of the segment.
    double t = 0.1 + 0.8 * s / (kStations - 1);
    int x = static_cast<int>(std::floor(a.x + (b.x - a.x) * t));
    int y = static_cast<int>(std::floor(a.y + (b.y - a.y) * t));
    int run = 0;
    if (rooms_map.in_bounds(x, y) && rooms_map.at(x, y) == wall_code()) {
      run = 1;
      if (horizontal) {
        for (int yy = y - 1; yy >= 0 && rooms_map.at(x, yy) == wall_code(); --yy) ++run;
        for (int yy = y + 1; yy < rooms_map.height && rooms_map.at(x, yy) == wall_code(); ++yy) ++run;
      } else {
        for (int xx = x - 1; xx >= 0 && rooms_map.at(xx, y) == wall_code(); --xx) ++run;
        for (int xx = x + 1; xx < rooms_map.width && rooms_map.at(xx, y) == wall_code(); ++xx) ++run;
      }
      any = true;
    }
    runs.push_back(run);
  }
  if (!any) raise(Errc::NoWallPixels, "no station along the segment touches the Wall class");
  std::sort(runs.begin(), runs.end());
  return std::max(1.0, static_cast<double>(runs[kStations / 2]));
}

namespace {

struct SnappedJunction {
  int point;  // index into the full point set
  int x, y;   // snapped integer coordinates
};

// Cluster one axis of junction coordinates: sorted values chained while the
// gap stays within tol, each cluster snapped to the rounded mean.
void snap_axis(std::vector<std::pair<double, size_t>>& vals, std::vector<int>& out, double tol) {
  std::sort(vals.begin(), vals.end());
  size_t start = 0;
  while (start < vals.size()) {
    size_t end = start + 1;
    double sum = vals[start].first;
    while (end < vals.size() && vals[end].first - vals[end - 1].first <= tol) {
      sum += vals[end].first;
      ++end;
    }
    int snapped = static_cast<int>(std::lround(sum / (end - start)));
    for (size_t k = start; k < end; ++k) out[vals[k].second] = snapped;
    start = end;
  }
}

std::vector<SnappedJunction> snap_junctions(const InterestPointSet& points, double tol) {
  std::vector<SnappedJunction> snapped;
  for (size_t i = 0; i < points.points.size(); ++i) {
    if (is_junction(points.points[i])) {
      snapped.push_back({static_cast<int>(i), 0, 0});
    }
  }
  std::vector<std::pair<double, size_t>> xs, ys;
  for (size_t k = 0; k < snapped.size(); ++k) {
    xs.emplace_back(points.points[snapped[k].point].location.x, k);
    ys.emplace_back(points.points[snapped[k].point].location.y, k);
  }
  std::vector<int> sx(snapped.size()), sy(snapped.size());
  snap_axis(xs, sx, tol);
  snap_axis(ys, sy, tol);
  for (size_t k = 0; k < snapped.size(); ++k) {
    snapped[k].x = sx[k];
    snapped[k].y = sy[k];
  }
  return snapped;
}

}  // namespace

CellGrid build_cell_grid(const InterestPointSet& points, double align_tol) {
  std::vector<SnappedJunction> snapped = snap_junctions(points, align_tol);

  std::set<std::pair<int, int>> occupied;
  for (const SnappedJunction& s : snapped) occupied.insert({s.x, s.y});
  std::map<int, std::vector<int>> row_xs, col_ys;
  for (const auto& [x, y] : occupied) {
    row_xs[y].push_back(x);
    col_ys[x].push_back(y);
  }

  // Junction triplets: a corner plus a row partner plus a column partner
  // span a candidate rectangle.
  std::set<std::array<int, 4>> cand;
  for (const auto& [x, y] : occupied) {
    for (int bx : row_xs[y]) {
      if (bx == x) continue;
      for (int cy : col_ys[x]) {
        if (cy == y) continue;
        cand.insert({std::min(x, bx), std::min(y, cy), std::max(x, bx), std::max(y, cy)});
      }
    }
  }

  CellGrid grid;
  for (const auto& r : cand) {
    auto [x1, y1, x2, y2] = std::tuple{r[0], r[1], r[2], r[3]};
    bool empty = true;
    for (const auto& [px, py] : occupied) {
      bool inside = px > x1 && px < x2 && py > y1 && py < y2;
      bool on_v_edge = (px == x1 || px == x2) && py > y1 && py < y2;
      bool on_h_edge = (py == y1 || py == y2) && px > x1 && px < x2;
      if (inside || on_v_edge || on_h_edge) {
        empty = false;
        break;
      }
    }
    if (empty) grid.cells.push_back({x1, y1, x2, y2});
  }
  std::sort(grid.cells.begin(), grid.cells.end(), [](const CellGrid::Cell& a, const CellGrid::Cell& b) {
    if (a.y1 != b.y1) return a.y1 < b.y1;
    if (a.x1 != b.x1) return a.x1 < b.x1;
    if (a.y2 != b.y2) return a.y2 < b.y2;
    return a.x2 < b.x2;
  });

  for (size_t i = 0; i < grid.cells.size(); ++i) {
    for (size_t j = i + 1; j < grid.cells.size(); ++j) {
      const auto& a = grid.cells[i];
      const auto& b = grid.cells[j];
      if (a.x2 == b.x1 || b.x2 == a.x1) {
        int lo = std::max(a.y1, b.y1), hi = std::min(a.y2, b.y2);
        if (hi > lo) {
          grid.adjacency.push_back({static_cast<int>(i), static_cast<int>(j), true,
                                    static_cast<double>(a.x2 == b.x1 ? a.x2 : b.x2),
                                    static_cast<double>(lo), static_cast<double>(hi)});
        }
      }
      if (a.y2 == b.y1 || b.y2 == a.y1) {
        int lo = std::max(a.x1, b.x1), hi = std::min(a.x2, b.x2);
        if (hi > lo) {
          grid.adjacency.push_back({static_cast<int>(i), static_cast<int>(j), false,
                                    static_cast<double>(a.y2 == b.y1 ? a.y2 : b.y2),
                                    static_cast<double>(lo), static_cast<double>(hi)});
        }
      }
    }
  }
  return grid;
}

namespace {

// Majority class over pixels whose centers fall strictly inside the rect;
// Wall and Background never vote. Returns false when nothing votes.
bool vote_room_label(const ClassRaster& map, double x1, double y1, double x2, double y2,
                     RoomClass* out) {
  std::array<int64_t, kNumRoomClasses> counts{};
  auto [ix0, ix1] = center_span(x1, x2, map.width);
  auto [iy0, iy1] = center_span(y1, y2, map.height);
  for (int iy = iy0; iy <= iy1; ++iy) {
    for (int ix = ix0; ix <= ix1; ++ix) {
      uint8_t v = map.at(ix, iy);
      if (v >= kNumRoomClasses) continue;
      if (v == static_cast<uint8_t>(RoomClass::Wall) ||
          v == static_cast<uint8_t>(RoomClass::Background))
        continue;
      ++counts[v];
    }
  }
  int best = -1;
  int64_t best_count = 0;
  for (int c = 0; c < kNumRoomClasses; ++c) {
    if (counts[c] > best_count) {  // ties resolve to the lowest class code
      best = c;
      best_count = counts[c];
    }
  }
  if (best < 0) return false;
  *out = static_cast<RoomClass>(best);
  return true;
}

// Fraction of [lo,hi] on the given grid line covered by skeleton segments.
double skeleton_coverage(const std::vector<std::array<int, 4>>& segs, bool vertical, int coord,
                         int lo, int hi) {
  std::vector<std::pair<int, int>> ivals;
  for (const auto& s : segs) {
    auto [x1, y1, x2, y2] = std::tuple{s[0], s[1], s[2], s[3]};
    if (vertical) {
      if (x1 != x2 || x1 != coord) continue;
      int a = std::max(lo, std::min(y1, y2)), b = std::min(hi, std::max(y1, y2));
      if (b > a) ivals.emplace_back(a, b);
    } else {
      if (y1 != y2 || y1 != coord) continue;
      int a = std::max(lo, std::min(x1, x2)), b = std::min(hi, std::max(x1, x2));
      if (b > a) ivals.emplace_back(a, b);
    }
  }
  std::sort(ivals.begin(), ivals.end());
  int covered = 0, cursor = lo;
  for (auto [a, b] : ivals) {
    int from = std::max(cursor, a);
    if (b > from) {
      covered += b - from;
      cursor = b;
    }
  }
  return hi > lo ? static_cast<double>(covered) / (hi - lo) : 1.0;
}

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Trace the outer boundary of a union of integer rectangles. Returns loops
// as vertex lists; positive signed area marks outer boundaries.
std::vector<std::vector<Point>> trace_region(const std::vector<CellGrid::Cell>& cells) {
  int ox = cells[0].x1, oy = cells[0].y1, mx = cells[0].x2, my = cells[0].y2;
  for (const auto& c : cells) {
    ox = std::min(ox, c.x1);
    oy = std::min(oy, c.y1);
    mx = std::max(mx, c.x2);
    my = std::max(my, c.y2);
  }
  int w = mx - ox, h = my - oy;
  std::vector<uint8_t> mask(static_cast<size_t>(w) * h, 0);
  for (const auto& c : cells) {
    for (int y = c.y1 - oy; y < c.y2 - oy; ++y) {
      for (int x = c.x1 - ox; x < c.x2 - ox; ++x) mask[static_cast<size_t>(y) * w + x] = 1;
    }
  }
  auto inside = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < w && y < h && mask[static_cast<size_t>(y) * w + x] != 0;
  };

  // Directed unit edges with the region on the inside, oriented so outer
  // loops carry positive shoelace area: E along the top, S along the right,
  // W along the bottom, N along the left.
  struct Edge {
    int x, y;  // start vertex
    int dir;   // 0 E, 1 S, 2 W, 3 N
    bool used = false;
  };
  std::vector<Edge> edges;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!inside(x, y)) continue;
      if (!inside(x, y - 1)) edges.push_back({x, y, 0});
      if (!inside(x + 1, y)) edges.push_back({x + 1, y, 1});
      if (!inside(x, y + 1)) edges.push_back({x + 1, y + 1, 2});
      if (!inside(x - 1, y)) edges.push_back({x, y + 1, 3});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.y != b.y) return a.y < b.y;
    if (a.x != b.x) return a.x < b.x;
    return a.dir < b.dir;
  });
  std::map<std::pair<int, int>, std::vector<size_t>> outgoing;
  for (size_t i = 0; i < edges.size(); ++i) outgoing[{edges[i].x, edges[i].y}].push_back(i);

  constexpr int kDx[4] = {1, 0, -1, 0};
  constexpr int kDy[4] = {0, 1, 0, -1};
  std::vector<std::vector<Point>> loops;
  for (size_t start = 0; start < edges.size(); ++start) {
    if (edges[start].used) continue;
    std::vector<Point> loop;
    size_t cur = start;
    int guard = static_cast<int>(edges.size()) + 1;
    while (!edges[cur].used && guard-- > 0) {
      Edge& e = edges[cur];
      e.used = true;
      loop.push_back({static_cast<double>(e.x + ox), static_cast<double>(e.y + oy)});
      int nx = e.x + kDx[e.dir], ny = e.y + kDy[e.dir];
      auto it = outgoing.find({nx, ny});
      if (it == outgoing.end()) break;
      // Prefer the sharpest left turn so pinch points split into simple
      // loops.
      size_t next = SIZE_MAX;
      int best_turn = 5;
      for (size_t cand : it->second) {
        if (edges[cand].used) continue;
        int turn = (edges[cand].dir - e.dir + 5) % 4;  // 0 = sharp left ... 3 = reverse
        if (turn < best_turn) {
          best_turn = turn;
          next = cand;
        }
      }
      if (next == SIZE_MAX) break;
      cur = next;
    }
    // Drop collinear intermediate vertices.
    std::vector<Point> simplified;
    size_t n = loop.size();
    for (size_t i = 0; i < n; ++i) {
      const Point& prev = loop[(i + n - 1) % n];
      const Point& curp = loop[i];
      const Point& next = loop[(i + 1) % n];
      double cross = (curp.x - prev.x) * (next.y - curp.y) - (curp.y - prev.y) * (next.x - curp.x);
      if (cross != 0) simplified.push_back(curp);
    }
    if (simplified.size() >= 4) {
      // Deterministic start: lexicographically smallest vertex.
      size_t best = 0;
      for (size_t i = 1; i < simplified.size(); ++i) {
        if (simplified[i].y < simplified[best].y ||
            (simplified[i].y == simplified[best].y && simplified[i].x < simplified[best].x)) {
          best = i;
        }
      }
      std::rotate(simplified.begin(), simplified.begin() + best, simplified.end());
      loops.push_back(std::move(simplified));
    }
  }
  return loops;
}

}  // namespace

std::vector<Room> extract_rooms(const InterestPointSet& points, const ClassRaster& rooms_map,
                                const WallSkeleton& skeleton, const VectorizeConfig& config,
                                std::vector<Diagnostic>* diagnostics) {
  CellGrid grid = build_cell_grid(points, config.align_tol);
  if (grid.cells.empty()) return {};

  for (size_t i = 0; i < grid.cells.size(); ++i) {
    for (size_t j = i + 1; j < grid.cells.size(); ++j) {
      const auto& a = grid.cells[i];
      const auto& b = grid.cells[j];
      double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
      double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
      if (w > 0 && h > 0) {
        diag(diagnostics, "cell-overlap",
             "cells " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
    }
  }

  // Labels by majority vote.
  std::vector<RoomClass> labels(grid.cells.size(), RoomClass::Background);
  std::vector<bool> labeled(grid.cells.size(), false);
  for (size_t i = 0; i < grid.cells.size(); ++i) {
    const auto& c = grid.cells[i];
    RoomClass label;
    if (vote_room_label(rooms_map, c.x1, c.y1, c.x2, c.y2, &label)) {
      labels[i] = label;
      labeled[i] = true;
    } else {
      diag(diagnostics, "cell-unlabeled",
           "cell (" + std::to_string(c.x1) + "," + std::to_string(c.y1) + ")-(" +
               std::to_string(c.x2) + "," + std::to_string(c.y2) + ") has no votes");
    }
  }

  // Skeleton segments in the same snapped coordinates as the cells.
  std::vector<SnappedJunction> snapped = snap_junctions(points, config.align_tol);
  std::map<int, std::pair<int, int>> snap_of;
  for (const SnappedJunction& s : snapped) snap_of[s.point] = {s.x, s.y};
  std::vector<std::array<int, 4>> segs;
  for (auto [i, j] : skeleton.segments) {
    auto a = snap_of.find(i);
    auto b = snap_of.find(j);
    if (a == snap_of.end() || b == snap_of.end()) continue;
    segs.push_back({a->second.first, a->second.second, b->second.first, b->second.second});
  }

  // Merge neighbors: same label and no fully separating wall between them.
  Dsu dsu(grid.cells.size());
  for (const auto& adj : grid.adjacency) {
    if (!labeled[adj.a] || !labeled[adj.b] || labels[adj.a] != labels[adj.b]) continue;
    double cov = skeleton_coverage(segs, adj.vertical, static_cast<int>(adj.coord),
                                   static_cast<int>(adj.lo), static_cast<int>(adj.hi));
    if (cov < config.separating_coverage) dsu.unite(adj.a, adj.b);
  }

  std::map<int, std::vector<CellGrid::Cell>> groups;
  std::map<int, RoomClass> group_label;
  for (size_t i = 0; i < grid.cells.size(); ++i) {
    if (!labeled[i]) continue;
    int root = dsu.find(static_cast<int>(i));
    groups[root].push_back(grid.cells[i]);
    group_label[root] = labels[i];
  }

  std::vector<Room> rooms;
  for (auto& [root, cells] : groups) {
    auto loops = trace_region(cells);
    // The outer boundary is the positive loop with the largest area; extra
    // loops (holes, pinched lobes) are reported, not guessed at.
    double best_area = 0;
    int best = -1;
    for (size_t i = 0; i < loops.size(); ++i) {
      double a = signed_area(loops[i]);
      if (a > best_area) {
        best_area = a;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) continue;
    for (size_t i = 0; i < loops.size(); ++i) {
      if (static_cast<int>(i) != best) {
        diag(diagnostics, "room-extra-loop",
             "region dropped a " + std::string(signed_area(loops[i]) < 0 ? "hole" : "lobe") +
                 " of area " + std::to_string(std::abs(signed_area(loops[i]))));
      }
    }
    rooms.push_back({std::move(loops[best]), group_label[root]});
  }
  std::sort(rooms.begin(), rooms.end(), [](const Room& a, const Room& b) {
    const Point& p = a.polygon.front();
    const Point& q = b.polygon.front();
    return p.y != q.y ? p.y < q.y : p.x < q.x;
  });
  return rooms;
}

std::vector<Icon> extract_icons(const InterestPointSet& points, const ClassRaster& icons_map,
                                const VectorizeConfig& config,
                                std::vector<Diagnostic>* diagnostics) {
  const double tol = config.align_tol;
  std::array<std::vector<int>, 4> corners;  // by IconCorner
  for (size_t i = 0; i < points.points.size(); ++i) {
    if (const IconCorner* c = std::get_if<IconCorner>(&points.points[i].kind)) {
      corners[static_cast<int>(*c)].push_back(static_cast<int>(i));
    }
  }
  auto loc = [&](int i) -> const Point& { return points.points[i].location; };
  for (auto& list : corners) {
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      return loc(a).y != loc(b).y ? loc(a).y < loc(b).y : loc(a).x < loc(b).x;
    });
  }
  std::set<int> used;

  std::vector<Icon> icons;
  for (int nw : corners[static_cast<int>(IconCorner::NW)]) {
    const Point& p = loc(nw);
    auto pick = [&](IconCorner kind, auto&& predicate, auto&& cost) {
      int best = -1;
      double best_cost = 0;
      for (int cand : corners[static_cast<int>(kind)]) {
        if (used.count(cand) || !predicate(loc(cand))) continue;
        double c = cost(loc(cand));
        if (best < 0 || c < best_cost) {
          best = cand;
          best_cost = c;
        }
      }
      return best;
    };
    int ne = pick(
        IconCorner::NE,
        [&](const Point& q) { return std::abs(q.y - p.y) <= tol && q.x > p.x + tol; },
        [&](const Point& q) { return q.x - p.x; });
    int sw = pick(
        IconCorner::SW,
        [&](const Point& q) { return std::abs(q.x - p.x) <= tol && q.y > p.y + tol; },
        [&](const Point& q) { return q.y - p.y; });
    if (ne < 0 || sw < 0) {
      diag(diagnostics, "icon-quad-incomplete",
           "no aligned NE/SW corner for NW at (" + format_number(p.x) + "," + format_number(p.y) +
               ")");
      continue;
    }
    Point pne = loc(ne), psw = loc(sw);
    int se = pick(
        IconCorner::SE,
        [&](const Point& q) {
          return std::abs(q.x - pne.x) <= tol && std::abs(q.y - psw.y) <= tol;
        },
        [&](const Point& q) { return std::abs(q.x - pne.x) + std::abs(q.y - psw.y); });
    if (se < 0) {
      diag(diagnostics, "icon-quad-incomplete",
           "no SE corner closing the box at NW (" + format_number(p.x) + "," + format_number(p.y) +
               ")");
      continue;
    }
    Point pse = loc(se);
    used.insert({nw, ne, sw, se});
    Rect box{{(p.x + psw.x) / 2, (p.y + pne.y) / 2}, {(pne.x + pse.x) / 2, (psw.y + pse.y) / 2}};

    std::array<int64_t, kNumIconClasses> counts{};
    auto [ix0, ix1] = center_span(box.min.x, box.max.x, icons_map.width);
    auto [iy0, iy1] = center_span(box.min.y, box.max.y, icons_map.height);
    for (int iy = iy0; iy <= iy1; ++iy) {
      for (int ix = ix0; ix <= ix1; ++ix) {
        uint8_t v = icons_map.at(ix, iy);
        if (v == static_cast<uint8_t>(IconClass::Empty) || v >= kNumIconClasses) continue;
        ++counts[v];
      }
    }
    int best = -1;
    int64_t best_count = 0;
    for (int c = 0; c < kNumIconClasses; ++c) {
      if (counts[c] > best_count) {
        best = c;
        best_count = counts[c];
      }
    }
    if (best < 0) {
      diag(diagnostics, "icon-vote-empty", "icon box at (" + format_number(box.min.x) + "," +
                                               format_number(box.min.y) + ") votes Empty");
      continue;
    }
    icons.push_back({box, static_cast<IconClass>(best)});
  }
  return icons;
}

std::vector<Opening> extract_openings(const InterestPointSet& points, const ClassRaster& icons_map,
                                      std::span<const Wall> walls, const VectorizeConfig& config,
                                      std::vector<Diagnostic>* diagnostics) {
  const double tol = config.align_tol;
  auto wall_at = [&](const Point& p) -> const Wall* {
    for (const Wall& w : walls) {
      if (w.bounds().dilated(2.0).contains(p)) return &w;
    }
    return nullptr;
  };

  std::array<std::vector<int>, 4> ends;  // by OpeningEnd
  for (size_t i = 0; i < points.points.size(); ++i) {
    if (const OpeningEnd* e = std::get_if<OpeningEnd>(&points.points[i].kind)) {
      const Point& p = points.points[i].location;
      if (!wall_at(p)) {
        diag(diagnostics, "opening-endpoint-rejected",
             "endpoint at (" + format_number(p.x) + "," + format_number(p.y) +
                 ") falls outside the wall segmentation");
        continue;
      }
      ends[static_cast<int>(*e)].push_back(static_cast<int>(i));
    }
  }
  auto loc = [&](int i) -> const Point& { return points.points[i].location; };
  for (auto& list : ends) {
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      return loc(a).y != loc(b).y ? loc(a).y < loc(b).y : loc(a).x < loc(b).x;
    });
  }

  std::set<int> used;
  std::vector<Opening> openings;
  auto pair_up = [&](OpeningEnd from, OpeningEnd to, bool horizontal) {
    for (int s : ends[static_cast<int>(from)]) {
      if (used.count(s)) continue;
      const Point& p = loc(s);
      int best = -1;
      double best_d = 0;
      for (int t : ends[static_cast<int>(to)]) {
        if (used.count(t)) continue;
        const Point& q = loc(t);
        bool aligned = horizontal ? std::abs(q.y - p.y) <= tol && q.x > p.x + tol
                                  : std::abs(q.x - p.x) <= tol && q.y > p.y + tol;
        if (!aligned) continue;
        double d = horizontal ? q.x - p.x : q.y - p.y;
        if (best < 0 || d < best_d) {
          best = t;
          best_d = d;
        }
      }
      if (best < 0) continue;  // reported as unpaired after both passes
      used.insert({s, best});
      const Point& q = loc(best);
      Opening op;
      if (horizontal) {
        double yc = (p.y + q.y) / 2;
        op.a = {p.x, yc};
        op.b = {q.x, yc};
      } else {
        double xc = (p.x + q.x) / 2;
        op.a = {xc, p.y};
        op.b = {xc, q.y};
      }

      // Label: majority over Window/Door pixels under the segment.
      double len = distance(op.a, op.b);
      int steps = std::max(1, static_cast<int>(std::lround(len)));
      int64_t window = 0, door = 0;
      for (int i = 0; i <= steps; ++i) {
        double t = static_cast<double>(i) / steps;
        int x = static_cast<int>(std::floor(op.a.x + (op.b.x - op.a.x) * t));
        int y = static_cast<int>(std::floor(op.a.y + (op.b.y - op.a.y) * t));
        if (!icons_map.in_bounds(x, y)) continue;
        if (icons_map.at(x, y) == static_cast<uint8_t>(IconClass::Window)) ++window;
        if (icons_map.at(x, y) == static_cast<uint8_t>(IconClass::Door)) ++door;
      }
      if (window == 0 && door == 0) {
        diag(diagnostics, "opening-vote-empty",
             "no Window/Door pixels under segment at (" + format_number(op.a.x) + "," +
                 format_number(op.a.y) + ")");
        continue;
      }
      op.label = window >= door ? IconClass::Window : IconClass::Door;

      Point mid{(op.a.x + op.b.x) / 2, (op.a.y + op.b.y) / 2};
      const Wall* host = wall_at(mid);
      if (!host) host = wall_at(op.a);
      op.width = host ? host->width : 1.0;
      openings.push_back(op);
    }
  };
  pair_up(OpeningEnd::Left, OpeningEnd::Right, true);
  pair_up(OpeningEnd::Up, OpeningEnd::Down, false);
  for (const auto& list : ends) {
    for (int idx : list) {
      if (used.count(idx)) continue;
      const Point& p = loc(idx);
      diag(diagnostics, "opening-endpoint-unpaired",
           kind_name(points.points[idx].kind) + " at (" + format_number(p.x) + "," +
               format_number(p.y) + ") has no aligned opposite endpoint");
    }
  }

  std::sort(openings.begin(), openings.end(), [](const Opening& a, const Opening& b) {
    return a.a.y != b.a.y ? a.a.y < b.a.y : a.a.x < b.a.x;
  });
  return openings;
}

VectorizeResult vectorize(const SegmentationMaps& maps, const HeatmapStack& stack,
                          const VectorizeConfig& config) {
  if (maps.rooms.width != maps.icons.width || maps.rooms.height != maps.icons.height) {
    raise(Errc::ShapeMismatch, "rooms and icons maps disagree in size");
  }
  if (stack.channels != kNumChannels || stack.width != maps.rooms.width ||
      stack.height != maps.rooms.height) {
    raise(Errc::ShapeMismatch, "heatmap stack does not match the segmentation maps");
  }

  VectorizeResult result;
  InterestPointSet points = detect_peaks(stack, config.peak_threshold, config.nms_radius);

  WallSkeleton skeleton = build_wall_skeleton(points, maps.rooms, config, &result.diagnostics);

  std::vector<Wall> walls;
  WallSkeleton kept;
  for (auto [i, j] : skeleton.segments) {
    const Point& a = points.points[i].location;
    const Point& b = points.points[j].location;
    double width;
    try {
      width = estimate_wall_width(a, b, maps.rooms);
    } catch (const Error&) {
      diag(&result.diagnostics, "segment-no-wall-pixels",
           "segment " + std::to_string(i) + "-" + std::to_string(j) +
               " has no measurable width");
      continue;
    }
    Wall w;
    if (std::abs(b.x - a.x) >= std::abs(b.y - a.y)) {
      double yc = (a.y + b.y) / 2;
      w = {{a.x, yc}, {b.x, yc}, width};
    } else {
      double xc = (a.x + b.x) / 2;
      w = {{xc, a.y}, {xc, b.y}, width};
    }
    walls.push_back(w);
    kept.segments.emplace_back(i, j);
  }

  result.model.width = maps.rooms.width;
  result.model.height = maps.rooms.height;
  result.model.walls = std::move(walls);
  result.model.rooms = extract_rooms(points, maps.rooms, kept, config, &result.diagnostics);
  result.model.icons = extract_icons(points, maps.icons, config, &result.diagnostics);
  result.model.openings =
      extract_openings(points, maps.icons, result.model.walls, config, &result.diagnostics);
  return result;
}

}  // namespace fpv
