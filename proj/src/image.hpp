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
#include <vector>

#include "error.hpp"

namespace fpv {

template <typename T>
struct Image {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Image() = default;
  Image(int w, int h, T fill = T{}) : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) raise(Errc::InvalidArgument, "image dimensions must be positive");
  }

  T& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  const T& at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }

  friend bool operator==(const Image&, const Image&) = default;
};

using ClassRaster = Image<uint8_t>;

// rooms holds RoomClass codes 0..11, icons holds IconClass codes 0..10.
struct SegmentationMaps {
  ClassRaster rooms;
  ClassRaster icons;

  friend bool operator==(const SegmentationMaps&, const SegmentationMaps&) = default;
};

// 21 x H x W float raster, values in [0,1], row-major per channel. The
// heatmap grid samples at integer pixel coordinates (channel c, pixel (x,y)
// holds the field value at location (x,y)).
struct HeatmapStack {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  HeatmapStack() = default;
  HeatmapStack(int c, int h, int w)
      : channels(c), height(h), width(w), data(static_cast<size_t>(c) * h * w, 0.0f) {
    if (c <= 0 || h <= 0 || w <= 0) raise(Errc::InvalidArgument, "stack dimensions must be positive");
  }

  float& at(int c, int x, int y) {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
  float at(int c, int x, int y) const {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }

  friend bool operator==(const HeatmapStack&, const HeatmapStack&) = default;
};

}  // namespace fpv
