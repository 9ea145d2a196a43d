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

#include "image.hpp"
#include "model.hpp"

namespace fpv {

struct SynthConfig {
  uint64_t seed = 0;
  int width = 256;
  int height = 256;
  int rows = 2;
  int cols = 2;
  int wall_width_min = 2;
  int wall_width_max = 6;
  int icons_min = 0;
  int icons_max = 4;
  int openings_min = 0;
  int openings_max = 4;
  double min_separation = 8.0;  // pairwise same-kind interest point distance
};

// Deterministic per seed: a jittered rows x cols Manhattan room grid with
// walls split at every junction, rooms labeled uniformly over the eligible
// classes, icons inside rooms, openings on interior walls. The result
// always passes validate_model. Throws InfeasibleConfig when the frame
// cannot host the requested grid at the separation.
FloorplanModel generate(const SynthConfig& config);

struct CorruptParams {
  double gaussian_sigma = 0;  // clipped additive noise on heatmaps
  double dropout_prob = 0;    // per-pixel reset to Background/Empty
  double jitter_px = 0;       // peak relocation via re-rendering
  double render_sigma = 2.0;  // sigma used when jitter re-renders the stack
};

struct CorruptResult {
  SegmentationMaps maps;
  HeatmapStack stack;
};

// Deterministic per seed; all-zero parameters return bit-exact copies.
CorruptResult corrupt(const SegmentationMaps& maps, const HeatmapStack& stack,
                      const CorruptParams& params, uint64_t seed);

}  // namespace fpv
