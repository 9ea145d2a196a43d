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
#include <span>
#include <string>
#include <vector>

#include "image.hpp"
#include "model.hpp"

namespace fpv {

// Per-channel residual reduction for the heatmap loss. The default is mean
// squared error; the root variant keeps the unsquared-norm reading of the
// objective available for comparison. Both are means over pixels, so the
// loss scale is resolution independent.
enum class HeatmapResidual { MeanSquared, RootMeanSquared };

// Learned homoscedastic uncertainty weights: one sigma per heatmap channel
// plus one per segmentation task. All strictly positive.
struct UncertaintyParams {
  std::array<double, kNumChannels> sigma_heatmap;
  double sigma_rooms = 1.0;
  double sigma_icons = 1.0;

  static UncertaintyParams ones() {
    UncertaintyParams p;
    p.sigma_heatmap.fill(1.0);
    return p;
  }
};

// One heatmap channel: r/(2 sigma^2) + log(1 + sigma).
double heatmap_channel_term(double residual, double sigma);

// d/dsigma of the channel term: -r/sigma^3 + 1/(1+sigma).
double heatmap_channel_term_dsigma(double residual, double sigma);

// argmin over sigma of the channel term (golden-section search).
double optimal_sigma(double residual);

struct HeatmapLossPart {
  std::array<double, kNumChannels> per_channel{};
  double total = 0;
  std::array<double, kNumChannels> grad_sigma{};
  std::vector<double> grad_pred;  // same layout as pred.data
};

// Uncertainty-weighted heatmap regression loss over 21 channels with
// analytic gradients. Throws ShapeMismatch / NonPositiveSigma.
HeatmapLossPart heatmap_uncertainty_loss(const HeatmapStack& pred, const HeatmapStack& target,
                                         std::span<const double> sigmas,
                                         HeatmapResidual residual = HeatmapResidual::MeanSquared);

struct SegmentationLossPart {
  double term = 0;           // cross_entropy / sigma + log(sigma)
  double cross_entropy = 0;  // mean per-pixel CE of softmaxed logits
  double grad_sigma = 0;
  std::vector<double> grad_logits;  // same layout as logits.data
};

// Uncertainty-weighted cross-entropy: CE/sigma + log sigma (the weighting
// appears without squaring). logits is C x H x W, labels H x W with values
// < C. Throws ShapeMismatch / NonPositiveSigma / InvalidLabel.
SegmentationLossPart segmentation_uncertainty_loss(const HeatmapStack& logits,
                                                   const ClassRaster& labels, double sigma);

struct LossBreakdown {
  double total = 0;
  std::array<double, kNumChannels> per_channel_heatmap{};
  double rooms_term = 0;
  double icons_term = 0;

  std::array<double, kNumChannels> grad_sigma_heatmap{};
  std::vector<double> grad_heatmap_pred;
  std::vector<double> grad_rooms_logits;
  std::vector<double> grad_icons_logits;
  double grad_sigma_rooms = 0;
  double grad_sigma_icons = 0;
};

// Total objective: sum of the 21 heatmap terms plus the rooms and icons
// segmentation terms, with the full gradient set.
LossBreakdown total_loss(const HeatmapStack& pred_heat, const HeatmapStack& target_heat,
                         const HeatmapStack& rooms_logits, const ClassRaster& rooms_labels,
                         const HeatmapStack& icons_logits, const ClassRaster& icons_labels,
                         const UncertaintyParams& params,
                         HeatmapResidual residual = HeatmapResidual::MeanSquared);

struct GradCheckRow {
  std::string name;
  double max_rel_err = 0;
  bool pass = false;
};

// Randomized verification of every analytic gradient against central finite
// differences (step 1e-4, pass below 1e-5 relative). Backs the `loss-check`
// CLI command.
std::vector<GradCheckRow> run_gradient_checks(uint64_t seed, int instances);

}  // namespace fpv
