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
#include "loss.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"

namespace fpv {

double heatmap_channel_term(double residual, double sigma) {
  return residual / (2.0 * sigma * sigma) + std::log1p(sigma);
}

double heatmap_channel_term_dsigma(double residual, double sigma) {
  return -residual / (sigma * sigma * sigma) + 1.0 / (1.0 + sigma);
}

double optimal_sigma(double residual) {
  if (residual <= 0) raise(Errc::InvalidArgument, "residual must be positive");
  double lo = 1e-9;
  double hi = 2.0;
  while (heatmap_channel_term_dsigma(residual, hi) < 0) hi *= 2.0;
  // Golden-section search on the unimodal channel term.
  constexpr double kPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kPhi * (b - a);
  double x2 = a + kPhi * (b - a);
  double f1 = heatmap_channel_term(residual, x1);
  double f2 = heatmap_channel_term(residual, x2);
  for (int i = 0; i < 200 && b - a > 1e-12; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kPhi * (b - a);
      f1 = heatmap_channel_term(residual, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kPhi * (b - a);
      f2 = heatmap_channel_term(residual, x2);
    }
  }
  return (a + b) / 2.0;
}

HeatmapLossPart heatmap_uncertainty_loss(const HeatmapStack& pred, const HeatmapStack& target,
                                         std::span<const double> sigmas, HeatmapResidual residual) {
  if (pred.channels != target.channels || pred.height != target.height ||
      pred.width != target.width) {
    raise(Errc::ShapeMismatch, "pred and target shapes disagree");
  }
  if (pred.channels != kNumChannels) {
    raise(Errc::ShapeMismatch, "heatmap loss expects 21 channels");
  }
  if (sigmas.size() != static_cast<size_t>(kNumChannels)) {
    raise(Errc::ShapeMismatch, "need one sigma per channel");
  }
  for (double s : sigmas) {
    if (!(s > 0)) raise(Errc::NonPositiveSigma, "sigma must be strictly positive");
  }

  HeatmapLossPart out;
  size_t plane = static_cast<size_t>(pred.height) * pred.width;
  out.grad_pred.assign(pred.data.size(), 0.0);
  for (int c = 0; c < kNumChannels; ++c) {
    const float* p = pred.data.data() + c * plane;
    const float* t = target.data.data() + c * plane;
    double sq = 0;
    for (size_t i = 0; i < plane; ++i) {
      double d = static_cast<double>(p[i]) - static_cast<double>(t[i]);
      sq += d * d;
    }
    double mse = sq / static_cast<double>(plane);
    double sigma = sigmas[c];
    double r = residual == HeatmapResidual::MeanSquared ? mse : std::sqrt(mse);
    out.per_channel[c] = heatmap_channel_term(r, sigma);
    out.grad_sigma[c] = heatmap_channel_term_dsigma(r, sigma);
    out.total += out.per_channel[c];

    double* g = out.grad_pred.data() + c * plane;
    if (residual == HeatmapResidual::MeanSquared) {
      double scale = 1.0 / (sigma * sigma * static_cast<double>(plane));
      for (size_t i = 0; i < plane; ++i) {
        g[i] = (static_cast<double>(p[i]) - static_cast<double>(t[i])) * scale;
      }
    } else if (r > 0) {
      // d(sqrt(mse))/dp = d / (n * sqrt(mse)); term scales it by 1/(2 sigma^2).
      double scale = 1.0 / (2.0 * sigma * sigma * static_cast<double>(plane) * r);
      for (size_t i = 0; i < plane; ++i) {
        g[i] = (static_cast<double>(p[i]) - static_cast<double>(t[i])) * scale;
      }
    }
  }
  return out;
}

SegmentationLossPart segmentation_uncertainty_loss(const HeatmapStack& logits,
                                                   const ClassRaster& labels, double sigma) {
  if (logits.width != labels.width || logits.height != labels.height) {
    raise(Errc::ShapeMismatch, "logits and labels shapes disagree");
  }
  if (!(sigma > 0)) raise(Errc::NonPositiveSigma, "sigma must be strictly positive");
  int nclasses = logits.channels;
  size_t plane = static_cast<size_t>(logits.height) * logits.width;

  SegmentationLossPart out;
  out.grad_logits.assign(logits.data.size(), 0.0);
  double ce_sum = 0;
  std::vector<double> probs(nclasses);
  for (size_t i = 0; i < plane; ++i) {
    uint8_t label = labels.data[i];
    if (label >= nclasses) raise(Errc::InvalidLabel, "label code exceeds class count");
    // Stable log-softmax.
    double maxv = -1e300;
    for (int c = 0; c < nclasses; ++c) {
      maxv = std::max(maxv, static_cast<double>(logits.data[c * plane + i]));
    }
    double denom = 0;
    for (int c = 0; c < nclasses; ++c) {
      probs[c] = std::exp(static_cast<double>(logits.data[c * plane + i]) - maxv);
      denom += probs[c];
    }
    double log_denom = std::log(denom);
    ce_sum += log_denom - (static_cast<double>(logits.data[label * plane + i]) - maxv);
    double gscale = 1.0 / (sigma * static_cast<double>(plane));
    for (int c = 0; c < nclasses; ++c) {
      double softmax = probs[c] / denom;
      out.grad_logits[c * plane + i] = (softmax - (c == label ? 1.0 : 0.0)) * gscale;
    }
  }
  out.cross_entropy = ce_sum / static_cast<double>(plane);
  out.term = out.cross_entropy / sigma + std::log(sigma);
  out.grad_sigma = -out.cross_entropy / (sigma * sigma) + 1.0 / sigma;
  return out;
}

LossBreakdown total_loss(const HeatmapStack& pred_heat, const HeatmapStack& target_heat,
                         const HeatmapStack& rooms_logits, const ClassRaster& rooms_labels,
                         const HeatmapStack& icons_logits, const ClassRaster& icons_labels,
                         const UncertaintyParams& params, HeatmapResidual residual) {
  LossBreakdown out;
  HeatmapLossPart heat = heatmap_uncertainty_loss(
      pred_heat, target_heat, std::span<const double>(params.sigma_heatmap), residual);
  SegmentationLossPart rooms =
      segmentation_uncertainty_loss(rooms_logits, rooms_labels, params.sigma_rooms);
  SegmentationLossPart icons =
      segmentation_uncertainty_loss(icons_logits, icons_labels, params.sigma_icons);

  out.per_channel_heatmap = heat.per_channel;
  out.grad_sigma_heatmap = heat.grad_sigma;
  out.grad_heatmap_pred = std::move(heat.grad_pred);
  out.rooms_term = rooms.term;
  out.icons_term = icons.term;
  out.grad_rooms_logits = std::move(rooms.grad_logits);
  out.grad_icons_logits = std::move(icons.grad_logits);
  out.grad_sigma_rooms = rooms.grad_sigma;
  out.grad_sigma_icons = icons.grad_sigma;
  out.total = heat.total + rooms.term + icons.term;
  return out;
}

namespace {

double rel_err(double a, double b) {
  double scale = std::max({std::abs(a), std::abs(b), 1e-8});
  return std::abs(a - b) / scale;
}

HeatmapStack random_stack(Rng& rng, int c, int h, int w, double lo, double hi) {
  HeatmapStack s(c, h, w);
  for (float& v : s.data) v = static_cast<float>(rng.uniform_real(lo, hi));
  return s;
}

}  // namespace

std::vector<GradCheckRow> run_gradient_checks(uint64_t seed, int instances) {
  constexpr double kStep = 1e-4;
  constexpr double kPass = 1e-5;
  Rng rng(seed);
  GradCheckRow heat_sigma{"heatmap d/dsigma", 0, false};
  GradCheckRow heat_pred{"heatmap d/dpred", 0, false};
  GradCheckRow seg_sigma{"segmentation d/dsigma", 0, false};
  GradCheckRow seg_logits{"segmentation d/dlogits", 0, false};

  for (int inst = 0; inst < instances; ++inst) {
    int h = rng.uniform_int(2, 5), w = rng.uniform_int(2, 5);
    HeatmapStack pred = random_stack(rng, kNumChannels, h, w, 0.0, 1.0);
    HeatmapStack target = random_stack(rng, kNumChannels, h, w, 0.0, 1.0);
    std::array<double, kNumChannels> sigmas;
    for (double& s : sigmas) s = rng.uniform_real(0.3, 3.0);

    HeatmapLossPart part = heatmap_uncertainty_loss(pred, target, sigmas);
    auto total_at = [&](const std::array<double, kNumChannels>& sg, const HeatmapStack& pr) {
      return heatmap_uncertainty_loss(pr, target, sg).total;
    };
    {
      int c = rng.uniform_int(0, kNumChannels - 1);
      auto plus = sigmas, minus = sigmas;
      plus[c] += kStep;
      minus[c] -= kStep;
      double fd = (total_at(plus, pred) - total_at(minus, pred)) / (2 * kStep);
      heat_sigma.max_rel_err = std::max(heat_sigma.max_rel_err, rel_err(fd, part.grad_sigma[c]));
    }
    {
      size_t idx = rng.next() % pred.data.size();
      HeatmapStack plus = pred, minus = pred;
      plus.data[idx] += static_cast<float>(kStep);
      minus.data[idx] -= static_cast<float>(kStep);
      double fd = (total_at(sigmas, plus) - total_at(sigmas, minus)) /
                  (static_cast<double>(plus.data[idx]) - static_cast<double>(minus.data[idx]));
      heat_pred.max_rel_err = std::max(heat_pred.max_rel_err, rel_err(fd, part.grad_pred[idx]));
    }

    int nclasses = rng.uniform_int(3, 12);
    HeatmapStack logits = random_stack(rng, nclasses, h, w, -2.0, 2.0);
    ClassRaster labels(w, h);
    for (uint8_t& l : labels.data) l = static_cast<uint8_t>(rng.uniform_int(0, nclasses - 1));
    double sigma = rng.uniform_real(0.3, 3.0);
    SegmentationLossPart seg = segmentation_uncertainty_loss(logits, labels, sigma);
    {
      double fd = (segmentation_uncertainty_loss(logits, labels, sigma + kStep).term -
                   segmentation_uncertainty_loss(logits, labels, sigma - kStep).term) /
                  (2 * kStep);
      seg_sigma.max_rel_err = std::max(seg_sigma.max_rel_err, rel_err(fd, seg.grad_sigma));
    }
    {
      size_t idx = rng.next() % logits.data.size();
      HeatmapStack plus = logits, minus = logits;
      plus.data[idx] += static_cast<float>(kStep);
      minus.data[idx] -= static_cast<float>(kStep);
      double fd = (segmentation_uncertainty_loss(plus, labels, sigma).term -
                   segmentation_uncertainty_loss(minus, labels, sigma).term) /
                  (static_cast<double>(plus.data[idx]) - static_cast<double>(minus.data[idx]));
      seg_logits.max_rel_err = std::max(seg_logits.max_rel_err, rel_err(fd, seg.grad_logits[idx]));
    }
  }

  std::vector<GradCheckRow> rows = {heat_sigma, heat_pred, seg_sigma, seg_logits};
  for (GradCheckRow& r : rows) r.pass = r.max_rel_err < kPass;
  return rows;
}

}  // namespace fpv
