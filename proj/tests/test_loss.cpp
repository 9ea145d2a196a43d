#include <doctest.h>

#include <cmath>

#include "loss.hpp"
#include "rng.hpp"

using namespace fpv;

namespace {

// Test-side oracle: independent central finite differences over any scalar
// parameter of a loss evaluation.
template <typename Eval>
double central_difference(Eval&& eval, double step = 1e-4) {
  return (eval(step) - eval(-step)) / (2 * step);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8}); }

// Test-side oracle: bisection on the stated derivative -r/s^3 + 1/(1+s).
double bisect_sigma(double r) {
  auto f = [r](double s) { return -r / (s * s * s) + 1.0 / (1.0 + s); };
  double lo = 1e-9, hi = 2.0;
  while (f(hi) < 0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2;
    if (f(mid) < 0) lo = mid;
    else hi = mid;
  }
  return (lo + hi) / 2;
}

HeatmapStack const_stack(int c, int h, int w, float v) {
  HeatmapStack s(c, h, w);
  for (float& x : s.data) x = v;
  return s;
}

}  // namespace

TEST_CASE("zero residual leaves only the regularizer log(1+sigma)") {
  HeatmapStack pred = const_stack(kNumChannels, 3, 3, 0.25f);
  std::array<double, kNumChannels> sigmas;
  sigmas.fill(0.5);
  HeatmapLossPart part = heatmap_uncertainty_loss(pred, pred, sigmas);
  for (int c = 0; c < kNumChannels; ++c) {
    CHECK(part.per_channel[c] == doctest::Approx(0.405465).epsilon(1e-6));
  }
  CHECK(part.total == doctest::Approx(21 * std::log(1.5)).epsilon(1e-9));
}

TEST_CASE("unit residual at sigma 1 gives 0.5 + log 2 with gradient -0.5") {
  // Single live value on one channel of a 1x1 stack.
  HeatmapStack pred = const_stack(kNumChannels, 1, 1, 0.0f);
  HeatmapStack target = pred;
  pred.data[0] = 1.0f;
  std::array<double, kNumChannels> sigmas;
  sigmas.fill(1.0);
  HeatmapLossPart part = heatmap_uncertainty_loss(pred, target, sigmas);
  CHECK(part.per_channel[0] == doctest::Approx(1.193147).epsilon(1e-6));
  CHECK(part.grad_sigma[0] == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("uniform logits over 12 classes at sigma 1 cost log 12") {
  HeatmapStack logits = const_stack(12, 4, 4, 0.7f);
  ClassRaster labels(4, 4);
  Rng rng(5);
  for (uint8_t& l : labels.data) l = static_cast<uint8_t>(rng.uniform_int(0, 11));
  SegmentationLossPart part = segmentation_uncertainty_loss(logits, labels, 1.0);
  CHECK(part.term == doctest::Approx(2.484907).epsilon(1e-6));
  CHECK(part.cross_entropy == doctest::Approx(std::log(12.0)).epsilon(1e-9));
}

TEST_CASE("saturated logits at sigma 2 cost about log 2") {
  HeatmapStack logits = const_stack(5, 3, 3, 0.0f);
  ClassRaster labels(3, 3);
  size_t plane = 9;
  for (size_t i = 0; i < plane; ++i) {
    labels.data[i] = static_cast<uint8_t>(i % 5);
    logits.data[labels.data[i] * plane + i] = 50.0f;  // saturation approximates the limit
  }
  SegmentationLossPart part = segmentation_uncertainty_loss(logits, labels, 2.0);
  CHECK(part.term == doctest::Approx(std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("analytic heatmap gradients match independent finite differences") {
  Rng rng(1234);
  for (int inst = 0; inst < 30; ++inst) {
    int h = rng.uniform_int(1, 4), w = rng.uniform_int(1, 4);
    HeatmapStack pred(kNumChannels, h, w), target(kNumChannels, h, w);
    for (float& v : pred.data) v = static_cast<float>(rng.uniform_real());
    for (float& v : target.data) v = static_cast<float>(rng.uniform_real());
    std::array<double, kNumChannels> sigmas;
    for (double& s : sigmas) s = rng.uniform_real(0.3, 3.0);
    HeatmapLossPart part = heatmap_uncertainty_loss(pred, target, sigmas);

    int c = rng.uniform_int(0, kNumChannels - 1);
    double fd_sigma = central_difference([&](double eps) {
      auto s2 = sigmas;
      s2[c] += eps;
      return heatmap_uncertainty_loss(pred, target, s2).total;
    });
    CHECK(rel_err(fd_sigma, part.grad_sigma[c]) < 1e-5);

    size_t idx = rng.next() % pred.data.size();
    float saved = pred.data[idx];
    double step = 1e-4;
    pred.data[idx] = saved + static_cast<float>(step);
    double up = heatmap_uncertainty_loss(pred, target, sigmas).total;
    double hi = pred.data[idx];
    pred.data[idx] = saved - static_cast<float>(step);
    double down = heatmap_uncertainty_loss(pred, target, sigmas).total;
    double lo = pred.data[idx];
    pred.data[idx] = saved;
    double fd_pred = (up - down) / (hi - lo);
    CHECK(rel_err(fd_pred, part.grad_pred[idx]) < 1e-5);
  }
}

TEST_CASE("analytic segmentation gradients match independent finite differences") {
  Rng rng(4321);
  for (int inst = 0; inst < 30; ++inst) {
    int nclasses = rng.uniform_int(3, 12);
    HeatmapStack logits(nclasses, 4, 4);
    for (float& v : logits.data) v = static_cast<float>(rng.uniform_real(-2, 2));
    ClassRaster labels(4, 4);
    for (uint8_t& l : labels.data) l = static_cast<uint8_t>(rng.uniform_int(0, nclasses - 1));
    double sigma = rng.uniform_real(0.3, 3.0);
    SegmentationLossPart part = segmentation_uncertainty_loss(logits, labels, sigma);

    double fd_sigma = central_difference([&](double eps) {
      return segmentation_uncertainty_loss(logits, labels, sigma + eps).term;
    });
    CHECK(rel_err(fd_sigma, part.grad_sigma) < 1e-5);

    size_t idx = rng.next() % logits.data.size();
    float saved = logits.data[idx];
    double step = 1e-4;
    logits.data[idx] = saved + static_cast<float>(step);
    double up = segmentation_uncertainty_loss(logits, labels, sigma).term;
    double hi = logits.data[idx];
    logits.data[idx] = saved - static_cast<float>(step);
    double down = segmentation_uncertainty_loss(logits, labels, sigma).term;
    double lo = logits.data[idx];
    logits.data[idx] = saved;
    double fd = (up - down) / (hi - lo);
    CHECK(rel_err(fd, part.grad_logits[idx]) < 1e-5);
  }
}

TEST_CASE("gradient check with the RMS residual variant") {
  Rng rng(99);
  HeatmapStack pred(kNumChannels, 3, 3), target(kNumChannels, 3, 3);
  for (float& v : pred.data) v = static_cast<float>(rng.uniform_real());
  for (float& v : target.data) v = static_cast<float>(rng.uniform_real());
  std::array<double, kNumChannels> sigmas;
  sigmas.fill(1.3);
  HeatmapLossPart part =
      heatmap_uncertainty_loss(pred, target, sigmas, HeatmapResidual::RootMeanSquared);
  double fd = central_difference([&](double eps) {
    auto s2 = sigmas;
    s2[4] += eps;
    return heatmap_uncertainty_loss(pred, target, s2, HeatmapResidual::RootMeanSquared).total;
  });
  CHECK(rel_err(fd, part.grad_sigma[4]) < 1e-5);
}

TEST_CASE("total_loss equals the sum of its parts") {
  Rng rng(7);
  HeatmapStack pred(kNumChannels, 4, 4), target(kNumChannels, 4, 4);
  for (float& v : pred.data) v = static_cast<float>(rng.uniform_real());
  for (float& v : target.data) v = static_cast<float>(rng.uniform_real());
  HeatmapStack rooms_logits(kNumRoomClasses, 4, 4), icons_logits(kNumIconClasses, 4, 4);
  for (float& v : rooms_logits.data) v = static_cast<float>(rng.uniform_real(-2, 2));
  for (float& v : icons_logits.data) v = static_cast<float>(rng.uniform_real(-2, 2));
  ClassRaster rooms_labels(4, 4), icons_labels(4, 4);
  for (uint8_t& l : rooms_labels.data) l = static_cast<uint8_t>(rng.uniform_int(0, 11));
  for (uint8_t& l : icons_labels.data) l = static_cast<uint8_t>(rng.uniform_int(0, 10));
  UncertaintyParams params = UncertaintyParams::ones();
  for (double& s : params.sigma_heatmap) s = rng.uniform_real(0.5, 2.0);
  params.sigma_rooms = 0.8;
  params.sigma_icons = 1.7;

  LossBreakdown breakdown = total_loss(pred, target, rooms_logits, rooms_labels, icons_logits,
                                       icons_labels, params);
  double sum = breakdown.rooms_term + breakdown.icons_term;
  for (double v : breakdown.per_channel_heatmap) sum += v;
  CHECK(std::abs(breakdown.total - sum) <= 1e-9 * std::max(1.0, std::abs(sum)));

  // Zero-residual additivity: heatmap terms collapse to the regularizers.
  LossBreakdown zero = total_loss(pred, pred, rooms_logits, rooms_labels, icons_logits,
                                  icons_labels, params);
  double reg = 0;
  for (double s : params.sigma_heatmap) reg += std::log1p(s);
  double zero_heat = 0;
  for (double v : zero.per_channel_heatmap) zero_heat += v;
  CHECK(zero_heat == doctest::Approx(reg).epsilon(1e-9));
}

TEST_CASE("the heatmap term is non-negative for all inputs") {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    double r = rng.uniform_real(0, 10);
    double s = rng.uniform_real(1e-3, 10);
    CHECK(heatmap_channel_term(r, s) >= 0.0);
  }
}

TEST_CASE("optimal sigma agrees with the bisection oracle and is monotone in r") {
  double last = 0;
  for (double r : {0.1, 1.0, 10.0}) {
    double numeric = optimal_sigma(r);
    double oracle = bisect_sigma(r);
    CHECK(std::abs(numeric - oracle) < 1e-6);
    CHECK(numeric > last);
    last = numeric;
  }
}

TEST_CASE("channel term is unimodal: decreasing before sigma*, increasing after") {
  for (double r : {0.1, 1.0, 2.0, 10.0}) {
    double star = bisect_sigma(r);
    double prev = heatmap_channel_term(r, star / 64);
    for (double s = star / 32; s < star; s *= 2) {
      double cur = heatmap_channel_term(r, s);
      CHECK(cur < prev);
      prev = cur;
    }
    prev = heatmap_channel_term(r, star * 1.01);
    for (double s = star * 2; s < star * 64; s *= 2) {
      double cur = heatmap_channel_term(r, s);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("scaling the residual strictly increases the optimal sigma") {
  double r = 0.05;
  double prev = bisect_sigma(r);
  for (int i = 0; i < 8; ++i) {
    r *= 2.5;
    double cur = bisect_sigma(r);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("loss kernels validate their inputs") {
  HeatmapStack a(kNumChannels, 2, 2), b(kNumChannels, 2, 3);
  std::array<double, kNumChannels> sigmas;
  sigmas.fill(1.0);
  CHECK_THROWS_AS(heatmap_uncertainty_loss(a, b, sigmas), Error);
  sigmas[3] = 0.0;
  CHECK_THROWS_AS(heatmap_uncertainty_loss(a, a, sigmas), Error);

  HeatmapStack logits(4, 2, 2);
  ClassRaster labels(2, 2, 7);  // label out of range
  CHECK_THROWS_AS(segmentation_uncertainty_loss(logits, labels, 1.0), Error);
  ClassRaster good(2, 2, 1);
  CHECK_THROWS_AS(segmentation_uncertainty_loss(logits, good, 0.0), Error);
  CHECK_THROWS_AS(segmentation_uncertainty_loss(logits, good, -1.0), Error);
}

TEST_CASE("the packaged gradient verification suite passes") {
  std::vector<GradCheckRow> rows = run_gradient_checks(17, 25);
  REQUIRE(rows.size() == 4);
  for (const GradCheckRow& row : rows) {
    INFO(row.name, " max_rel_err=", row.max_rel_err);
    CHECK(row.pass);
  }
}
