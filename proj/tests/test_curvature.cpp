#include <cmath>

#include <gtest/gtest.h>

#include "wlab/curvature.hpp"

namespace {

using wlab::WarpParams;

// Ricci of dr^2 + f^2 g_{S^{p-1}} + h^2 dt^2 from profile values obtained by
// Richardson-extrapolated differences of the bare formulas.
struct Oracle {
  double H, U, V;
};

Oracle ricci_oracle(double alpha, int p, double r) {
  auto f = [](double x) { return x * std::pow(1.0 + x * x, -0.25); };
  auto h = [&](double x) { return std::pow(1.0 + x * x, -alpha); };
  auto der = [](auto fn, double x, double e) {
    const double d1 = (-fn(x + 2 * e) + 8 * fn(x + e) - 8 * fn(x - e) + fn(x - 2 * e)) / (12 * e);
    const double d2 = (-fn(x + 2 * e) + 16 * fn(x + e) - 30 * fn(x) + 16 * fn(x - e) - fn(x - 2 * e)) / (12 * e * e);
    return std::pair{d1, d2};
  };
  const double e = 1e-3 * std::max(r, 1e-2);
  const auto [f1, f2] = der(f, r, e);
  const auto [h1, h2] = der(h, r, e);
  const double fv = f(r), hv = h(r);
  const double n = p - 1;
  return {-n * f2 / fv - h2 / hv, -f2 / fv + (n - 1) * (1 - f1 * f1) / (fv * fv) - f1 * h1 / (fv * hv),
          -h2 / hv - n * f1 * h1 / (fv * hv)};
}

TEST(Curvature, MatchesIndependentFormulas) {
  for (auto [alpha, p] : {std::pair{0.5, 9}, {1.0, 25}, {1.0, 5}, {0.25, 4}}) {
    for (double r : {0.05, 0.5, 1.0, 2.0, 10.0, 100.0}) {
      const auto got = wlab::ricci_diag(WarpParams{alpha, p}, r);
      const auto want = ricci_oracle(alpha, p, r);
      const double scale = std::abs(want.H) + std::abs(want.U) + std::abs(want.V);
      EXPECT_NEAR(got.ric_H, want.H, 1e-6 * scale) << alpha << ' ' << p << ' ' << r;
      EXPECT_NEAR(got.ric_U, want.U, 1e-6 * scale) << alpha << ' ' << p << ' ' << r;
      EXPECT_NEAR(got.ric_V, want.V, 1e-6 * scale) << alpha << ' ' << p << ' ' << r;
    }
  }
}

TEST(Curvature, PositiveAtThresholdExample) {
  const auto rd = wlab::ricci_diag(WarpParams{1.0, 25}, 1.0);
  EXPECT_GT(rd.ric_H, 0.0);
  EXPECT_GT(rd.ric_U, 0.0);
  EXPECT_GT(rd.ric_V, 0.0);
}

TEST(Curvature, LimitsAtOrigin) {
  for (auto [alpha, p] : {std::pair{1.0, 25}, {0.5, 9}, {0.75, 16}}) {
    const WarpParams params{alpha, p};
    const auto lim = wlab::limit_at_origin(params);
    EXPECT_DOUBLE_EQ(lim.ric_H, 2 * alpha + 1.5 * (p - 1));
    EXPECT_DOUBLE_EQ(lim.ric_U, 2 * alpha + 1.5 * (p - 1));
    // -h''/h - (p-1) f'h'/(f h) -> 2 alpha + (p-1) 2 alpha.
    EXPECT_DOUBLE_EQ(lim.ric_V, 2 * alpha * p);
    const auto near = wlab::ricci_diag(params, 1e-8);
    EXPECT_NEAR(near.ric_H, lim.ric_H, 1e-4 * lim.ric_H);
    EXPECT_NEAR(near.ric_U, lim.ric_U, 1e-4 * lim.ric_U);
    EXPECT_NEAR(near.ric_V, lim.ric_V, 1e-4 * lim.ric_V);
    EXPECT_TRUE(std::isfinite(lim.ric_H) && std::isfinite(lim.ric_U) && std::isfinite(lim.ric_V));
  }
}

TEST(Curvature, DimensionThreshold) {
  EXPECT_EQ(wlab::dimension_threshold(0.5), 9);
  EXPECT_EQ(wlab::dimension_threshold(1.0), 25);
  EXPECT_EQ(wlab::dimension_threshold(0.25), 4);
  EXPECT_EQ(wlab::dimension_threshold(0.75), 16);
  EXPECT_EQ(wlab::dimension_threshold(1.5), 49);
  EXPECT_THROW(wlab::dimension_threshold(0.0), wlab::DomainError);
  for (double a = 0.05; a < 3.0; a += 0.07) {
    const int p = wlab::dimension_threshold(a);
    EXPECT_GE(p, std::max(4 * a + 3, 16 * a * a + 8 * a + 1) - 1e-9);
    EXPECT_LT(p - 1, std::max(4 * a + 3, 16 * a * a + 8 * a + 1) - 1e-9);
  }
}

TEST(Curvature, ScanAtThresholdPasses) {
  const auto grid = wlab::log_grid(1e-3, 1e4, 500);
  ASSERT_EQ(grid.size(), 500u);
  EXPECT_DOUBLE_EQ(grid.front(), 1e-3);
  EXPECT_NEAR(grid.back(), 1e4, 1e-9);
  for (double alpha : {0.25, 0.5, 1.0, 1.5}) {
    const WarpParams params{alpha, wlab::dimension_threshold(alpha)};
    const auto rep = wlab::positivity_scan(params, grid);
    EXPECT_TRUE(rep.pass()) << alpha;
    EXPECT_TRUE(rep.threshold_met);
    EXPECT_GT(rep.min_H.value, 0.0);
    EXPECT_GT(rep.min_U.value, 0.0);
    EXPECT_GT(rep.min_V.value, 0.0);
  }
}

TEST(Curvature, BoundsAtExample) {
  const WarpParams params{0.5, 9};
  EXPECT_DOUBLE_EQ(wlab::ric_H_lower_bound(params, 10.0), 0.0);
  const auto rd = wlab::ricci_diag(params, 10.0);
  EXPECT_GT(rd.ric_H, 0.0);
  EXPECT_GT(rd.ric_V, wlab::ric_V_lower_bound(params, 10.0));
  const std::vector<double> one{1.0};
  EXPECT_TRUE(wlab::positivity_scan(params, one).pass());
}

TEST(Curvature, BelowThresholdIsReportedNotAsserted) {
  const WarpParams params{1.0, 5};
  const auto rep = wlab::positivity_scan(params, wlab::log_grid(1e-3, 1e4, 500));
  EXPECT_FALSE(rep.threshold_met);
  if (rep.all_positive) {
    EXPECT_EQ(rep.first_nonpositive, "");
    EXPECT_NE(rep.verdict().find("positive"), std::string::npos);
  } else {
    EXPECT_FALSE(rep.first_nonpositive.empty());
    EXPECT_NE(rep.verdict().find(rep.first_nonpositive), std::string::npos);
  }
  const auto js = wlab::to_json(rep);
  EXPECT_EQ(js.at("p"), 5);
  EXPECT_TRUE(js.contains("verdict"));
}

TEST(Curvature, InvalidInputs) {
  EXPECT_THROW(wlab::ricci_diag(WarpParams{1.0, 25}, 0.0), wlab::DomainError);
  EXPECT_THROW(wlab::ricci_diag(WarpParams{1.0, 25}, -1.0), wlab::DomainError);
  std::vector<double> empty;
  EXPECT_THROW(wlab::positivity_scan(WarpParams{1.0, 25}, empty), wlab::PreconditionError);
  std::vector<double> bad{1.0, 0.0};
  EXPECT_THROW(wlab::positivity_scan(WarpParams{1.0, 25}, bad), wlab::PreconditionError);
  EXPECT_THROW(wlab::log_grid(0.0, 1.0, 3), wlab::PreconditionError);
}

}  // namespace
