#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "wlab/warp.hpp"

namespace {

using wlab::WarpParams;

// Independent closed forms, written out directly.
double f_ref(double r) { return r * std::pow(1.0 + r * r, -0.25); }
double h_ref(double alpha, double r) { return std::pow(1.0 + r * r, -alpha); }

// Five-point central differences. Errors are relative to max(|fd|, g / (1+r)^k),
// the natural scale of the k-th derivative, so zero crossings of h'' are harmless.
template <class F>
double d1(F fn, double r, double e) {
  return (-fn(r + 2 * e) + 8 * fn(r + e) - 8 * fn(r - e) + fn(r - 2 * e)) / (12 * e);
}
template <class F>
double d2(F fn, double r, double e) {
  return (-fn(r + 2 * e) + 16 * fn(r + e) - 30 * fn(r) + 16 * fn(r - e) - fn(r - 2 * e)) / (12 * e * e);
}

bool close_rel(double a, double b, double rel, double abs_floor) {
  return std::abs(a - b) <= rel * std::max(std::abs(b), abs_floor);
}

TEST(Warp, ValuesAtAxis) {
  const auto e = wlab::eval_profiles(WarpParams{1.0, 2}, 0.0);
  EXPECT_EQ(e.f, 0.0);
  EXPECT_DOUBLE_EQ(e.f1, 1.0);
  EXPECT_EQ(e.f2, 0.0);
  EXPECT_DOUBLE_EQ(e.h, 1.0);
  EXPECT_EQ(e.h1, 0.0);
  EXPECT_DOUBLE_EQ(e.h2, -2.0);
}

TEST(Warp, ValuesAtOne) {
  const auto e = wlab::eval_profiles(WarpParams{1.0, 2}, 1.0);
  EXPECT_DOUBLE_EQ(e.h, 0.5);
  EXPECT_DOUBLE_EQ(e.h1, -0.5);
  for (double alpha : {0.25, 0.5, 3.0}) {
    EXPECT_NEAR(wlab::eval_profiles(WarpParams{alpha, 2}, 1.0).f, 0.8408964152537145, 1e-15);
  }
}

TEST(Warp, CircleLength) {
  EXPECT_DOUBLE_EQ(wlab::circle_length(WarpParams{1.0, 2}, 0.0), 2 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(wlab::circle_length(WarpParams{1.0, 2}, 1.0), std::numbers::pi);
  EXPECT_NEAR(wlab::circle_length(WarpParams{0.5, 2}, 3.0), 1.98692, 1e-5);
}

TEST(Warp, DerivativesMatchFiniteDifferences) {
  for (double alpha : {0.25, 0.5, 0.75, 1.0, 1.5}) {
    const WarpParams params{alpha, 2};
    auto h = [&](double r) { return h_ref(alpha, r); };
    for (int i = 0; i < 200; ++i) {
      const double r = 1e-2 * std::pow(1e5, i / 199.0);
      const double e = 1e-3 * (1.0 + r);
      const auto ev = wlab::eval_profiles(params, r);
      EXPECT_NEAR(ev.f, f_ref(r), 1e-14 * f_ref(r));
      EXPECT_NEAR(ev.h, h(r), 1e-13 * h(r));
      EXPECT_TRUE(close_rel(ev.f1, d1(f_ref, r, e), 1e-6, ev.f / (1 + r))) << "f1 at " << r;
      EXPECT_TRUE(close_rel(ev.f2, d2(f_ref, r, e), 1e-6, ev.f / ((1 + r) * (1 + r)))) << "f2 at " << r;
      EXPECT_TRUE(close_rel(ev.h1, d1(h, r, e), 1e-6, ev.h / (1 + r))) << "h1 at " << r;
      EXPECT_TRUE(close_rel(ev.h2, d2(h, r, e), 1e-6, ev.h / ((1 + r) * (1 + r)))) << "h2 at " << r;
    }
  }
}

TEST(Warp, HIsEvenWithOddDerivative) {
  for (double r : {0.1, 1.0, 7.5, 1e3}) {
    EXPECT_EQ(wlab::warp_h(0.7, r), wlab::warp_h(0.7, -r));
    EXPECT_EQ(wlab::warp_h1(0.7, r), -wlab::warp_h1(0.7, -r));
    EXPECT_EQ(wlab::warp_h2(0.7, r), wlab::warp_h2(0.7, -r));
  }
}

TEST(Warp, HRiseMatchesReferences) {
  for (double alpha : {0.5, 1.0}) {
    for (double r : {0.0, 0.3, 5.0, 1e4}) {
      // Moderate gaps: plain difference in long double.
      for (double gap : {1e-4, 0.2}) {
        const long double rr = r, a = alpha;
        const long double want = std::pow(1.0L + (rr - gap) * (rr - gap), -a) - std::pow(1.0L + rr * rr, -a);
        EXPECT_NEAR(wlab::warp_h_rise(alpha, r, gap), static_cast<double>(want), 1e-9 * std::abs(want));
      }
      // Tiny gaps: second-order Taylor expansion about r.
      const double gap = 1e-9;
      const double want = -wlab::warp_h1(alpha, r) * gap + 0.5 * wlab::warp_h2(alpha, r) * gap * gap;
      EXPECT_NEAR(wlab::warp_h_rise(alpha, r, gap), want, 1e-8 * std::abs(want));
    }
  }
}

TEST(Warp, HRiseKeepsSubUlpGaps) {
  // r_lo + top rounds to r_lo in double; the rise must still see top and gap.
  const double r = 5e4, top = 1e-13, gap = 1e-13;
  const double rise = wlab::warp_h_rise(0.5, r, top, gap);
  const double slope = -wlab::warp_h1(0.5, r);
  EXPECT_GT(rise, 0.0);
  EXPECT_NEAR(rise, slope * gap, 1e-6 * slope * gap);
  EXPECT_EQ(wlab::warp_h_rise(0.5, r, 0.0, gap), wlab::warp_h_rise(0.5, r, gap));
}

TEST(Warp, OneMinusF1SquaredSmallR) {
  for (double r : {1e-8, 1e-4, 1e-2}) {
    EXPECT_NEAR(wlab::one_minus_f1_squared(r), 1.5 * r * r, 1e-3 * 1.5 * r * r);
  }
  const double r = 2.0;
  const double f1 = wlab::eval_profiles(WarpParams{1.0, 2}, r).f1;
  EXPECT_NEAR(wlab::one_minus_f1_squared(r), 1.0 - f1 * f1, 1e-14);
}

TEST(Warp, InvalidInputs) {
  EXPECT_THROW(WarpParams(0.0, 3), wlab::DomainError);
  EXPECT_THROW(WarpParams(-1.0, 3), wlab::DomainError);
  EXPECT_THROW(WarpParams(1.0, 1), wlab::DomainError);
  EXPECT_THROW(wlab::eval_profiles(WarpParams{1.0, 2}, NAN), wlab::DomainError);
  EXPECT_THROW(wlab::eval_profiles(WarpParams{1.0, 2}, INFINITY), wlab::DomainError);
  EXPECT_THROW(wlab::circle_length(WarpParams{1.0, 2}, -1.0), wlab::DomainError);
}

TEST(Warp, GrowthExponent) {
  EXPECT_DOUBLE_EQ(WarpParams(0.5, 9).growth_exponent(), 0.5);
  EXPECT_DOUBLE_EQ(WarpParams(1.0, 25).growth_exponent(), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(WarpParams(0.75, 16).beta(), 1.5);
}

}  // namespace
