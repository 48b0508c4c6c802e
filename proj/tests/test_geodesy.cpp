#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "wlab/geodesy.hpp"

namespace {

using wlab::PlanePoint;
using wlab::WarpedPlane;
using wlab::WarpParams;
constexpr double kPi = std::numbers::pi;

struct ArcRef {
  double length;
  double delta_t;
};

// Direct integrals in r over [base, r_star] in long double, without the
// substitution the solver uses. tanh_sinh passes the distance to the nearer
// endpoint, which keeps h^2 - c^2 accurate next to the turning point.
ArcRef arc_reference(double alpha, double base, double r_star) {
  using LD = long double;
  const LD a = alpha, rs = r_star;
  const LD c = std::pow(1.0L + rs * rs, -a);
  auto h = [&](LD r) { return std::pow(1.0L + r * r, -a); };
  auto excess = [&](LD r, LD gap) {  // h(r)^2 - c^2 with r = r_star - gap
    const LD x = gap * (2 * rs - gap) / (1 + r * r);
    return c * c * std::expm1(2 * a * std::log1p(x));
  };
  boost::math::quadrature::tanh_sinh<LD> ts;
  const LD mid = 0.5L * (base + rs);
  auto value = [&](LD x, LD xc, bool length) {
    const LD gap = x > mid ? xc : rs - x;
    const LD hr = h(x);
    const LD root = std::sqrt(excess(x, gap));
    return length ? hr / root : c / (hr * root);
  };
  const LD len = ts.integrate([&](LD x, LD xc) { return value(x, xc, true); }, LD(base), rs);
  const LD dt = ts.integrate([&](LD x, LD xc) { return value(x, xc, false); }, LD(base), rs);
  return {static_cast<double>(2 * len), static_cast<double>(2 * dt)};
}

TEST(Geodesy, ArcMatchesDirectQuadrature) {
  struct Case {
    double alpha, base, r_star;
  };
  for (const Case& k : {Case{1.0, 0.0, 1.0}, Case{1.0, 2.0, 5.0}, Case{0.5, 0.0, 30.0}, Case{0.5, 10.0, 10.5},
                        Case{1.5, 0.3, 4.0}}) {
    const WarpedPlane plane{WarpParams{k.alpha, 3}};
    const auto arc = wlab::arc_from_turning(plane, k.base, k.r_star);
    const auto ref = arc_reference(k.alpha, k.base, k.r_star);
    EXPECT_NEAR(arc.length, ref.length, 1e-9 * ref.length) << k.alpha << ' ' << k.base << ' ' << k.r_star;
    EXPECT_NEAR(arc.delta_t, ref.delta_t, 1e-9 * ref.delta_t) << k.alpha << ' ' << k.base << ' ' << k.r_star;
  }
}

TEST(Geodesy, ClairautExampleTurnsAtOne) {
  const WarpedPlane plane{WarpParams{1.0, 25}};
  const auto arc = wlab::arc_from_clairaut(plane, 0.0, 0.5);
  EXPECT_NEAR(arc.r_star, 1.0, 1e-12);
  EXPECT_GT(arc.length, 2.0);
  EXPECT_GT(arc.delta_t, 0.0);
  EXPECT_TRUE(std::isfinite(arc.length) && std::isfinite(arc.delta_t));
  const auto same = wlab::arc_from_turning(plane, 0.0, 1.0);
  EXPECT_NEAR(same.length, arc.length, 1e-10 * arc.length);
}

TEST(Geodesy, NearTangentChordAtAxis) {
  // c -> h(0) at the axis: the arc hugs the fiber circle r = 0, r_star -> 0,
  // and delta_t tends to pi / sqrt(2 alpha) (half-period of the linearised
  // Clairaut oscillation), so the length tends to that times h(0) rather than 0.
  for (double alpha : {0.5, 1.0}) {
    const WarpedPlane plane{WarpParams{alpha, 3}};
    const auto arc = wlab::arc_from_clairaut(plane, 0.0, 1.0 - 1e-10);
    EXPECT_LT(arc.r_star, 1e-4);
    EXPECT_NEAR(arc.delta_t, kPi / std::sqrt(2 * alpha), 1e-4);
    EXPECT_NEAR(arc.length, arc.delta_t, 1e-4);
  }
}

TEST(Geodesy, NearTangentChordOffAxis) {
  const WarpedPlane plane{WarpParams{1.0, 3}};
  const double hb = plane.h(2.0);
  const auto a = wlab::arc_from_clairaut(plane, 2.0, hb * (1 - 1e-6));
  const auto b = wlab::arc_from_clairaut(plane, 2.0, hb * (1 - 1e-10));
  EXPECT_LT(b.length, a.length);
  EXPECT_LT(b.delta_t, a.delta_t);
  EXPECT_LT(b.length, 1e-3);
}

TEST(Geodesy, OdeAgreesWithQuadrature) {
  for (double alpha : {0.5, 1.0}) {
    const WarpedPlane plane{WarpParams{alpha, 3}};
    for (double base : {0.0, 1.5}) {
      for (double frac : {0.2, 0.6, 0.95}) {
        const double c = frac * plane.h(base);
        const auto arc = wlab::arc_from_clairaut(plane, base, c);
        const auto ode = wlab::integrate_arc_ode(plane, base, c);
        EXPECT_NEAR(ode.length, arc.length, 1e-6 * arc.length) << alpha << ' ' << base << ' ' << frac;
        EXPECT_NEAR(ode.delta_t, arc.delta_t, 1e-6 * arc.delta_t) << alpha << ' ' << base << ' ' << frac;
        EXPECT_LE(ode.max_clairaut_drift, 1e-9);
      }
    }
  }
}

TEST(Geodesy, SolveWindingSandwich) {
  {
    const WarpedPlane plane{WarpParams{1.0, 25}};
    const auto arc = wlab::solve_winding(plane, 0.0, 2 * kPi * 100);
    const double lt = std::cbrt(100.0);
    EXPECT_GE(arc.length, 2.0 / 3.0 * lt - 2);
    EXPECT_LE(arc.length, 9 * lt);
    EXPECT_NEAR(arc.delta_t, 2 * kPi * 100, 1e-8 * 2 * kPi * 100);
  }
  {
    const WarpedPlane plane{WarpParams{0.5, 9}};
    const auto arc = wlab::solve_winding(plane, 0.0, 2 * kPi * 1e4);
    EXPECT_GE(arc.length, 20.22);
    EXPECT_LE(arc.length, 900.0);
  }
}

TEST(Geodesy, SmallWindingIsTheFiberCircle) {
  const WarpedPlane plane{WarpParams{1.0, 25}};
  const auto arc = wlab::solve_winding(plane, 0.0, 0.01);
  EXPECT_TRUE(arc.circle);
  EXPECT_NEAR(arc.length, 0.01, 1e-4);
}

TEST(Geodesy, CoverDistanceExamples) {
  const WarpedPlane p1{WarpParams{1.0, 25}};
  EXPECT_LE(wlab::cover_distance(p1, 0.0, 1), 2 * kPi + 1e-12);
  const WarpedPlane p05{WarpParams{0.5, 9}};
  const double d = wlab::cover_distance(p05, 0.0, 10000);
  EXPECT_GE(d, 20.22);
  EXPECT_LE(d, 828.3);
  EXPECT_LE(d, wlab::sigma_competitor_min(p05, 10000) + 1e-9);
  // Direct competitor over a fine radius grid.
  for (double r = 0.0; r < 200.0; r += 0.5) {
    EXPECT_LE(d, 2 * r + 1e4 * 2 * kPi / std::sqrt(1 + r * r) + 1e-9);
  }
  EXPECT_THROW(wlab::cover_distance(p05, 0.0, 0), wlab::PreconditionError);
}

TEST(Geodesy, CoverDistanceGrowsWithBasepointWinding) {
  const WarpedPlane plane{WarpParams{0.5, 9}};
  double prev = 0.0;
  for (std::int64_t l : {1, 10, 100, 1000, 10000, 100000}) {
    const double d = wlab::cover_distance(plane, 0.0, l);
    EXPECT_GT(d, prev);
    prev = d;
  }
}

TEST(Geodesy, PointDistanceExamples) {
  const WarpedPlane plane{WarpParams{1.0, 25}};
  EXPECT_DOUBLE_EQ(wlab::point_distance(plane, {0, 0}, {5, 0}).distance, 5.0);
  EXPECT_EQ(wlab::point_distance(plane, {3, 1}, {3, 1}).distance, 0.0);
  const auto d = wlab::point_distance(plane, {0, 0}, {0, 2 * kPi * 3});
  EXPECT_NEAR(d.distance, wlab::cover_distance(plane, 0.0, 3), 1e-8);
  EXPECT_FALSE(d.used_fallback);
}

TEST(Geodesy, PointDistanceIsAMetric) {
  const WarpedPlane plane{WarpParams{0.5, 9}};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> R(0.0, 20.0), T(-30.0, 30.0);
  std::vector<PlanePoint> pts;
  for (int i = 0; i < 12; ++i) pts.push_back({R(rng), T(rng)});
  std::vector<double> d(pts.size() * pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      d[i * pts.size() + j] = wlab::point_distance(plane, pts[i], pts[j]).distance;
    }
  }
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_NEAR(d[i * n + j], d[j * n + i], 1e-8 * (1 + d[i * n + j]));
      const double dr = std::abs(pts[i].r - pts[j].r);
      const double dt = std::abs(pts[i].t - pts[j].t);
      EXPECT_GE(d[i * n + j], dr - 1e-9);
      EXPECT_LE(d[i * n + j], dr + dt * plane.h(std::max(pts[i].r, pts[j].r)) + 1e-9);
      for (std::size_t k = 0; k < n; ++k) {
        EXPECT_LE(d[i * n + j], d[i * n + k] + d[k * n + j] + 1e-7 * (1 + d[i * n + j]));
      }
    }
  }
}

TEST(Geodesy, SameRadiusFarFromAxis) {
  // Turning gaps here are below one ulp of r.
  const WarpedPlane plane{WarpParams{0.5, 9}};
  for (double r : {5e3, 5e4, 5e5}) {
    for (double dt : {1e-9, 1e-3, kPi / 2}) {
      const auto d = wlab::point_distance(plane, {r, 0.0}, {r, dt});
      const double fiber = plane.h(r) * dt;
      EXPECT_FALSE(d.used_fallback);
      EXPECT_LE(d.distance, fiber * (1 + 1e-12));
      EXPECT_GE(d.distance, fiber * 0.99) << r << ' ' << dt;
    }
  }
}

TEST(Geodesy, NegativeRadiiFoldAcrossTheAxis) {
  const WarpedPlane plane{WarpParams{1.0, 3}};
  const double a = wlab::point_distance(plane, {-2.0, 0.0}, {-4.0, 1.0}).distance;
  const double b = wlab::point_distance(plane, {2.0, 0.0}, {4.0, 1.0}).distance;
  EXPECT_NEAR(a, b, 1e-12);
}

TEST(Geodesy, QuotientDistance) {
  const WarpedPlane plane{WarpParams{1.0, 3}};
  const PlanePoint a{1.0, 0.3}, b{2.5, 2.0};
  const double q = wlab::quotient_distance(plane, a, b).distance;
  EXPECT_LE(q, wlab::point_distance(plane, a, b).distance + 1e-12);
  EXPECT_NEAR(q, wlab::quotient_distance(plane, a, {b.r, b.t + 2 * kPi}).distance, 1e-9);
  EXPECT_NEAR(q, wlab::quotient_distance(plane, a, {b.r, b.t - 6 * kPi}).distance, 1e-9);
  EXPECT_NEAR(wlab::quotient_distance(plane, {0.0, 0.0}, {0.0, 2 * kPi}).distance, 0.0, 1e-12);
}

TEST(Geodesy, LoopSizeBounds) {
  const WarpedPlane plane{WarpParams{0.5, 9}};
  for (double base : {0.0, 100.0, 1e3}) {
    const auto arc = wlab::solve_winding(plane, base, 2 * kPi * 2000);
    const auto ls = wlab::loop_size(plane, arc, base);
    EXPECT_GE(ls.size, ls.radial_gap - 1e-9);
    EXPECT_LE(ls.size, arc.length / 2 + 1e-9);
    EXPECT_GT(ls.samples, 0);
  }
}

TEST(Geodesy, SigmaCompetitor) {
  const WarpedPlane plane{WarpParams{0.5, 9}};
  EXPECT_NEAR(wlab::sigma_competitor(plane, 10, 0.0), 20 * kPi, 1e-12);
  EXPECT_NEAR(wlab::sigma_competitor(plane, 10, 3.0), 6 + 20 * kPi / std::sqrt(10.0), 1e-12);
}

TEST(Geodesy, InvalidInputs) {
  const WarpedPlane plane{WarpParams{1.0, 3}};
  EXPECT_THROW(wlab::arc_from_clairaut(plane, 0.0, 1.0), wlab::DomainError);
  EXPECT_THROW(wlab::arc_from_clairaut(plane, 0.0, 0.0), wlab::DomainError);
  EXPECT_THROW(wlab::arc_from_clairaut(plane, 1.0, 0.6), wlab::DomainError);
  EXPECT_THROW(wlab::arc_from_turning(plane, 2.0, 1.0), wlab::DomainError);
  EXPECT_THROW(wlab::solve_winding(plane, 0.0, -1.0), wlab::PreconditionError);
  EXPECT_THROW(wlab::point_distance(plane, {NAN, 0}, {1, 1}), wlab::DomainError);
  const auto arc = wlab::solve_winding(plane, 1.0, 2 * kPi * 10);
  EXPECT_THROW(wlab::loop_size(plane, arc, 0.0), wlab::PreconditionError);
}

}  // namespace
