#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "wlab/grid_oracle.hpp"

namespace {

using wlab::GridOracle;
using wlab::WarpedPlane;
using wlab::WarpParams;

TEST(GridOracle, FlatPlaneIsEuclidean) {
  const WarpedPlane flat = WarpedPlane::flat();
  const GridOracle g = GridOracle::isotropic(flat, -1.0, 4.0, -1.0, 5.0, 250'000);
  EXPECT_GE(g.nodes(), 250'000);
  const double d = wlab::oracle_distance(g, flat, {0, 0}, {3, 4});
  EXPECT_NEAR(d, 5.0, 0.02 * 5.0);
  EXPECT_DOUBLE_EQ(wlab::point_distance(flat, {0, 0}, {3, 4}).distance, 5.0);
}

TEST(GridOracle, StencilRefinementConverges) {
  const WarpedPlane flat = WarpedPlane::flat();
  double prev = INFINITY;
  for (int stencil : {8, 16, 32}) {
    const GridOracle g = GridOracle::isotropic(flat, 0.0, 3.0, 0.0, 4.0, 40'000, stencil);
    const double d = wlab::oracle_distance(g, flat, {0, 0}, {3, 1.3});
    EXPECT_LE(d, prev + 1e-12);
    EXPECT_GE(d, std::hypot(3.0, 1.3) - 1e-9);
    prev = d;
  }
}

TEST(GridOracle, AgreesWithCoverDistance) {
  const WarpedPlane plane{WarpParams{1.0, 25}};
  const double T = 2 * std::numbers::pi * 3;
  const double D = wlab::cover_distance(plane, 0.0, 3);
  const GridOracle g = GridOracle::isotropic(plane, 0.0, D, 0.0, T, 4'000'000);
  const double d = wlab::oracle_distance(g, plane, {0, 0}, {0, T});
  EXPECT_NEAR(d, D, 0.03 * D);
}

TEST(GridOracle, DegenerateAndInvalid) {
  const WarpedPlane plane{WarpParams{1.0, 3}};
  const GridOracle g = GridOracle::isotropic(plane, 0.0, 2.0, 0.0, 2.0, 10'000);
  EXPECT_EQ(wlab::oracle_distance(g, plane, {1, 1}, {1, 1}), 0.0);
  EXPECT_THROW(wlab::oracle_distance(g, plane, {3, 1}, {1, 1}), wlab::PreconditionError);
  GridOracle bad = g;
  bad.stencil = 12;
  EXPECT_THROW(wlab::oracle_distance(bad, plane, {1, 1}, {1, 0}), wlab::PreconditionError);
  EXPECT_THROW(GridOracle::isotropic(plane, 2.0, 1.0, 0.0, 1.0, 100), wlab::PreconditionError);
}

}  // namespace
