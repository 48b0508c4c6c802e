#pragma once

#include "wlab/geodesy.hpp"

namespace wlab {

/// Brute-force shortest-path oracle on a rectangle of the warped plane.
///
/// Rows are uniform in the isothermal coordinate sigma(r) = int dr / h, in
/// which the metric reads h^2 (dsigma^2 + dt^2); columns are uniform in t.
/// Each edge weighs h(midpoint radius) times its chart length. The stencil is
/// 8 (king moves), 16 (adds knight moves) or 32 (adds (1,3) and (2,3) moves).
struct GridOracle {
  double r_min = 0.0;
  double r_max = 1.0;
  double t_min = 0.0;
  double t_max = 1.0;
  int n_r = 2;
  int n_t = 2;
  int stencil = 16;

  /// Rectangle with square cells in (sigma, t) and at least min_nodes nodes.
  static GridOracle isotropic(const WarpedPlane& plane, double r_min, double r_max, double t_min,
                              double t_max, long long min_nodes, int stencil = 16);

  long long nodes() const { return static_cast<long long>(n_r) * n_t; }
};

/// Dijkstra distance between the grid nodes nearest to a and b.
double oracle_distance(const GridOracle& oracle, const WarpedPlane& plane, PlanePoint a, PlanePoint b);

}  // namespace wlab
