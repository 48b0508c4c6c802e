#pragma once

// Internal Clairaut-quadrature machinery shared by the arc solver and the
// two-point distance solver.

#include <functional>
#include <vector>

#include "wlab/geodesy.hpp"

namespace wlab::detail {

// Integrals over r in [r_lo, r_hi], r_hi = r_lo + gap, of a geodesic piece
// that is monotone in r and whose Clairaut constant is c = (1 - omega) h(r_hi),
// omega in [0, 1]. omega = 0 means the piece turns (is tangent to the circle)
// at r_hi. The inverse-square-root singularity at r_hi is removed by
// r = r_hi - u^2. The gap is never added to r_lo in floating point, so it may
// be far below the resolution of r_lo.
double segment_dt(const WarpedPlane& plane, double r_lo, double gap, double omega);
double segment_length_excess(const WarpedPlane& plane, double r_lo, double gap, double omega);

// A point on a one-parameter family with its t-advance.
struct ScanSample {
  double param;
  double value;
};

struct Crossing {
  double lo;
  double hi;
  double value_lo;
  double value_hi;
};

// Increasing-target bracketing. `eval` maps param -> delta_t. Starting at
// `start`, walks by `step` until the target is crossed, bounded by
// [pmin, pmax]. Interior samples of the bracket are checked for monotonicity;
// on a violation a dense scan over the visited range returns every crossing.
struct BracketResult {
  std::vector<Crossing> crossings;
  bool monotone = true;
  bool found = false;
  double value_at_min = 0.0;  // eval(pmin) when it was visited, else NaN
};

BracketResult bracket_target(const std::function<double(double)>& eval, double target,
                             double start, double step, double pmin, double pmax);

// Root of eval(param) = target inside a crossing.
double refine_crossing(const std::function<double(double)>& eval, double target, Crossing c);

}  // namespace wlab::detail
