#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wlab/warp.hpp"

namespace wlab {

/// One winding number and its cover distance at an axis basepoint.
struct DistanceSample {
  std::int64_t l = 0;
  double D = 0.0;
};

/// About `per_decade` geometrically spaced integers in [lo, hi], deduplicated.
std::vector<std::int64_t> geometric_l_list(std::int64_t lo, std::int64_t hi, int per_decade);

/// One cover_distance per winding number. A solver failure is rethrown as a
/// SolverError naming the failing l.
std::vector<DistanceSample> sample_growth(const WarpParams& params, std::span<const std::int64_t> l_list,
                                          int jobs = 1);

/// Smallest winding number for which the two-sided growth bound is claimed: 9^(1 + 1/(2 alpha)).
double growth_bound_threshold(double alpha);
/// Lower constant 2 * 9^(-1/(2 alpha)).
double growth_lower_constant(double alpha);

struct BoundRow {
  std::int64_t l = 0;
  double D = 0.0;
  double lower = 0.0;        // C l^theta - 2
  double upper = 0.0;        // 9 l^theta
  double proof_upper = 0.0;  // (2 + 2 pi) l^theta
  double sigma_upper = 0.0;  // comparison-loop minimum over a 200-point radius grid
  bool in_range = false;     // l >= threshold
  bool pass = true;          // trivially true when !in_range
};

struct BoundReport {
  std::vector<BoundRow> rows;
  int checked = 0;
  int failed = 0;
  int out_of_range = 0;
  bool pass() const { return failed == 0 && checked > 0; }
};

BoundReport check_lemma_bounds(const WarpParams& params, std::span<const DistanceSample> samples);

/// Least-squares fit of log D against log l.
struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::int64_t l_min = 0;
  std::int64_t l_max = 0;
  std::size_t n = 0;
};

ScalingFit fit_exponent(std::span<const DistanceSample> samples, std::pair<std::int64_t, std::int64_t> window);

/// Lower constant pi / (1 + pi)^(2 alpha) for loop lengths at far basepoints.
double far_length_constant(double alpha);

struct FarLoopResult {
  double s = 0.0;
  double epsilon = 0.0;
  std::int64_t l = 0;
  std::int64_t l_lo = 0, l_hi = 0;  // admissible winding range
  double length = 0.0;
  // Size of the plane-geodesic loop (surrogate for the size of the minimal loop in M).
  double size = 0.0;
  double radial_gap = 0.0;
  double length_lower = 0.0;    // eps * C * s
  double length_upper = 0.0;    // eps * 2 pi s
  double trivial_upper = 0.0;   // l * 2 pi (1 + s^2)^(-alpha)
  bool length_ok = false;
  bool size_ok = false;         // size <= length / 2
  bool used_fallback = false;
};

/// Winding l at the top of [eps s (1+s^2)^alpha / 2, eps s (1+s^2)^alpha] at basepoint radius s.
FarLoopResult far_loop(const WarpParams& params, double s, double epsilon);

/// Largest root delta of delta^2 = eps^2 pi^2 [1 - (1 + delta)^(-4 alpha)].
double far_delta_root(double alpha, double epsilon);

struct RatioPoint {
  double epsilon = 0.0;
  double ratio = 0.0;    // size / length
  double delta = 0.0;    // far_delta_root
  double ceiling = 0.0;  // delta / (C eps)
  FarLoopResult loop;
};

std::vector<RatioPoint> ratio_curve(const WarpParams& params, double s, std::span<const double> eps_list,
                                    int jobs = 1);

}  // namespace wlab
