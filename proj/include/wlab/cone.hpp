#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "wlab/warp.hpp"

namespace wlab {

/// Rescaled orbit distance b -> dhat(b) = D(round(b L_ref)) / D(L_ref) on (0, 1],
/// with D the cover distance at an axis basepoint. The orbit carries the
/// translation-invariant metric d(b1, b2) = dhat(|b1 - b2|).
class OrbitMetric {
 public:
  /// Table from explicit samples (b strictly increasing in (0, 1], dhat
  /// strictly increasing and positive). Used for synthetic tables.
  static OrbitMetric from_table(std::vector<double> b, std::vector<double> dhat, double exponent);

  const std::vector<double>& b() const { return b_; }
  const std::vector<double>& dhat() const { return dhat_; }
  /// Smallest tabulated b; value() throws DomainError below it (except at 0).
  double resolution() const { return b_.front(); }
  /// Smallest dhat that inverse() resolves.
  double delta_resolution() const { return dhat_.front(); }
  /// Expected Hoelder exponent 1/(1+2 alpha), or the synthetic one.
  double exponent() const { return exponent_; }

  std::int64_t L_ref = 0;
  double D_ref = 0.0;
  WarpParams params;

  /// Log-log linear interpolation between samples.
  double value(double b) const;
  /// distance between orbit coordinates b1, b2 in [0, 1].
  double distance(double b1, double b2) const { return value(std::abs(b1 - b2)); }
  /// Largest b with value(b) <= delta, by bisection on the interpolant.
  double inverse(double delta) const;

 private:
  std::vector<double> b_;
  std::vector<double> dhat_;
  double exponent_ = 1.0;
};

/// Log grid of n_samples values of b in [1/L_ref, 1]; b is stored as the
/// realized l / L_ref after rounding, duplicates dropped.
OrbitMetric build_orbit_metric(const WarpParams& params, std::int64_t L_ref, int n_samples, int jobs = 1);

struct HolderConstants {
  double C1 = 0.0;  // min dhat(b) / b^exponent
  double C2 = 0.0;  // max dhat(b) / b^exponent
  double b_at_C1 = 0.0;
  double b_at_C2 = 0.0;
};

/// Empirical constants over the tabulated b >= b_min.
HolderConstants holder_scan(const OrbitMetric& metric, double b_min = 0.0);

struct BoxCountResult {
  std::vector<double> scales;
  std::vector<std::int64_t> counts;
  double dimension = 0.0;
  double r_squared = 0.0;
};

/// n geometrically spaced values in [lo, hi], decreasing.
std::vector<double> geometric_deltas(double lo, double hi, int n);

/// Covers [0, 1] by intervals of orbit diameter delta: N = ceil(1 / dhat^-1(delta)).
BoxCountResult box_dimension(const OrbitMetric& metric, std::span<const double> delta_list);

/// Same estimator for the snowflake line ([0, 1], |x - y|^theta), counted exactly.
BoxCountResult snowflake_oracle(double theta, std::span<const double> delta_list);

struct HalflineRow {
  double s = 0.0;
  double max_deviation = 0.0;  // max | d / s - |a - b| |
  double collapse_scale = 0.0; // 2 pi h(a_min s) / s
  bool used_fallback = false;
  bool within_scale = false;
};

struct HalflineOptions {
  std::vector<double> radii{0.2, 0.5, 0.9};
  std::vector<double> angles{0.0, 1.5707963267948966, 3.141592653589793};
};

/// Rescaled quotient-cylinder distances between radii a s and b s at the
/// given angles, against the half-line distance |a - b|.
std::vector<HalflineRow> halfline_limit_check(const WarpParams& params, std::span<const double> scales,
                                              const HalflineOptions& options = {});

struct FlatnessResult {
  double s = 0.0;
  double rho = 0.0;
  int n = 0;
  double distortion = 0.0;             // additive distortion of the chart correspondence
  double normalized_distortion = 0.0;  // distortion / (2 rho s)
  double gh_lower = 0.0;               // half the diameter gap of the two samples
  bool used_fallback = false;
  std::uint64_t seed = 0;
};

/// Samples n points of the cover plane in the chart disk of radius rho s
/// about (s, 0) and compares plane distances with the Euclidean chart
/// (r, t) -> (r - s, h(s) t).
FlatnessResult flatness_off_orbit(const WarpParams& params, double s, double rho, int n = 64,
                                  std::uint64_t seed = 1, int jobs = 1);

}  // namespace wlab
