#pragma once

#include <cstdint>
#include <optional>

#include "wlab/warp.hpp"

namespace wlab {

/// The warped plane (R^2, dr^2 + h(r)^2 dt^2) with h extended evenly to r < 0.
/// Same-fiber distances in the universal cover reduce to distances here.
class WarpedPlane {
 public:
  explicit WarpedPlane(WarpParams params) : params_(params) {}

  /// h == 1 everywhere. Only meaningful for oracle calibration.
  static WarpedPlane flat() {
    WarpedPlane plane{WarpParams{1.0, 2}};
    plane.flat_ = true;
    return plane;
  }

  const WarpParams& params() const { return params_; }
  double alpha() const { return params_.alpha; }
  bool is_flat() const { return flat_; }

  double h(double r) const { return flat_ ? 1.0 : warp_h(params_.alpha, r); }
  double dh(double r) const { return flat_ ? 0.0 : warp_h1(params_.alpha, r); }
  /// h(r_ref - gap) - h(r_ref), cancellation-free.
  double h_rise(double r_ref, double gap) const {
    return flat_ ? 0.0 : warp_h_rise(params_.alpha, r_ref, gap);
  }
  /// h(r_lo + top - gap) - h(r_lo + top).
  double h_rise(double r_lo, double top, double gap) const {
    return flat_ ? 0.0 : warp_h_rise(params_.alpha, r_lo, top, gap);
  }

 private:
  WarpParams params_;
  bool flat_ = false;
};

struct PlanePoint {
  double r = 0.0;
  double t = 0.0;
};

/// One outward-turning symmetric Clairaut arc from (base_r, 0) back to base_r.
struct GeodesicArc {
  double c = 0.0;          // Clairaut constant h^2 dt/ds
  double base_r = 0.0;
  double r_star = 0.0;     // turning radius, h(r_star) = |c|
  double length = 0.0;
  double delta_t = 0.0;    // total advance in t
  // The arc is the fiber circle at an axis basepoint (below the conjugate
  // threshold no turning arc reaches the requested winding).
  bool circle = false;
  bool monotone_bracket = true;
  int roots_found = 1;
};

/// Arc with a given Clairaut constant, 0 < |c| < h(base_r).
GeodesicArc arc_from_clairaut(const WarpedPlane& plane, double base_r, double c);

/// Arc determined by its turning radius r_star > base_r (c = h(r_star)).
GeodesicArc arc_from_turning(const WarpedPlane& plane, double base_r, double r_star);

/// Shortest arc with delta_t = T (relative tolerance 1e-8).
GeodesicArc solve_winding(const WarpedPlane& plane, double base_r, double T);

/// d(gamma^l q, q) for a basepoint at radius base_r.
double cover_distance(const WarpedPlane& plane, double base_r, std::int64_t l);

/// Comparison loop: out to radius r, l turns around the circle, back.
double sigma_competitor(const WarpedPlane& plane, std::int64_t l, double r);
/// Minimum of sigma_competitor over a uniform grid of n radii.
double sigma_competitor_min(const WarpedPlane& plane, std::int64_t l, int n = 200);

struct PlaneDistance {
  double distance = 0.0;
  bool used_fallback = false;
};

/// Geodesic distance in the plane between two points.
PlaneDistance point_distance(const WarpedPlane& plane, PlanePoint a, PlanePoint b);

/// Distance on the quotient cylinder t ~ t + 2 pi (minimum over deck shifts).
PlaneDistance quotient_distance(const WarpedPlane& plane, PlanePoint a, PlanePoint b);

struct LoopSize {
  double size = 0.0;        // max quotient distance from the basepoint
  double radial_gap = 0.0;  // r_star - base_r, a lower bound for size
  int samples = 0;
  bool used_fallback = false;
};

/// Size of the loop traced by a solve_winding arc on the quotient cylinder.
LoopSize loop_size(const WarpedPlane& plane, const GeodesicArc& arc, double base_r,
                   int samples_per_half = 32);

/// Arclength integration of the geodesic equations from (base_r, 0) with
/// Clairaut constant c up to the turning point; returns the doubled arc.
struct ArcOdeResult {
  double length = 0.0;
  double delta_t = 0.0;
  double max_clairaut_drift = 0.0;
  int steps = 0;
};
ArcOdeResult integrate_arc_ode(const WarpedPlane& plane, double base_r, double c);

}  // namespace wlab
