#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "clairaut.hpp"
#include "wlab/geodesy.hpp"
#include "wlab/grid_oracle.hpp"

namespace wlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Parameter seam between the monotone family (lambda < kSeam, omega = e^-lambda)
// and the outward-turning family (lambda >= kSeam, g = g_min e^(lambda - kSeam)).
constexpr double kSeam = 40.0;
constexpr long long kFallbackNodes = 1'000'000;

double fallback_distance(const WarpedPlane& plane, PlanePoint a, PlanePoint b) {
  const double bound = std::abs(a.r - b.r) + std::abs(b.t - a.t) * std::min(plane.h(a.r), plane.h(b.r));
  double r_lo = std::min(a.r, b.r);
  double r_hi = std::max(a.r, b.r);
  if (r_lo >= 0.0) {
    // Folding r -> -r keeps a minimizer in r >= 0.
    r_lo = std::max(0.0, r_lo - bound);
  } else {
    r_lo -= bound;
  }
  r_hi += bound;
  double t_lo = std::min(a.t, b.t);
  double t_hi = std::max(a.t, b.t);
  if (t_hi - t_lo < 1e-9) t_hi = t_lo + 1e-9;
  const GridOracle g = GridOracle::isotropic(plane, r_lo, r_hi, t_lo, t_hi, kFallbackNodes);
  return oracle_distance(g, plane, a, b);
}

// Geodesics from radius r1 to r2 >= r1 >= 0 advancing t by dt, parameterised
// by one real lambda running through both families.
struct TwoPointFamily {
  const WarpedPlane& plane;
  double r1, r2;
  double lg_min;

  bool monotone_piece(double lambda) const { return lambda < kSeam; }
  double gap(double lambda) const { return std::exp(lg_min + (lambda - kSeam)); }

  double delta_t(double lambda) const {
    if (monotone_piece(lambda)) return detail::segment_dt(plane, r1, r2 - r1, std::exp(-lambda));
    const double g = gap(lambda);
    return detail::segment_dt(plane, r1, (r2 - r1) + g, 0.0) + detail::segment_dt(plane, r2, g, 0.0);
  }

  double length(double lambda) const {
    if (monotone_piece(lambda)) {
      return (r2 - r1) + detail::segment_length_excess(plane, r1, r2 - r1, std::exp(-lambda));
    }
    const double g = gap(lambda);
    return (r2 - r1) + 2.0 * g + detail::segment_length_excess(plane, r1, (r2 - r1) + g, 0.0) +
           detail::segment_length_excess(plane, r2, g, 0.0);
  }
};

}  // namespace

PlaneDistance point_distance(const WarpedPlane& plane, PlanePoint a, PlanePoint b) {
  if (!std::isfinite(a.r) || !std::isfinite(a.t) || !std::isfinite(b.r) || !std::isfinite(b.t)) {
    throw DomainError("point_distance needs finite coordinates");
  }
  if (plane.is_flat()) return {std::hypot(a.r - b.r, a.t - b.t), false};

  const double dt = std::abs(b.t - a.t);
  double ra = a.r;
  double rb = b.r;
  if (ra <= 0.0 && rb <= 0.0) {
    ra = -ra;
    rb = -rb;
  }
  if (ra < 0.0 || rb < 0.0) {
    // Endpoints on opposite sides of the axis are outside the Clairaut families.
    return {fallback_distance(plane, a, b), true};
  }
  const double r1 = std::min(ra, rb);
  const double r2 = std::max(ra, rb);
  if (dt == 0.0) return {r2 - r1, false};

  const double alpha = plane.alpha();
  const double g_min = 1e-20 * (1.0 + r2);
  // Largest gap: c = 1e-12 h(r2).
  const double q = 1.0 + r2 * r2;
  const double delta = q * std::expm1(std::log(1e12) / alpha);
  const double g_max = delta / (std::sqrt(r2 * r2 + delta) + r2);
  TwoPointFamily fam{plane, r1, r2, std::log(g_min)};
  const double lambda_max = kSeam + std::log(g_max / g_min);
  auto eval = [&](double lambda) { return fam.delta_t(lambda); };

  const bool has_monotone_piece = r2 > r1;
  const double seam_value = fam.delta_t(kSeam);
  if (!has_monotone_piece && dt <= seam_value) {
    // Shorter than the flattest resolvable chord; the fiber arc agrees with
    // the geodesic to relative order g_min |h'/h|.
    return {dt * plane.h(r1), false};
  }
  detail::BracketResult br;
  if (has_monotone_piece && dt < seam_value) {
    br = detail::bracket_target(eval, dt, 3.0, std::log(4.0), 0.0, kSeam);
  } else {
    const double start = kSeam + std::log(std::max(g_min, 1e-3 * (1.0 + r2)) / g_min);
    br = detail::bracket_target(eval, dt, start, std::log(4.0), kSeam, lambda_max);
  }

  const bool on_axis = r1 == 0.0 && r2 == 0.0;
  const double circle = on_axis ? dt * plane.h(0.0) : std::numeric_limits<double>::infinity();
  if (!br.found) {
    if (on_axis) return {circle, false};
    return {fallback_distance(plane, a, b), true};
  }
  double best = circle;
  for (const auto& cross : br.crossings) {
    const double lambda = detail::refine_crossing(eval, dt, cross);
    best = std::min(best, fam.length(lambda));
  }
  return {best, false};
}

PlaneDistance quotient_distance(const WarpedPlane& plane, PlanePoint a, PlanePoint b) {
  const double tau = std::abs(std::remainder(b.t - a.t, kTwoPi));
  PlaneDistance best{std::numeric_limits<double>::infinity(), false};
  for (double shift : {tau, kTwoPi - tau}) {
    const PlaneDistance d = point_distance(plane, a, {b.r, a.t + shift});
    if (d.distance < best.distance) best.distance = d.distance;
    best.used_fallback = best.used_fallback || d.used_fallback;
  }
  return best;
}

LoopSize loop_size(const WarpedPlane& plane, const GeodesicArc& arc, double base_r, int samples_per_half) {
  if (arc.base_r != base_r) {
    throw PreconditionError(fmt::format("loop_size: arc solved at base_r = {}, asked for {}", arc.base_r, base_r));
  }
  if (samples_per_half < 1) throw PreconditionError("loop_size needs at least one sample");
  LoopSize out;
  out.radial_gap = arc.r_star - base_r;
  const PlanePoint origin{base_r, 0.0};
  auto take = [&](PlanePoint p) {
    const PlaneDistance d = quotient_distance(plane, origin, p);
    out.size = std::max(out.size, d.distance);
    out.used_fallback = out.used_fallback || d.used_fallback;
    ++out.samples;
  };

  if (arc.circle) {
    const double span = std::min(std::numbers::pi, arc.delta_t);
    for (int k = 0; k <= samples_per_half; ++k) take({base_r, span * k / samples_per_half});
    return out;
  }
  // Outgoing half; the return half is its mirror image under t -> delta_t - t,
  // which is congruent on the quotient since delta_t is a multiple of 2 pi.
  const double root_gap = std::sqrt(arc.r_star - base_r);
  for (int k = 0; k <= samples_per_half; ++k) {
    const double u = root_gap * k / samples_per_half;
    const double r = k == samples_per_half ? base_r : arc.r_star - u * u;
    const double t = 0.5 * arc.delta_t - detail::segment_dt(plane, r, arc.r_star - r, 0.0);
    take({r, t});
  }
  return out;
}

}  // namespace wlab
