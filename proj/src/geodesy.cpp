#include "wlab/geodesy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "clairaut.hpp"

namespace wlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Admissible Clairaut constants are [kCFrac h(base), (1 - kCFrac) h(base)].
constexpr double kCFrac = 1e-12;

void require_curved(const WarpedPlane& plane, const char* what) {
  if (plane.is_flat()) {
    throw DomainError(fmt::format("{}: the flat calibration plane has no turning arcs", what));
  }
}

// Turning-radius gap g = r_star - base for c = h(base) * ratio (closed form of h^-1).
double gap_for_ratio(double alpha, double base, double ratio) {
  const double q = 1.0 + base * base;
  const double delta = q * std::expm1(-std::log(ratio) / alpha);  // r_star^2 - base^2
  return delta / (std::sqrt(base * base + delta) + base);
}

GeodesicArc arc_from_gap(const WarpedPlane& plane, double base_r, double gap) {
  GeodesicArc arc;
  arc.base_r = base_r;
  arc.r_star = base_r + gap;
  arc.c = plane.h(base_r + gap);
  arc.delta_t = 2.0 * detail::segment_dt(plane, base_r, gap, 0.0);
  arc.length = 2.0 * gap + 2.0 * detail::segment_length_excess(plane, base_r, gap, 0.0);
  return arc;
}

}  // namespace

GeodesicArc arc_from_turning(const WarpedPlane& plane, double base_r, double r_star) {
  require_curved(plane, "arc_from_turning");
  if (!(base_r >= 0.0) || !(r_star > base_r) || !std::isfinite(r_star)) {
    throw DomainError(fmt::format("arc_from_turning needs r_star > base_r >= 0 ({}, {})", r_star, base_r));
  }
  return arc_from_gap(plane, base_r, r_star - base_r);
}

GeodesicArc arc_from_clairaut(const WarpedPlane& plane, double base_r, double c) {
  require_curved(plane, "arc_from_clairaut");
  if (!(base_r >= 0.0) || !std::isfinite(base_r)) {
    throw DomainError(fmt::format("arc_from_clairaut needs finite base_r >= 0, got {}", base_r));
  }
  const double hb = plane.h(base_r);
  const double ac = std::abs(c);
  if (ac == 0.0) {
    throw DomainError("arc_from_clairaut: c = 0 is the degenerate radial arc (delta_t = 0, no turning point)");
  }
  if (!(ac < hb)) {
    throw DomainError(fmt::format("arc_from_clairaut: |c| = {} >= h(base_r) = {}, no outward turning arc", ac, hb));
  }
  GeodesicArc arc = arc_from_gap(plane, base_r, gap_for_ratio(plane.alpha(), base_r, ac / hb));
  arc.c = c;
  return arc;
}

GeodesicArc solve_winding(const WarpedPlane& plane, double base_r, double T) {
  require_curved(plane, "solve_winding");
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw PreconditionError(fmt::format("solve_winding needs finite T > 0, got {}", T));
  }
  if (!(base_r >= 0.0) || !std::isfinite(base_r)) {
    throw DomainError(fmt::format("solve_winding needs finite base_r >= 0, got {}", base_r));
  }
  const double alpha = plane.alpha();
  const double lg_min = std::log(gap_for_ratio(alpha, base_r, 1.0 - kCFrac));
  const double lg_max = std::log(gap_for_ratio(alpha, base_r, kCFrac));
  const double lg_start = std::clamp(std::log(1e-3 * (1.0 + base_r)), lg_min, lg_max);

  auto delta_t_of = [&](double lg) {
    return 2.0 * detail::segment_dt(plane, base_r, std::exp(lg), 0.0);
  };

  // The fiber circle is a geodesic only where h' = 0, i.e. on the axis.
  const bool axis = base_r == 0.0;
  GeodesicArc circle;
  circle.base_r = base_r;
  circle.r_star = base_r;
  circle.c = plane.h(base_r);
  circle.length = T * plane.h(base_r);
  circle.delta_t = T;
  circle.circle = true;

  const detail::BracketResult br = detail::bracket_target(delta_t_of, T, lg_start, std::log(4.0), lg_min, lg_max);
  if (!br.found) {
    if (axis) return circle;
    throw SolverError(fmt::format(
        "solve_winding: no bracket for T = {} at base_r = {} with c in [{:g} h, (1 - {:g}) h]", T, base_r,
        kCFrac, kCFrac));
  }

  GeodesicArc best;
  best.length = std::numeric_limits<double>::infinity();
  for (const auto& cross : br.crossings) {
    const double lg = detail::refine_crossing(delta_t_of, T, cross);
    GeodesicArc arc = arc_from_gap(plane, base_r, std::exp(lg));
    if (arc.length < best.length) best = arc;
  }
  best.monotone_bracket = br.monotone;
  best.roots_found = static_cast<int>(br.crossings.size());
  if (axis && circle.length < best.length) return circle;
  return best;
}

double cover_distance(const WarpedPlane& plane, double base_r, std::int64_t l) {
  if (l < 1) throw PreconditionError(fmt::format("cover_distance needs l >= 1, got {}", l));
  return solve_winding(plane, base_r, kTwoPi * static_cast<double>(l)).length;
}

double sigma_competitor(const WarpedPlane& plane, std::int64_t l, double r) {
  return 2.0 * r + static_cast<double>(l) * kTwoPi * plane.h(r);
}

double sigma_competitor_min(const WarpedPlane& plane, std::int64_t l, int n) {
  if (n < 2) throw PreconditionError("sigma_competitor_min needs at least 2 grid points");
  // The continuous optimum sits near (2 pi alpha l)^(1/(1+2 alpha)); the grid spans twice that.
  const double theta = plane.params().growth_exponent();
  const double r_hi = 2.0 * std::pow(2.0 * std::numbers::pi * plane.alpha() * static_cast<double>(l) + 1.0, theta) + 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    best = std::min(best, sigma_competitor(plane, l, r_hi * i / (n - 1)));
  }
  return best;
}

ArcOdeResult integrate_arc_ode(const WarpedPlane& plane, double base_r, double c) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 4>;  // r, t, dr/ds, dt/ds

  const double hb = plane.h(base_r);
  if (!(c > 0.0 && c < hb)) {
    throw DomainError(fmt::format("integrate_arc_ode needs 0 < c < h(base_r), got c = {}", c));
  }
  auto rhs = [&](const State& x, State& dx, double /*s*/) {
    const double h = plane.h(x[0]);
    const double h1 = plane.dh(x[0]);
    dx[0] = x[2];
    dx[1] = x[3];
    dx[2] = h * h1 * x[3] * x[3];
    dx[3] = -2.0 * (h1 / h) * x[2] * x[3];
  };

  const double dr0 = std::sqrt((hb - c) * (hb + c)) / hb;
  State x{base_r, 0.0, dr0, c / (hb * hb)};
  auto stepper = odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(x, 0.0, 1e-4);

  ArcOdeResult out;
  auto drift = [&](const State& y) {
    const double h = plane.h(y[0]);
    return std::abs(h * h * y[3] - c);
  };
  const double s_cap = 1e9;
  while (stepper.current_time() < s_cap) {
    stepper.do_step(rhs);
    ++out.steps;
    const State& y = stepper.current_state();
    out.max_clairaut_drift = std::max(out.max_clairaut_drift, drift(y));
    if (y[2] <= 0.0) {
      // Turning point inside the last step: bisect on the dense output.
      double lo = stepper.previous_time();
      double hi = stepper.current_time();
      State z;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, z);
        if (z[2] > 0.0) lo = mid; else hi = mid;
      }
      stepper.calc_state(0.5 * (lo + hi), z);
      out.length = 2.0 * 0.5 * (lo + hi);
      out.delta_t = 2.0 * z[1];
      return out;
    }
  }
  throw SolverError("integrate_arc_ode: no turning point before the arclength cap");
}

}  // namespace wlab
