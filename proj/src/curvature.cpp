#include "wlab/curvature.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace wlab {

RicciDiag ricci_diag(const WarpParams& params, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError(
        fmt::format("ricci_diag needs finite r > 0 (got {}); use limit_at_origin for the axis", r));
  }
  const WarpEval e = eval_profiles(params, r);
  const double pm1 = params.p - 1.0;
  const double pm2 = params.p - 2.0;
  const double mixed = e.f1 * e.h1 / (e.f * e.h);

  RicciDiag out;
  out.r = r;
  out.ric_H = -e.h2 / e.h - pm1 * e.f2 / e.f;
  out.ric_U = -e.f2 / e.f + pm2 / (e.f * e.f) * one_minus_f1_squared(r) - mixed;
  out.ric_V = -e.h2 / e.h - pm1 * mixed;
  return out;
}

RicciDiag limit_at_origin(const WarpParams& params) {
  // f = r - r^3/4 + O(r^5):  f''/f -> -3/2,  (1-f'^2)/f^2 -> 3/2,  f'/f ~ 1/r.
  // h = 1 - a r^2 + O(r^4): h''/h -> -2a,    h'/h ~ -2a r.
  const double a = params.alpha;
  const double f2_over_f = -1.5;
  const double defect_over_f2 = 1.5;
  const double mixed = -2.0 * a;  // f' h' / (f h)
  const double h2_over_h = -2.0 * a;
  const double pm1 = params.p - 1.0;
  const double pm2 = params.p - 2.0;

  RicciDiag out;
  out.r = 0.0;
  out.ric_H = -h2_over_h - pm1 * f2_over_f;
  out.ric_U = -f2_over_f + pm2 * defect_over_f2 - mixed;
  out.ric_V = -h2_over_h - pm1 * mixed;
  return out;
}

int dimension_threshold(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError(fmt::format("alpha must be positive, got {}", alpha));
  }
  const double bound = std::max(4.0 * alpha + 3.0, 16.0 * alpha * alpha + 8.0 * alpha + 1.0);
  // Absorb round-off so that exact integer bounds are not pushed up by one.
  const double p = std::ceil(bound - 1e-9 * bound);
  return std::max(2, static_cast<int>(p));
}

double ric_H_lower_bound(const WarpParams& params, double r) {
  const double a = params.alpha;
  const double r2 = r * r;
  const double q = 1.0 + r2;
  return r2 / (q * q) * ((params.p - 1.0) / 4.0 - (2.0 * a + 4.0 * a * a));
}

double ric_V_lower_bound(const WarpParams& params, double r) {
  const double a = params.alpha;
  const double r2 = r * r;
  const double q = 1.0 + r2;
  return a * r2 / (q * q) * (params.p - (3.0 + 4.0 * a));
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) {
    throw PreconditionError(fmt::format("log_grid needs 0 < lo <= hi and n > 0 ({}, {}, {})", lo, hi, n));
  }
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = lo;
    return grid;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

PositivityReport positivity_scan(const WarpParams& params, std::span<const double> r_grid,
                                 std::string grid_spec) {
  if (r_grid.empty()) {
    throw PreconditionError("positivity_scan needs a nonempty grid");
  }
  PositivityReport rep;
  rep.params = params;
  rep.grid_spec = std::move(grid_spec);
  rep.grid_size = r_grid.size();
  rep.threshold_met = params.p >= dimension_threshold(params.alpha);

  constexpr double inf = std::numeric_limits<double>::infinity();
  rep.min_H = {inf, 0.0};
  rep.min_U = {inf, 0.0};
  rep.min_V = {inf, 0.0};
  rep.bound_H_holds = true;
  rep.bound_V_holds = true;

  for (double r : r_grid) {
    if (!(r > 0.0)) {
      throw PreconditionError(fmt::format("positivity_scan grid entries must be > 0, got {}", r));
    }
    const RicciDiag ric = ricci_diag(params, r);
    auto take_min = [r](ComponentMin& m, double v) {
      if (v < m.value) m = {v, r};
    };
    take_min(rep.min_H, ric.ric_H);
    take_min(rep.min_U, ric.ric_U);
    take_min(rep.min_V, ric.ric_V);
    if (!(ric.ric_H > ric_H_lower_bound(params, r))) rep.bound_H_holds = false;
    if (!(ric.ric_V > ric_V_lower_bound(params, r))) rep.bound_V_holds = false;
  }

  rep.all_positive = rep.min_H.value > 0.0 && rep.min_U.value > 0.0 && rep.min_V.value > 0.0;
  if (!rep.all_positive) {
    if (!(rep.min_H.value > 0.0)) {
      rep.first_nonpositive = "ric_H";
    } else if (!(rep.min_U.value > 0.0)) {
      rep.first_nonpositive = "ric_U";
    } else {
      rep.first_nonpositive = "ric_V";
    }
  }
  return rep;
}

std::string PositivityReport::verdict() const {
  if (all_positive) {
    return threshold_met ? "all components positive on grid; dimension threshold met"
                         : "all components positive on grid; dimension threshold not met "
                           "(sufficient condition unmet, positivity observed anyway)";
  }
  return fmt::format("{} is nonpositive at r = {} on this grid{}", first_nonpositive,
                     first_nonpositive == "ric_H"   ? min_H.argmin_r
                     : first_nonpositive == "ric_U" ? min_U.argmin_r
                                                    : min_V.argmin_r,
                     threshold_met ? "" : " (dimension threshold not met)");
}

nlohmann::json to_json(const PositivityReport& rep) {
  return {
      {"alpha", rep.params.alpha},
      {"p", rep.params.p},
      {"grid_spec", rep.grid_spec},
      {"grid_size", rep.grid_size},
      {"min_ric_H", rep.min_H.value},
      {"argmin_r_H", rep.min_H.argmin_r},
      {"min_ric_U", rep.min_U.value},
      {"argmin_r_U", rep.min_U.argmin_r},
      {"min_ric_V", rep.min_V.value},
      {"argmin_r_V", rep.min_V.argmin_r},
      {"all_positive", rep.all_positive},
      {"bound_H_holds", rep.bound_H_holds},
      {"bound_V_holds", rep.bound_V_holds},
      {"threshold_met", rep.threshold_met},
      {"verdict", rep.verdict()},
      {"pass", rep.pass()},
  };
}

}  // namespace wlab
