#include "wlab/warp.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace wlab {

WarpParams::WarpParams(double alpha_, int p_) : alpha(alpha_), p(p_) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError(fmt::format("alpha must be positive and finite, got {}", alpha));
  }
  if (p < 2) {
    throw DomainError(fmt::format("p must be at least 2, got {}", p));
  }
}

double warp_h(double alpha, double r) { return std::exp(-alpha * std::log1p(r * r)); }

double warp_h1(double alpha, double r) {
  const double q = 1.0 + r * r;
  return -2.0 * alpha * r * std::exp(-(alpha + 1.0) * std::log(q));
}

double warp_h2(double alpha, double r) {
  const double r2 = r * r;
  const double q = 1.0 + r2;
  return -2.0 * alpha * (1.0 - (2.0 * alpha + 1.0) * r2) * std::exp(-(alpha + 2.0) * std::log(q));
}

double warp_h_rise(double alpha, double r_ref, double gap) { return warp_h_rise(alpha, r_ref, 0.0, gap); }

double warp_h_rise(double alpha, double r_lo, double top, double gap) {
  const double r = r_lo + (top - gap);
  // (r_lo + top)^2 - r^2 = gap (2 r_lo + 2 top - gap)
  const double x = gap * (2.0 * (r_lo + top) - gap) / (1.0 + r * r);
  return warp_h(alpha, r_lo + top) * std::expm1(alpha * std::log1p(x));
}

double one_minus_f1_squared(double r) {
  const double r2 = r * r;
  // f'^2 = (1 + r^2/2)^2 (1 + r^2)^(-5/2)
  return -std::expm1(2.0 * std::log1p(0.5 * r2) - 2.5 * std::log1p(r2));
}

WarpEval eval_profiles(const WarpParams& params, double r) {
  if (!std::isfinite(r) || r < 0.0) {
    throw DomainError(fmt::format("eval_profiles needs finite r >= 0, got {}", r));
  }
  const double r2 = r * r;
  const double lq = std::log1p(r2);
  WarpEval e;
  e.r = r;
  e.f = r * std::exp(-0.25 * lq);
  e.f1 = (1.0 + 0.5 * r2) * std::exp(-1.25 * lq);
  e.f2 = -0.25 * r * (6.0 + r2) * std::exp(-2.25 * lq);
  e.h = warp_h(params.alpha, r);
  e.h1 = warp_h1(params.alpha, r);
  e.h2 = warp_h2(params.alpha, r);
  return e;
}

double circle_length(const WarpParams& params, double r) {
  if (!std::isfinite(r) || r < 0.0) {
    throw DomainError(fmt::format("circle_length needs finite r >= 0, got {}", r));
  }
  return 2.0 * std::numbers::pi * warp_h(params.alpha, r);
}

}  // namespace wlab
