#include "wlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "wlab/geodesy.hpp"
#include "wlab/parallel.hpp"

namespace wlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::vector<std::int64_t> geometric_l_list(std::int64_t lo, std::int64_t hi, int per_decade) {
  if (lo < 1 || hi < lo || per_decade < 1) {
    throw PreconditionError(fmt::format("geometric_l_list needs 1 <= lo <= hi, per_decade >= 1 ({}, {}, {})", lo,
                                        hi, per_decade));
  }
  const double a = std::log10(static_cast<double>(lo));
  const double b = std::log10(static_cast<double>(hi));
  const int steps = std::max(1, static_cast<int>(std::ceil((b - a) * per_decade)));
  std::vector<std::int64_t> out;
  for (int i = 0; i <= steps; ++i) {
    const auto l = static_cast<std::int64_t>(std::llround(std::pow(10.0, a + (b - a) * i / steps)));
    if (out.empty() || l > out.back()) out.push_back(std::clamp(l, lo, hi));
  }
  return out;
}

std::vector<DistanceSample> sample_growth(const WarpParams& params, std::span<const std::int64_t> l_list,
                                          int jobs) {
  if (!std::is_sorted(l_list.begin(), l_list.end()) || (!l_list.empty() && l_list.front() < 1)) {
    throw PreconditionError("sample_growth needs a sorted list of positive winding numbers");
  }
  const WarpedPlane plane{params};
  std::vector<DistanceSample> out(l_list.size());
  parallel_for(l_list.size(), jobs, [&](std::size_t i) {
    const std::int64_t l = l_list[i];
    try {
      out[i] = {l, cover_distance(plane, 0.0, l)};
    } catch (const SolverError& e) {
      throw SolverError(fmt::format("sample_growth: l = {}: {}", l, e.what()));
    }
  });
  return out;
}

double growth_bound_threshold(double alpha) { return std::pow(9.0, 1.0 + 1.0 / (2.0 * alpha)); }

double growth_lower_constant(double alpha) { return 2.0 * std::pow(9.0, -1.0 / (2.0 * alpha)); }

BoundReport check_lemma_bounds(const WarpParams& params, std::span<const DistanceSample> samples) {
  if (samples.empty()) throw PreconditionError("check_lemma_bounds needs samples");
  const WarpedPlane plane{params};
  const double theta = params.growth_exponent();
  const double C = growth_lower_constant(params.alpha);
  // Integer comparison: the smallest admissible l is ceil(threshold).
  const double threshold = growth_bound_threshold(params.alpha);
  const auto l_min = static_cast<std::int64_t>(std::ceil(threshold - 1e-9 * threshold));

  BoundReport rep;
  for (const auto& smp : samples) {
    BoundRow row;
    row.l = smp.l;
    row.D = smp.D;
    const double lt = std::pow(static_cast<double>(smp.l), theta);
    row.lower = C * lt - 2.0;
    row.upper = 9.0 * lt;
    row.proof_upper = (2.0 + 2.0 * kPi) * lt;
    row.sigma_upper = sigma_competitor_min(plane, smp.l);
    row.in_range = smp.l >= l_min;
    if (row.in_range) {
      ++rep.checked;
      row.pass = row.D >= row.lower && row.D <= row.upper && row.D <= row.proof_upper && row.D <= row.sigma_upper;
      if (!row.pass) ++rep.failed;
    } else {
      ++rep.out_of_range;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

ScalingFit fit_exponent(std::span<const DistanceSample> samples, std::pair<std::int64_t, std::int64_t> window) {
  std::vector<double> x, y;
  for (const auto& s : samples) {
    if (s.l >= window.first && s.l <= window.second) {
      x.push_back(std::log(static_cast<double>(s.l)));
      y.push_back(std::log(s.D));
    }
  }
  if (x.size() < 4) {
    throw PreconditionError(fmt::format("fit_exponent: {} samples in window [{}, {}], need at least 4", x.size(),
                                        window.first, window.second));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw PreconditionError("fit_exponent: degenerate window (all l equal)");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  fit.l_min = window.first;
  fit.l_max = window.second;
  fit.n = x.size();
  return fit;
}

double far_length_constant(double alpha) { return kPi / std::pow(1.0 + kPi, 2.0 * alpha); }

FarLoopResult far_loop(const WarpParams& params, double s, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw PreconditionError(fmt::format("far_loop needs epsilon in (0, 1), got {}", epsilon));
  }
  if (!(s > 0.0) || !std::isfinite(s)) throw PreconditionError(fmt::format("far_loop needs s > 0, got {}", s));
  const double a = params.alpha;
  const double top = epsilon * s * std::pow(1.0 + s * s, a);
  FarLoopResult out;
  out.s = s;
  out.epsilon = epsilon;
  out.l_lo = static_cast<std::int64_t>(std::ceil(0.5 * top));
  out.l_hi = static_cast<std::int64_t>(std::floor(top));
  if (out.l_hi < std::max<std::int64_t>(out.l_lo, 1)) {
    // The range is nonempty exactly when eps s (1+s^2)^alpha >= 1.
    double lo = 0.0, hi = std::max(1.0, s);
    while (epsilon * hi * std::pow(1.0 + hi * hi, a) < 1.0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (epsilon * mid * std::pow(1.0 + mid * mid, a) < 1.0 ? lo : hi) = mid;
    }
    throw PreconditionError(fmt::format(
        "far_loop: no integer winding in [{}, {}] at s = {}; need s >= {:.6g} for epsilon = {}", 0.5 * top, top, s,
        hi, epsilon));
  }
  out.l = out.l_hi;

  const WarpedPlane plane{params};
  const GeodesicArc arc = solve_winding(plane, s, 2.0 * kPi * static_cast<double>(out.l));
  const LoopSize ls = loop_size(plane, arc, s);
  out.length = arc.length;
  out.size = ls.size;
  out.radial_gap = ls.radial_gap;
  out.used_fallback = ls.used_fallback;
  out.length_lower = epsilon * far_length_constant(a) * s;
  out.length_upper = epsilon * 2.0 * kPi * s;
  out.trivial_upper = static_cast<double>(out.l) * 2.0 * kPi * std::pow(1.0 + s * s, -a);
  out.length_ok = out.length >= out.length_lower && out.length <= out.length_upper &&
                  out.length <= out.trivial_upper;
  out.size_ok = out.size <= 0.5 * out.length;
  return out;
}

double far_delta_root(double alpha, double epsilon) {
  if (!(epsilon > 0.0) || !(alpha > 0.0)) throw PreconditionError("far_delta_root needs alpha, epsilon > 0");
  const double k = epsilon * epsilon * kPi * kPi;
  // delta^2 - k [1 - (1+delta)^(-4a)] = delta * (delta - k phi(delta)); phi decreases,
  // so the bracket (0, eps pi] holds exactly one positive root.
  auto g = [&](double d) { return d - k * (-std::expm1(-4.0 * alpha * std::log1p(d)) / d); };
  double lo = 1e-300;
  double hi = epsilon * kPi;
  boost::uintmax_t iters = 300;
  boost::math::tools::eps_tolerance<double> tol(50);
  const auto root = boost::math::tools::toms748_solve(g, lo, hi, g(lo), g(hi), tol, iters);
  return 0.5 * (root.first + root.second);
}

std::vector<RatioPoint> ratio_curve(const WarpParams& params, double s, std::span<const double> eps_list,
                                    int jobs) {
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] < 1.0) || (i > 0 && !(eps_list[i] < eps_list[i - 1]))) {
      throw PreconditionError("ratio_curve needs a strictly decreasing epsilon list in (0, 1)");
    }
  }
  std::vector<RatioPoint> out(eps_list.size());
  parallel_for(eps_list.size(), jobs, [&](std::size_t i) {
    RatioPoint& pt = out[i];
    pt.epsilon = eps_list[i];
    pt.loop = far_loop(params, s, pt.epsilon);
    pt.ratio = pt.loop.size / pt.loop.length;
    pt.delta = far_delta_root(params.alpha, pt.epsilon);
    pt.ceiling = pt.delta / (far_length_constant(params.alpha) * pt.epsilon);
  });
  return out;
}

}  // namespace wlab
