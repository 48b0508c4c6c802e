#include "clairaut.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace wlab::detail {

namespace {

constexpr double kQuadTol = 1e-12;
constexpr unsigned kQuadDepth = 12;
constexpr double kTinyU = 1e-150;

template <class F>
double integrate_u(F&& f, double upper) {
  using boost::math::quadrature::gauss_kronrod;
  // The recursive driver compares an unscaled error estimate against an
  // absolute tolerance, so short intervals never converge. Integrating over
  // [0, 1] keeps the two on the same scale.
  auto g = [&](double v) { return upper * f(upper * v); };
  double err = 0.0;
  return gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, kQuadDepth, kQuadTol, &err);
}

// Values shared by both integrands at u: h(r), c, h - c, h + c, and
// s = sqrt(h^2 - c^2) / u.
struct Local {
  double h, c, hmc, hpc, s;
};

Local local_at(const WarpedPlane& plane, double r_lo, double gap, double omega, double u) {
  u = std::max(u, kTinyU);
  const double u2 = u * u;
  const double h_hi = plane.h(r_lo + gap);
  Local L;
  L.c = (1.0 - omega) * h_hi;
  L.h = plane.h(r_lo + (gap - u2));
  L.hmc = plane.h_rise(r_lo, gap, u2) + omega * h_hi;
  L.hpc = L.h + L.c;
  L.s = std::sqrt(L.hmc / u2 * L.hpc);
  return L;
}

}  // namespace

double segment_dt(const WarpedPlane& plane, double r_lo, double gap, double omega) {
  if (!(gap > 0.0) || omega >= 1.0) return 0.0;
  const double upper = std::sqrt(gap);
  auto f = [&](double u) {
    const Local L = local_at(plane, r_lo, gap, omega, u);
    return 2.0 * L.c / (L.h * L.s);
  };
  return integrate_u(f, upper);
}

double segment_length_excess(const WarpedPlane& plane, double r_lo, double gap, double omega) {
  if (!(gap > 0.0) || omega >= 1.0) return 0.0;
  const double upper = std::sqrt(gap);
  auto f = [&](double u) {
    const Local L = local_at(plane, r_lo, gap, omega, u);
    // ds/dr - 1 = c^2 / (w (h + w)), w = sqrt(h^2 - c^2) = u s; times dr/du = 2u.
    const double w = std::max(u, kTinyU) * L.s;
    return 2.0 * L.c * L.c / (L.s * (L.h + w));
  };
  return integrate_u(f, upper);
}

BracketResult bracket_target(const std::function<double(double)>& eval, double target,
                             double start, double step, double pmin, double pmax) {
  BracketResult out;
  out.value_at_min = std::numeric_limits<double>::quiet_NaN();
  std::vector<ScanSample> seen;
  auto visit = [&](double p) {
    const double v = eval(p);
    seen.push_back({p, v});
    if (p == pmin) out.value_at_min = v;
    return v;
  };

  double p = std::clamp(start, pmin, pmax);
  double v = visit(p);
  Crossing cross{};
  if (v < target) {
    while (true) {
      if (p >= pmax) return out;
      const double q = std::min(p + step, pmax);
      const double w = visit(q);
      if (w >= target) {
        cross = {p, q, v, w};
        break;
      }
      p = q;
      v = w;
    }
  } else {
    while (true) {
      if (p <= pmin) return out;
      const double q = std::max(p - step, pmin);
      const double w = visit(q);
      if (w < target) {
        cross = {q, p, w, v};
        break;
      }
      p = q;
      v = w;
    }
  }
  out.found = true;

  // Monotonicity over the visited samples plus three interior probes.
  for (int k = 1; k <= 3; ++k) {
    visit(cross.lo + (cross.hi - cross.lo) * k / 4.0);
  }
  std::sort(seen.begin(), seen.end(),
            [](const ScanSample& a, const ScanSample& b) { return a.param < b.param; });
  for (std::size_t i = 1; i < seen.size(); ++i) {
    if (seen[i].value < seen[i - 1].value) out.monotone = false;
  }
  if (out.monotone) {
    out.crossings.push_back(cross);
    return out;
  }

  std::clog << "warning: delta_t not monotone on scanned bracket; dense scan over [" << seen.front().param
            << ", " << seen.back().param << "]\n";
  constexpr int kDense = 240;
  const double lo = seen.front().param;
  const double hi = seen.back().param;
  double prev_p = lo;
  double prev_v = eval(lo);
  for (int i = 1; i <= kDense; ++i) {
    const double q = lo + (hi - lo) * i / kDense;
    const double w = eval(q);
    if ((prev_v < target) != (w < target)) {
      out.crossings.push_back({prev_p, q, prev_v, w});
    }
    prev_p = q;
    prev_v = w;
  }
  if (out.crossings.empty()) out.crossings.push_back(cross);
  return out;
}

double refine_crossing(const std::function<double(double)>& eval, double target, Crossing c) {
  const double flo = c.value_lo - target;
  const double fhi = c.value_hi - target;
  if (flo == 0.0) return c.lo;
  if (fhi == 0.0) return c.hi;
  auto f = [&](double p) { return eval(p) - target; };
  boost::uintmax_t max_iter = 200;
  boost::math::tools::eps_tolerance<double> tol(46);
  const auto root = boost::math::tools::toms748_solve(f, c.lo, c.hi, flo, fhi, tol, max_iter);
  return 0.5 * (root.first + root.second);
}

}  // namespace wlab::detail
