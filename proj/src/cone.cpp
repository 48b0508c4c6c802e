#include "wlab/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "wlab/asymptotics.hpp"
#include "wlab/geodesy.hpp"
#include "wlab/ghdist.hpp"
#include "wlab/parallel.hpp"

namespace wlab {

namespace {

double fit_neg_slope(const std::vector<double>& scales, const std::vector<std::int64_t>& counts, double* r2) {
  const std::size_t n = scales.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(scales[i]);
    my += std::log(static_cast<double>(counts[i]));
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(scales[i]) - mx;
    const double dy = std::log(static_cast<double>(counts[i])) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw PreconditionError("box counting needs at least two distinct scales");
  *r2 = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  return -sxy / sxx;
}

void check_deltas(std::span<const double> delta_list) {
  if (delta_list.size() < 2) throw PreconditionError("box counting needs at least two scales");
  for (double d : delta_list) {
    if (!(d > 0.0 && d <= 1.0)) throw PreconditionError(fmt::format("box scale {} outside (0, 1]", d));
  }
}

}  // namespace

OrbitMetric OrbitMetric::from_table(std::vector<double> b, std::vector<double> dhat, double exponent) {
  if (b.empty() || b.size() != dhat.size()) throw PreconditionError("orbit table needs matching nonempty columns");
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b[i] > 0.0 && b[i] <= 1.0) || !(dhat[i] > 0.0)) {
      throw PreconditionError(fmt::format("orbit table entry {} out of range: b = {}, dhat = {}", i, b[i], dhat[i]));
    }
    if (i > 0 && !(b[i] > b[i - 1])) throw PreconditionError("orbit table b column must increase strictly");
    if (i > 0 && !(dhat[i] > dhat[i - 1])) {
      throw SolverError(fmt::format("orbit table not strictly increasing at b = {}: {} <= {}", b[i], dhat[i],
                                    dhat[i - 1]));
    }
  }
  OrbitMetric m;
  m.b_ = std::move(b);
  m.dhat_ = std::move(dhat);
  m.exponent_ = exponent;
  return m;
}

double OrbitMetric::value(double b) const {
  if (b == 0.0) return 0.0;
  if (!(b >= b_.front() * (1.0 - 1e-12) && b <= b_.back() * (1.0 + 1e-12))) {
    throw DomainError(fmt::format("orbit coordinate {} outside the table range [{}, {}]", b, b_.front(), b_.back()));
  }
  b = std::clamp(b, b_.front(), b_.back());
  auto it = std::lower_bound(b_.begin(), b_.end(), b);
  if (*it == b) return dhat_[it - b_.begin()];
  const std::size_t k = static_cast<std::size_t>(it - b_.begin());
  const double w = std::log(b / b_[k - 1]) / std::log(b_[k] / b_[k - 1]);
  return std::exp(std::log(dhat_[k - 1]) + w * std::log(dhat_[k] / dhat_[k - 1]));
}

double OrbitMetric::inverse(double delta) const {
  if (!(delta >= dhat_.front()) || !(delta <= dhat_.back())) {
    throw DomainError(fmt::format("orbit diameter {} outside the resolved range [{}, {}]", delta, dhat_.front(),
                                  dhat_.back()));
  }
  auto it = std::lower_bound(dhat_.begin(), dhat_.end(), delta);
  std::size_t k = static_cast<std::size_t>(it - dhat_.begin());
  if (dhat_[k] == delta) return b_[k];
  double lo = b_[k - 1], hi = b_[k];
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = std::sqrt(lo * hi);
    (value(mid) <= delta ? lo : hi) = mid;
  }
  return lo;
}

OrbitMetric build_orbit_metric(const WarpParams& params, std::int64_t L_ref, int n_samples, int jobs) {
  if (L_ref < 10000) throw PreconditionError(fmt::format("orbit metric needs L_ref >= 1e4, got {}", L_ref));
  if (n_samples < 50) throw PreconditionError(fmt::format("orbit metric needs >= 50 samples, got {}", n_samples));
  const double L = static_cast<double>(L_ref);
  std::vector<std::int64_t> ls;
  for (int i = 0; i < n_samples; ++i) {
    const double b = std::exp(std::log(1.0 / L) * (1.0 - static_cast<double>(i) / (n_samples - 1)));
    const auto l = std::max<std::int64_t>(1, std::llround(b * L));
    if (ls.empty() || l > ls.back()) ls.push_back(l);
  }
  if (ls.back() != L_ref) ls.push_back(L_ref);
  const auto samples = sample_growth(params, ls, jobs);
  const double D_ref = samples.back().D;
  std::vector<double> b, dhat;
  for (const auto& smp : samples) {
    b.push_back(static_cast<double>(smp.l) / L);
    dhat.push_back(smp.D / D_ref);
  }
  OrbitMetric m = OrbitMetric::from_table(std::move(b), std::move(dhat), params.growth_exponent());
  m.L_ref = L_ref;
  m.D_ref = D_ref;
  m.params = params;
  return m;
}

HolderConstants holder_scan(const OrbitMetric& metric, double b_min) {
  HolderConstants hc;
  hc.C1 = std::numeric_limits<double>::infinity();
  hc.C2 = 0.0;
  for (std::size_t i = 0; i < metric.b().size(); ++i) {
    const double b = metric.b()[i];
    if (b < b_min) continue;
    const double q = metric.dhat()[i] / std::pow(b, metric.exponent());
    if (q < hc.C1) {
      hc.C1 = q;
      hc.b_at_C1 = b;
    }
    if (q > hc.C2) {
      hc.C2 = q;
      hc.b_at_C2 = b;
    }
  }
  if (hc.C2 == 0.0) throw PreconditionError(fmt::format("no orbit samples with b >= {}", b_min));
  return hc;
}

std::vector<double> geometric_deltas(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo) || n < 2) throw PreconditionError("geometric_deltas needs 0 < lo < hi and n >= 2");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(hi * std::pow(lo / hi, static_cast<double>(i) / (n - 1)));
  return out;
}

BoxCountResult box_dimension(const OrbitMetric& metric, std::span<const double> delta_list) {
  check_deltas(delta_list);
  BoxCountResult out;
  for (double delta : delta_list) {
    if (delta < metric.delta_resolution()) {
      throw DomainError(fmt::format("box scale {} below the table resolution {}", delta, metric.delta_resolution()));
    }
    const double width = metric.inverse(delta);
    out.scales.push_back(delta);
    out.counts.push_back(static_cast<std::int64_t>(std::ceil(1.0 / width - 1e-12)));
  }
  out.dimension = fit_neg_slope(out.scales, out.counts, &out.r_squared);
  return out;
}

BoxCountResult snowflake_oracle(double theta, std::span<const double> delta_list) {
  if (!(theta > 0.0 && theta <= 1.0)) throw PreconditionError(fmt::format("snowflake exponent {} not in (0, 1]", theta));
  check_deltas(delta_list);
  BoxCountResult out;
  for (double delta : delta_list) {
    out.scales.push_back(delta);
    out.counts.push_back(static_cast<std::int64_t>(std::ceil(std::pow(delta, -1.0 / theta) - 1e-12)));
  }
  out.dimension = fit_neg_slope(out.scales, out.counts, &out.r_squared);
  return out;
}

std::vector<HalflineRow> halfline_limit_check(const WarpParams& params, std::span<const double> scales,
                                              const HalflineOptions& options) {
  for (std::size_t i = 1; i < scales.size(); ++i) {
    if (!(scales[i] > scales[i - 1])) throw PreconditionError("halfline scales must increase");
  }
  if (options.radii.empty() || options.angles.empty()) throw PreconditionError("halfline needs radii and angles");
  const WarpedPlane plane{params};
  const double a_min = *std::min_element(options.radii.begin(), options.radii.end());
  std::vector<HalflineRow> rows;
  for (double s : scales) {
    if (!(s > 0.0)) throw PreconditionError("halfline scales must be positive");
    HalflineRow row;
    row.s = s;
    row.collapse_scale = 2.0 * std::numbers::pi * plane.h(a_min * s) / s;
    for (double a : options.radii) {
      for (double b : options.radii) {
        for (double ta : options.angles) {
          for (double tb : options.angles) {
            const PlaneDistance d = quotient_distance(plane, {a * s, ta}, {b * s, tb});
            row.max_deviation = std::max(row.max_deviation, std::abs(d.distance / s - std::abs(a - b)));
            row.used_fallback = row.used_fallback || d.used_fallback;
          }
        }
      }
    }
    row.within_scale = row.max_deviation <= row.collapse_scale;
    rows.push_back(row);
  }
  return rows;
}

FlatnessResult flatness_off_orbit(const WarpParams& params, double s, double rho, int n, std::uint64_t seed,
                                  int jobs) {
  if (!(s > 0.0)) throw PreconditionError(fmt::format("flatness needs s > 0, got {}", s));
  if (!(rho > 0.0 && rho < 0.2)) throw PreconditionError(fmt::format("flatness needs rho in (0, 0.2), got {}", rho));
  if (n < 2) throw PreconditionError("flatness needs at least two points");
  const WarpedPlane plane{params};
  const double radius = rho * s;
  const double hs = plane.h(s);

  // Chart points (x, y) in the disk; the center is always included.
  std::mt19937_64 rng(seed);
  std::vector<double> xs{0.0}, ys{0.0};
  while (static_cast<int>(xs.size()) < n) {
    const double u = unit_double(rng());
    const double v = unit_double(rng());
    const double rr = radius * std::sqrt(u);
    const double phi = 2.0 * std::numbers::pi * v;
    xs.push_back(rr * std::cos(phi));
    ys.push_back(rr * std::sin(phi));
  }

  const std::size_t m = xs.size();
  std::vector<double> dA(m * m, 0.0), dB(m * m, 0.0);
  std::vector<std::pair<std::size_t, std::size_t>> jobs_list;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) jobs_list.emplace_back(i, j);
  }
  std::vector<char> fallback(jobs_list.size(), 0);
  parallel_for(jobs_list.size(), jobs, [&](std::size_t k) {
    const auto [i, j] = jobs_list[k];
    const PlaneDistance d = point_distance(plane, {s + xs[i], ys[i] / hs}, {s + xs[j], ys[j] / hs});
    dA[i * m + j] = dA[j * m + i] = d.distance;
    dB[i * m + j] = dB[j * m + i] = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
    fallback[k] = d.used_fallback ? 1 : 0;
  });

  const FiniteMetricSpace A(m, std::move(dA));
  const FiniteMetricSpace B(m, std::move(dB));
  FlatnessResult out;
  out.s = s;
  out.rho = rho;
  out.n = static_cast<int>(m);
  out.seed = seed;
  out.distortion = correspondence_distortion(A, B, Correspondence::identity(m));
  out.normalized_distortion = out.distortion / (2.0 * radius);
  out.gh_lower = gh_lower_diam(A, B);
  out.used_fallback = std::any_of(fallback.begin(), fallback.end(), [](char c) { return c != 0; });
  return out;
}

}  // namespace wlab
