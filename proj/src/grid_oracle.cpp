#include "wlab/grid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

namespace wlab {

namespace {

struct Offset {
  int di;
  int dj;
};

std::vector<Offset> stencil_offsets(int stencil) {
  std::vector<Offset> base{{1, 0}, {1, 1}};
  if (stencil >= 16) base.insert(base.end(), {{1, 2}, {2, 1}});
  if (stencil >= 32) base.insert(base.end(), {{1, 3}, {3, 1}, {2, 3}, {3, 2}});
  std::vector<Offset> all;
  for (auto [a, b] : base) {
    // All sign and transpose variants, without duplicates.
    const Offset cand[] = {{a, b}, {b, a}};
    for (auto [x, y] : cand) {
      for (int sx : {1, -1}) {
        for (int sy : {1, -1}) {
          Offset o{sx * x, sy * y};
          const bool dup = std::any_of(all.begin(), all.end(),
                                       [&](const Offset& q) { return q.di == o.di && q.dj == o.dj; });
          if (!dup) all.push_back(o);
        }
      }
    }
  }
  return all;
}

double sigma_span(const WarpedPlane& plane, double r_min, double r_max) {
  if (plane.is_flat()) return r_max - r_min;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double r) { return 1.0 / plane.h(r); }, r_min, r_max, 20, 1e-12, &err);
}

// r at sigma = k * dsigma / 2 for k = 0 .. 2 (n_r - 1), from dr/dsigma = h(r).
std::vector<double> half_row_radii(const WarpedPlane& plane, double r_min, double dsigma, int n_r) {
  const int n_half = 2 * (n_r - 1) + 1;
  std::vector<double> r(n_half);
  r[0] = r_min;
  const int sub = 4;
  const double step = 0.5 * dsigma / sub;
  for (int k = 1; k < n_half; ++k) {
    double y = r[k - 1];
    for (int s = 0; s < sub; ++s) {
      const double k1 = plane.h(y);
      const double k2 = plane.h(y + 0.5 * step * k1);
      const double k3 = plane.h(y + 0.5 * step * k2);
      const double k4 = plane.h(y + step * k3);
      y += step * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    }
    r[k] = y;
  }
  return r;
}

}  // namespace

GridOracle GridOracle::isotropic(const WarpedPlane& plane, double r_min, double r_max, double t_min,
                                 double t_max, long long min_nodes, int stencil) {
  if (!(r_max > r_min) || !(t_max > t_min) || min_nodes < 4) {
    throw PreconditionError(fmt::format("GridOracle::isotropic needs a proper rectangle ([{}, {}] x [{}, {}])",
                                        r_min, r_max, t_min, t_max));
  }
  const double ss = sigma_span(plane, r_min, r_max);
  const double ts = t_max - t_min;
  double cell = std::sqrt(ss * ts / static_cast<double>(min_nodes));
  GridOracle g;
  g.r_min = r_min;
  g.r_max = r_max;
  g.t_min = t_min;
  g.t_max = t_max;
  g.stencil = stencil;
  for (int it = 0; it < 1000; ++it) {
    g.n_r = std::max(2, static_cast<int>(std::ceil(ss / cell)) + 1);
    g.n_t = std::max(2, static_cast<int>(std::ceil(ts / cell)) + 1);
    if (g.nodes() >= min_nodes) break;
    cell *= 0.99;
  }
  return g;
}

double oracle_distance(const GridOracle& oracle, const WarpedPlane& plane, PlanePoint a, PlanePoint b) {
  if (oracle.n_r < 2 || oracle.n_t < 2) throw PreconditionError("oracle grid needs at least 2x2 nodes");
  if (oracle.stencil != 8 && oracle.stencil != 16 && oracle.stencil != 32) {
    throw PreconditionError(fmt::format("unsupported stencil {}", oracle.stencil));
  }
  auto inside = [&](PlanePoint p) {
    const double er = 1e-9 * (1.0 + std::abs(oracle.r_max - oracle.r_min));
    const double et = 1e-9 * (1.0 + std::abs(oracle.t_max - oracle.t_min));
    return p.r >= oracle.r_min - er && p.r <= oracle.r_max + er && p.t >= oracle.t_min - et &&
           p.t <= oracle.t_max + et;
  };
  if (!inside(a) || !inside(b)) {
    throw PreconditionError(fmt::format("oracle_distance: point outside rectangle ({}, {}) / ({}, {})", a.r, a.t,
                                        b.r, b.t));
  }

  const int n_r = oracle.n_r;
  const int n_t = oracle.n_t;
  const double dsigma = sigma_span(plane, oracle.r_min, oracle.r_max) / (n_r - 1);
  const double dt = (oracle.t_max - oracle.t_min) / (n_t - 1);
  const std::vector<double> r_half = half_row_radii(plane, oracle.r_min, dsigma, n_r);
  std::vector<double> h_half(r_half.size());
  std::transform(r_half.begin(), r_half.end(), h_half.begin(), [&](double r) { return plane.h(r); });

  auto row_of = [&](double r) {
    // Nearest full row by radius.
    int best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    auto it = std::lower_bound(r_half.begin(), r_half.end(), r);
    const int k = static_cast<int>(it - r_half.begin());
    for (int cand = std::max(0, k / 2 - 1); cand <= std::min(n_r - 1, k / 2 + 1); ++cand) {
      const double gap = std::abs(r_half[2 * cand] - r);
      if (gap < best_gap) {
        best_gap = gap;
        best = cand;
      }
    }
    return best;
  };
  auto col_of = [&](double t) {
    return std::clamp(static_cast<int>(std::lround((t - oracle.t_min) / dt)), 0, n_t - 1);
  };
  const long long src = static_cast<long long>(row_of(a.r)) * n_t + col_of(a.t);
  const long long dst = static_cast<long long>(row_of(b.r)) * n_t + col_of(b.t);
  if (src == dst) return 0.0;

  const std::vector<Offset> offsets = stencil_offsets(oracle.stencil);
  std::vector<double> chart_len(offsets.size());
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    chart_len[k] = std::hypot(offsets[k].di * dsigma, offsets[k].dj * dt);
  }

  std::vector<double> dist(static_cast<std::size_t>(oracle.nodes()), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, long long>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[src] = 0.0;
  heap.push({0.0, src});
  while (!heap.empty()) {
    const auto [d, node] = heap.top();
    heap.pop();
    if (d > dist[node]) continue;
    if (node == dst) return d;
    const int i = static_cast<int>(node / n_t);
    const int j = static_cast<int>(node % n_t);
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      const int ni = i + offsets[k].di;
      const int nj = j + offsets[k].dj;
      if (ni < 0 || ni >= n_r || nj < 0 || nj >= n_t) continue;
      const double w = h_half[2 * i + offsets[k].di] * chart_len[k];
      const long long next = static_cast<long long>(ni) * n_t + nj;
      const double nd = d + w;
      if (nd < dist[next]) {
        dist[next] = nd;
        heap.push({nd, next});
      }
    }
  }
  throw SolverError("oracle_distance: target unreachable");
}

}  // namespace wlab
