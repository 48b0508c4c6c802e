#include "wlab/ghdist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "wlab/warp.hpp"

namespace wlab {

FiniteMetricSpace::FiniteMetricSpace(std::size_t n, std::vector<double> d) : n_(n), d_(std::move(d)) {
  if (n_ == 0) throw PreconditionError("finite metric space needs at least one point");
  if (d_.size() != n_ * n_) {
    throw PreconditionError(fmt::format("distance matrix has {} entries, expected {}", d_.size(), n_ * n_));
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0.0) throw PreconditionError(fmt::format("nonzero diagonal at {}", i));
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = (*this)(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw PreconditionError(fmt::format("invalid distance d({}, {}) = {}", i, j, v));
      }
      if (v != (*this)(j, i)) throw PreconditionError(fmt::format("asymmetric distance at ({}, {})", i, j));
      diam_ = std::max(diam_, v);
    }
  }
  const double slack = 1e-9 * (1.0 + diam_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      for (std::size_t k = 0; k < n_; ++k) {
        if ((*this)(i, j) > (*this)(i, k) + (*this)(k, j) + slack) {
          throw PreconditionError(fmt::format("triangle inequality fails: d({},{}) = {} > d({},{}) + d({},{}) = {}",
                                              i, j, (*this)(i, j), i, k, k, j, (*this)(i, k) + (*this)(k, j)));
        }
      }
    }
  }
}

FiniteMetricSpace FiniteMetricSpace::from_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<double> d;
  d.reserve(rows.size() * rows.size());
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw PreconditionError("distance matrix is not square");
    d.insert(d.end(), row.begin(), row.end());
  }
  return FiniteMetricSpace(rows.size(), std::move(d));
}

Correspondence Correspondence::identity(std::size_t n) {
  Correspondence c;
  for (std::size_t i = 0; i < n; ++i) c.pairs.emplace_back(i, i);
  return c;
}

Correspondence Correspondence::transpose() const {
  Correspondence c;
  c.pairs.reserve(pairs.size());
  for (const auto& [i, j] : pairs) c.pairs.emplace_back(j, i);
  return c;
}

void validate(const Correspondence& corr, const FiniteMetricSpace& A, const FiniteMetricSpace& B) {
  std::vector<char> seen_a(A.size(), 0), seen_b(B.size(), 0);
  for (const auto& [i, j] : corr.pairs) {
    if (i >= A.size() || j >= B.size()) {
      throw PreconditionError(fmt::format("correspondence pair ({}, {}) out of range", i, j));
    }
    seen_a[i] = 1;
    seen_b[j] = 1;
  }
  const auto miss_a = std::find(seen_a.begin(), seen_a.end(), 0);
  if (miss_a != seen_a.end()) {
    throw PreconditionError(fmt::format("correspondence misses point {} of A", miss_a - seen_a.begin()));
  }
  const auto miss_b = std::find(seen_b.begin(), seen_b.end(), 0);
  if (miss_b != seen_b.end()) {
    throw PreconditionError(fmt::format("correspondence misses point {} of B", miss_b - seen_b.begin()));
  }
}

double correspondence_distortion(const FiniteMetricSpace& A, const FiniteMetricSpace& B,
                                 const Correspondence& corr) {
  validate(corr, A, B);
  double worst = 0.0;
  const auto& p = corr.pairs;
  for (std::size_t x = 0; x < p.size(); ++x) {
    for (std::size_t y = x + 1; y < p.size(); ++y) {
      worst = std::max(worst, std::abs(A(p[x].first, p[y].first) - B(p[x].second, p[y].second)));
    }
  }
  return worst;
}

namespace {

double bijection_distortion(const FiniteMetricSpace& A, const FiniteMetricSpace& B,
                            const std::vector<std::size_t>& perm) {
  double worst = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      worst = std::max(worst, std::abs(A(i, j) - B(perm[i], perm[j])));
    }
  }
  return worst;
}

// Uniform integer in [0, n) by rejection; portable across standard libraries.
std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

}  // namespace

GhBound gh_upper_bijection(const FiniteMetricSpace& A, const FiniteMetricSpace& B, std::int64_t budget,
                           std::uint64_t seed) {
  if (A.size() != B.size()) {
    throw PreconditionError(fmt::format("gh_upper_bijection needs equal sizes, got {} and {}", A.size(), B.size()));
  }
  const std::size_t n = A.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  GhBound out;
  out.seed = seed;
  double best = bijection_distortion(A, B, perm);
  out.evaluated = 1;

  if (n <= 8) {
    out.method = "exhaustive";
    while (std::next_permutation(perm.begin(), perm.end())) {
      best = std::min(best, bijection_distortion(A, B, perm));
      ++out.evaluated;
    }
    out.value = 0.5 * best;
    return out;
  }

  out.method = "local-search";
  std::mt19937_64 rng(seed);
  double current = best;
  for (std::int64_t it = 0; it < budget; ++it) {
    const std::size_t i = draw_index(rng, n);
    std::size_t j = draw_index(rng, n - 1);
    if (j >= i) ++j;
    std::swap(perm[i], perm[j]);
    const double v = bijection_distortion(A, B, perm);
    ++out.evaluated;
    if (v <= current) {
      current = v;
      best = std::min(best, v);
    } else {
      std::swap(perm[i], perm[j]);
    }
  }
  out.value = 0.5 * best;
  return out;
}

double gh_lower_diam(const FiniteMetricSpace& A, const FiniteMetricSpace& B) {
  return 0.5 * std::abs(A.diameter() - B.diameter());
}

GhReport compare(const FiniteMetricSpace& A, const FiniteMetricSpace& B, std::int64_t budget, std::uint64_t seed) {
  GhReport rep;
  rep.n_A = A.size();
  rep.n_B = B.size();
  rep.lower = gh_lower_diam(A, B);
  const GhBound up = gh_upper_bijection(A, B, budget, seed);
  rep.upper = up.value;
  rep.method = up.method;
  rep.seed = seed;
  return rep;
}

nlohmann::json to_json(const GhReport& report) {
  return {{"n_A", report.n_A},     {"n_B", report.n_B},       {"lower", report.lower},
          {"upper", report.upper}, {"method", report.method}, {"seed", report.seed}};
}

}  // namespace wlab
